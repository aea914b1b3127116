"""Matroid isomorphism: graphic (2-isomorphism), linear, and oracle-backed
matroids, with the reductions between them."""
from .core import (CapacityError, InputError, IntegrityError, IsoWitness, ListMatroid, MatroidError,
                   MatroidOracle, TableMatroid, brute_force_iso, check_axioms, circuits, closure,
                   count_automorphisms, direct_sum, hyperplanes, is_uniform, rank, uniform_matroid)
from .decompose import DecompositionTree, excised_surgery, recompose, triconnected_decompose, validate_tree
from .gi import ColoredGraph, canonical_form, colored_3conn_2iso, graph_isomorphism, tree_code
from .gmi import GMIStats, gmi_canonical_code, gmi_test
from .linear import (PrimeField, PrimeFieldMatrix, color_gadget_linear, colored_lmi_test, gi_to_lmib,
                     linear_iso, linear_oracle, lmi_test, lmib_to_gi, stk_construct,
                     uniform_representation)
from .multigraph import (Multigraph, color_gadget_graphic, cycle_basis, gen_modk_gadget, graphic_oracle,
                         is_matroid_automorphism, random_2iso_pair)
from .reductions import (GeneratorSet, OrbitPartition, auto_from_iso, gma_generators, iso_from_auto,
                         lma_generators, mib_to_gmi)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "InputError",
    "IntegrityError",
    "IsoWitness",
    "ListMatroid",
    "MatroidError",
    "MatroidOracle",
    "TableMatroid",
    "brute_force_iso",
    "check_axioms",
    "circuits",
    "closure",
    "count_automorphisms",
    "direct_sum",
    "hyperplanes",
    "is_uniform",
    "rank",
    "uniform_matroid",
    "DecompositionTree",
    "excised_surgery",
    "recompose",
    "triconnected_decompose",
    "validate_tree",
    "ColoredGraph",
    "canonical_form",
    "colored_3conn_2iso",
    "graph_isomorphism",
    "tree_code",
    "GMIStats",
    "gmi_canonical_code",
    "gmi_test",
    "PrimeField",
    "PrimeFieldMatrix",
    "color_gadget_linear",
    "colored_lmi_test",
    "gi_to_lmib",
    "linear_iso",
    "linear_oracle",
    "lmi_test",
    "lmib_to_gi",
    "stk_construct",
    "uniform_representation",
    "Multigraph",
    "color_gadget_graphic",
    "cycle_basis",
    "gen_modk_gadget",
    "graphic_oracle",
    "is_matroid_automorphism",
    "random_2iso_pair",
    "GeneratorSet",
    "OrbitPartition",
    "auto_from_iso",
    "gma_generators",
    "iso_from_auto",
    "lma_generators",
    "mib_to_gmi",
]
