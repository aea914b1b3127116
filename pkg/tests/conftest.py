import os

import pytest
from hypothesis import HealthCheck, settings

from matroidiso import Multigraph, _accel

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def graph(n, edges, colors=None):
    return Multigraph(n, edges, colors)


K4 = graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
TRIANGLE = graph(3, [(0, 1), (1, 2), (2, 0)])
C4 = graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
P4 = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
BOWTIE = graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])
PETERSEN = graph(10, [(i, (i + 1) % 5) for i in range(5)]
                 + [(i, i + 5) for i in range(5)]
                 + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])


@pytest.fixture(params=[True, False], ids=["numba", "numpy"])
def backend(request):
    if request.param and not _accel.HAVE_NUMBA:
        pytest.skip("numba not available")
    prev = _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(prev)
