"""Acceptance criteria A1-A10 at their pinned tolerances.

Each test prints its one-line verdict (also shown by ``matroidiso
selfcheck``) and fails if the criterion fails.
"""
import pytest

from matroidiso.acceptance import CRITERIA, run


@pytest.mark.slow
@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key, capsys):
    (res,) = run([key], out=_Sink())
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()


@pytest.mark.slow
def test_injected_gadget_fault_is_caught(capsys):
    (res,) = run(["A4"], faults=("gadget-length",), out=_Sink())
    with capsys.disabled():
        print("\n[fault gadget-length] " + res.line())
    assert not res.passed


class _Sink:
    def write(self, _):
        pass

    def flush(self):
        pass
