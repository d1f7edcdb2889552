"""The eight acceptance criteria, one test each; every run prints a pass/fail line."""
from __future__ import annotations

import pytest

from quadext.suite import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_acceptance_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.failures


def test_all_eight_criteria_are_defined():
    assert [c[0] for c in CRITERIA] == list(range(1, 9))
