"""Runs every acceptance criterion at full size and its stated tolerance.

One PASS/FAIL line per criterion is printed in the terminal summary.
"""
import pytest

from ptmat.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__.removeprefix("criterion_") for c in CRITERIA])
def test_criterion(criterion, report_line):
    result = criterion(seed=0, quick=False)
    report_line(result.line())
    print(result.line())
    assert result.passed, result.line()


def test_quick_mode_is_deterministic():
    from ptmat.acceptance import criterion_closed_forms
    a = criterion_closed_forms(seed=42, quick=True)
    b = criterion_closed_forms(seed=42, quick=True)
    assert a.samples == 100
    assert a.worst == b.worst
