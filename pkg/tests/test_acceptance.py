"""Acceptance gate: one test per headline criterion, at the stated tolerance.

Each test runs the corresponding named criterion from the suite and asserts
both the checks and the runtime budget where one is stated.  The slope
criterion for the associative linearization is currently red: the measured
log-log slope is 2.0, outside the expected 1.0 +- 0.2, and is reported
as-is rather than adjusted.
"""
import pytest

from caligeo import suite

# (number, wall-clock budget in seconds; None = no stated budget)
BUDGETS = {
    1: 1.0,
    2: 5.0,
    3: 1.0,
    4: 2.0,
    5: 5.0,
    6: None,
    7: 300.0,
    8: 60.0,
    9: None,
    10: None,
    11: 600.0,
    12: None,
    13: None,
}


@pytest.mark.parametrize("number", sorted(BUDGETS), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    res = suite.run_criterion(number)
    budget = BUDGETS[number]
    if budget is not None:
        assert res.elapsed_s < budget, (
            f"criterion {number} took {res.elapsed_s:.2f}s, budget {budget:.0f}s"
        )
    assert res.passed, "\n" + res.report.to_text()
