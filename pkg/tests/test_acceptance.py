"""All acceptance criteria at their stated tolerances; one PASS/FAIL line each.

The lines are collected in RESULTS and printed by the terminal-summary hook
in conftest.py, so they show up even without ``-s``.
"""
import pytest

from pascal_adic.checks import CHECKS, run_check

CRITERIA = [c for c in CHECKS if c.key.isdigit()]
RESULTS = {}


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion{c.key}" for c in CRITERIA])
def test_criterion(check):
    res = run_check(check, seed=0)
    RESULTS[int(check.key)] = f"{res.line()}  ({res.seconds:.2f}s, budget {res.budget_s}s)"
    print(RESULTS[int(check.key)])
    assert res.ok, res.detail
