"""Acceptance suite: one test per criterion, each at its stated tolerance and
time budget.  Each test prints a single [PASS]/[FAIL] line with its timing.
"""

import pytest

from unclab.acceptance import CRITERIA, run_all


@pytest.fixture(scope="module")
def results():
    return {r.number: r for r in run_all()}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, results, capsys):
    res = results[number]
    with capsys.disabled():
        print("\n" + res.summary())
    failed = [f"{label}: {detail}" for label, ok, detail in res.checks if not ok]
    assert res.passed, "; ".join(failed) or f"over budget: {res.elapsed_s:.2f}s"


def test_full_suite_budget(results):
    total = sum(r.elapsed_s for r in results.values())
    assert total < 60.0, f"suite took {total:.1f}s"
