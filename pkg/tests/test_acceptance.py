"""Acceptance gate: runs every numbered criterion at its stated tolerance
and prints one pass/fail line per criterion.  The CLI ``selftest``
subcommand executes exactly the same list."""

import pytest

from isocurv.acceptance import ALL_CRITERIA


@pytest.mark.parametrize(
    "criterion", ALL_CRITERIA, ids=[f"criterion_{i + 1:02d}" for i in range(len(ALL_CRITERIA))]
)
def test_criterion(criterion):
    result = criterion()
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {result.number:02d} {status}  {result.name}  [{result.detail}]")
    assert result.passed, f"{result.name}: {result.detail}"
