"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run alone with `pytest tests/test_acceptance.py -s` or `python tests/test_acceptance.py`.
"""

import sys

import pytest

from quadsum.acceptance import CRITERIA

SUMMARY: list[str] = []


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda k: f"criterion_{k:02d}")
def test_criterion(number):
    result = CRITERIA[number]()
    SUMMARY.append(result.line())
    print(result.line())
    assert result.passed, result.to_dict()


if __name__ == "__main__":
    failed = 0
    for number in sorted(CRITERIA):
        result = CRITERIA[number]()
        print(result.line(), flush=True)
        failed += not result.passed
    sys.exit(1 if failed else 0)
