"""The acceptance suite: each criterion at its stated tolerance, one PASS/FAIL line each."""

import pytest

from rcfluct.verify import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=[f"{c.number:02d}-{c.title}" for c in CHECKS])
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print()
        print(result.line())
        for line in result.details:
            print(f"      {line}")
    assert result.passed, "\n".join(result.details)
