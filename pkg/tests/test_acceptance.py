"""Runs every acceptance criterion and records one line per criterion."""

import pytest

import conftest
from jetrec.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    conftest.ACCEPTANCE_LINES.append((number, result.line()))
    print(result.line())
    assert result.passed, result.detail
