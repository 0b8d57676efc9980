import pytest

from zenocat.acceptance import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__ for c in CHECKS])
def test_criterion(check, record_check):
    result = check()
    print(result.line())
    record_check(result.line())
    assert result.passed, result.line()
