import pytest

from bdspell.alphabet import load_default_ruleset


@pytest.fixture(scope="session")
def rules():
    return load_default_ruleset()
