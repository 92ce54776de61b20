import pytest

from phonfront_bindings import open_session


@pytest.fixture(scope="session")
def session():
    return open_session()
