import pytest

from phonfront import Resources


@pytest.fixture(scope="session")
def res() -> Resources:
    return Resources.load()
