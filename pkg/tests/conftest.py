import pytest

from infersim import FICTIONAL_MODEL_NAME, builtin_models


@pytest.fixture(scope="session")
def catalog():
    """The full bundled catalog, fictional twin included."""
    return builtin_models()


@pytest.fixture(scope="session")
def cloud_catalog():
    """The bundled catalog as experiments use it by default."""
    return builtin_models().without(FICTIONAL_MODEL_NAME)
