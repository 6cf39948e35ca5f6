import pytest

from qcclab import ConvCode, PolyMatrix


@pytest.fixture(scope="session")
def rate_half_parent() -> ConvCode:
    """The flagship (2,1,2) parent with taps 1+D^2 and 1+D+D^2."""
    return ConvCode(PolyMatrix.from_coeffs([[[1, 0, 1], [1, 1, 1]]], 2))


@pytest.fixture(scope="session")
def catastrophic_parent() -> ConvCode:
    return ConvCode(PolyMatrix.from_coeffs([[[1, 1], [1, 0, 1]]], 2))


@pytest.fixture(scope="session")
def repetition_parent() -> ConvCode:
    """[3,1] repetition block code (memoryless)."""
    return ConvCode(PolyMatrix.from_coeffs([[[1], [1], [1]]], 2))
