import pytest

from embedgauge import fixtures


@pytest.fixture(scope="session")
def reference_profiles():
    return fixtures.reference_profiles()


@pytest.fixture(scope="session")
def reference_separations():
    return fixtures.reference_separations()


@pytest.fixture(scope="session")
def reference_gain_rows():
    return fixtures.reference_gains()


@pytest.fixture(scope="session")
def reference_ablation_cells():
    return fixtures.reference_ablation()
