import pytest

from nilrigid.algebra import (
    free32_algebra,
    free32_automorphism_matrix,
    smale_algebra,
    smale_automorphism_matrix,
)
from nilrigid.analysis import compute_grading, compute_spectrum, rigidity_verdict, validate_automorphism


@pytest.fixture(scope="session")
def smale_auto():
    return validate_automorphism(smale_algebra(), smale_automorphism_matrix())


@pytest.fixture(scope="session")
def free32_auto():
    return validate_automorphism(free32_algebra(), free32_automorphism_matrix())


@pytest.fixture(scope="session")
def smale_grading(smale_auto):
    return compute_grading(smale_auto)


@pytest.fixture(scope="session")
def free32_grading(free32_auto):
    return compute_grading(free32_auto)


@pytest.fixture(scope="session")
def smale_spectrum(smale_auto, smale_grading):
    return compute_spectrum(smale_auto, smale_grading)


@pytest.fixture(scope="session")
def free32_spectrum(free32_auto, free32_grading):
    return compute_spectrum(free32_auto, free32_grading)


@pytest.fixture(scope="session")
def smale_verdict(smale_auto):
    return rigidity_verdict(smale_auto)


@pytest.fixture(scope="session")
def free32_verdict(free32_auto):
    return rigidity_verdict(free32_auto)
