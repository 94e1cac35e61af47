import pytest

from kappa_solenoid.exactalg import Algebraic, Transcendental, normalize_poly

# Irreducible polynomials with a positive root != 1, ascending coefficients.
CORPUS = {
    "x-2": [-2, 1],
    "x-3": [-3, 1],
    "2x-1": [-1, 2],
    "3x-2": [-2, 3],
    "x^2-x-1": [-1, -1, 1],
    "x^2-2x-1": [-1, -2, 1],
    "2x^2-x-2": [-2, -1, 2],
    "x^3-x-1": [-1, -1, 0, 1],
}


def alg(coeffs):
    return Algebraic(normalize_poly(coeffs))


@pytest.fixture(params=sorted(CORPUS), ids=sorted(CORPUS))
def corpus_poly(request):
    return normalize_poly(CORPUS[request.param])


@pytest.fixture
def bs2():
    return alg([-2, 1])


@pytest.fixture
def bs3():
    return alg([-3, 1])


@pytest.fixture
def golden():
    return alg([-1, -1, 1])


@pytest.fixture
def transcendental():
    return Transcendental()
