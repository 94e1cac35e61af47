import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kappa_solenoid.errors import ContextMismatch, InvalidParameter, ReducibleError
from kappa_solenoid.exactalg import (
    Algebraic,
    BElement,
    DeformationParams,
    IntPolynomial,
    Transcendental,
    companion_matrix,
    det_bareiss,
    element,
    from_word,
    gen_u,
    gen_v,
    identity,
    mat_mul,
    normalize_poly,
    params_to_a,
    power_vector,
    resultant,
    smith_normal_form,
)

from conftest import CORPUS, alg


# --- parameters -------------------------------------------------------------

def test_params_to_a_recognises_two():
    a, poly = params_to_a(DeformationParams(1.7, -1.7 * math.log(2)))
    assert a == pytest.approx(2.0, abs=1e-12)
    assert poly.coeffs == (-2, 1)


def test_params_to_a_three():
    a, poly = params_to_a(DeformationParams(1.0, -math.log(3)))
    assert a == pytest.approx(3.0, abs=1e-12)
    assert poly.coeffs == (-3, 1)


def test_params_to_a_rejects_one_and_bad_kappa():
    with pytest.raises(InvalidParameter, match="a=1 excluded"):
        params_to_a(DeformationParams(1.0, 0.0))
    with pytest.raises(InvalidParameter):
        params_to_a(DeformationParams(0.0, 1.0))


def test_params_to_a_irrational_has_no_polynomial():
    a, poly = params_to_a(DeformationParams(1.0, -0.5))
    assert a == pytest.approx(math.exp(0.5))
    assert poly is None


# --- normalize_poly ---------------------------------------------------------

def test_normalize_rejects_a_equal_one():
    with pytest.raises(InvalidParameter, match="a=1 excluded"):
        normalize_poly([-2, 2])


def test_normalize_accepts_golden():
    p = normalize_poly([-1, -1, 1])
    assert (p.degree, p.leading, p.constant) == (2, 1, -1)
    assert p.irreducibility_verified


def test_normalize_rejects_reducible_with_witness():
    with pytest.raises(ReducibleError) as exc:
        normalize_poly([-4, 0, 1])
    f, g = exc.value.witness
    prod = sympy.Poly(list(reversed(f)), sympy.Symbol("x")) * sympy.Poly(list(reversed(g)), sympy.Symbol("x"))
    assert prod.as_expr().expand() == sympy.sympify("x**2 - 4")


def test_normalize_quartic_product_of_quadratics_is_caught():
    # (x^2 - x - 1)(x^2 + x + 2) has no rational root
    with pytest.raises(ReducibleError):
        normalize_poly([-2, -3, 0, 0, 1])


def test_normalize_makes_primitive_and_positive():
    p = normalize_poly([4, -2])  # -2x + 4 -> x - 2
    assert p.coeffs == (-2, 1)


@pytest.mark.parametrize("raw", [[], [0, 0], [5], [0, 1, 1]])
def test_normalize_rejects_degenerate(raw):
    with pytest.raises(InvalidParameter):
        normalize_poly(raw)


def test_normalize_rejects_no_positive_root():
    with pytest.raises(InvalidParameter):
        normalize_poly([2, 1])  # root -2


def test_normalize_high_degree_is_flagged_unverified():
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always")
        p = normalize_poly([-1, 0, 0, 0, 0, 1, 1])
    assert not p.irreducibility_verified


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_irreducible_by_sympy(name):
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(CORPUS[name])), x)
    assert poly.is_irreducible
    normalize_poly(CORPUS[name])


# --- companion matrix -------------------------------------------------------

def test_companion_reciprocal_integer_is_one():
    assert companion_matrix(normalize_poly([-1, 5])) == [[1]]


def test_companion_integer():
    assert companion_matrix(normalize_poly([-7, 1])) == [[7]]


def test_companion_golden():
    assert companion_matrix(normalize_poly([-1, -1, 1])) == [[0, 1], [1, 1]]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_companion_identity(name):
    """q_d a^j - sum_k A_jk a^(k-1) reduces to zero in B_a."""
    poly = normalize_poly(CORPUS[name])
    param = Algebraic(poly)
    a = companion_matrix(poly)
    for j in range(1, poly.degree + 1):
        mono = {j: poly.leading}
        b = BElement(param, mono)
        for k in range(1, poly.degree + 1):
            b = b - BElement(param, {k - 1: a[j - 1][k - 1]})
        assert b.is_zero()


# --- resultant --------------------------------------------------------------

def test_resultant_examples():
    assert resultant((-1, -1, 1), (-1, 0, 0, 1)) == -4
    assert abs(resultant((-2, 1), (-1, 1))) == 1
    assert abs(resultant((-1, 2), (-1, 0, 1))) == 3


@pytest.mark.parametrize("name", sorted(CORPUS))
@pytest.mark.parametrize("q", [1, 2, 3, 5, 8, 12])
def test_resultant_matches_sympy_and_root_product(name, q):
    x = sympy.Symbol("x")
    coeffs = CORPUS[name]
    g = (-1,) + (0,) * (q - 1) + (1,)
    ours = resultant(coeffs, g)
    # sympy reorders arguments by degree, so only the magnitude is convention-free
    oracle = sympy.resultant(sympy.Poly(list(reversed(coeffs)), x), sympy.Poly(list(reversed(g)), x))
    assert abs(ours) == abs(int(oracle))
    assert ours == round(_root_formula(coeffs, g))
    prod = 1.0
    for k in range(1, q + 1):
        z = complex(math.cos(2 * math.pi * k / q), math.sin(2 * math.pi * k / q))
        prod *= abs(sum(c * z**i for i, c in enumerate(coeffs)))
    assert abs(prod - abs(ours)) < 1e-6 * max(1.0, prod)


def _root_formula(p, g):
    """lc(p)^deg(g) * prod g(r) over the roots r of p."""
    roots = np.roots(list(reversed(p)))
    val = complex(p[-1]) ** (len(g) - 1)
    for r in roots:
        val *= np.polyval(list(reversed(g)), r)
    return val.real


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5), st.lists(st.integers(-9, 9), min_size=2, max_size=5))
def test_resultant_matches_sympy_random(p, g):
    x = sympy.Symbol("x")
    if p[-1] == 0 or g[-1] == 0:
        return
    oracle = sympy.resultant(sympy.Poly(list(reversed(p)), x), sympy.Poly(list(reversed(g)), x))
    ours = resultant(p, g)
    assert abs(ours) == abs(int(oracle))
    assert abs(ours - _root_formula(p, g)) < 1e-6 * max(1.0, abs(ours))


# --- Smith normal form --------------------------------------------------------

def _check_snf(m):
    u, s, v = smith_normal_form(m)
    n = len(m)
    assert mat_mul(mat_mul(u, m), v) == s
    assert abs(det_bareiss(u)) == 1 and abs(det_bareiss(v)) == 1
    diag = [s[i][i] for i in range(n)]
    assert all(s[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    assert math.prod(diag) == abs(det_bareiss(m))
    return diag


def test_snf_examples():
    assert _check_snf([[3]]) == [3]
    assert _check_snf([[2, 0], [0, 4]]) == [2, 4]
    assert _check_snf([[1, 2], [3, 4]]) == [1, 2]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_random_3x3(m):
    diag = _check_snf(m)
    from sympy.matrices.normalforms import smith_normal_form as sym_snf
    oracle = sym_snf(sympy.Matrix(m), domain=sympy.ZZ)
    assert sorted(abs(int(oracle[i, i])) for i in range(3)) == sorted(diag)


# --- B_a and G_a ----------------------------------------------------------------

def test_shift_by_minus_one_halves(bs2):
    b = BElement(bs2, {0: 1})
    assert b.shift(-1).canonical == (Fraction(1, 2),)


def test_golden_square_reduces(golden):
    assert BElement(golden, {2: 1}).canonical == (Fraction(1), Fraction(1))


def test_transcendental_cancellation(transcendental):
    b = BElement(transcendental, {1: 1, -1: 1})
    assert (b - BElement(transcendental, {-1: 1}) - BElement(transcendental, {1: 1})).is_zero()


def test_context_mismatch(bs2, bs3):
    with pytest.raises(ContextMismatch):
        BElement(bs2, {0: 1}) + BElement(bs3, {0: 1})
    with pytest.raises(ContextMismatch):
        gen_u(bs2) * gen_u(bs3)


def test_group_law_examples(bs2):
    u, v = gen_u(bs2), gen_v(bs2)
    uv = u * v
    assert uv.l == 1 and uv.b.canonical == (Fraction(2),)
    assert uv == v * v * u
    assert u * v != v * u
    assert (v * u).b.canonical == (Fraction(1),)
    assert u * identity(bs2) == u


def test_bs_relation_in_group(bs3):
    assert from_word(bs3, "uvU") == gen_v(bs3) ** 3


def test_transcendental_group_is_not_metabelian_collapse(transcendental):
    u, v = gen_u(transcendental), gen_v(transcendental)
    assert u * v * u.inverse() != v ** 2
    # conjugates of v commute
    w = u * v * u.inverse()
    assert w * v == v * w


PARAMS = [alg([-2, 1]), alg([-1, -1, 1]), alg([-2, -1, 2]), Transcendental()]


@settings(max_examples=250, deadline=None)
@given(st.sampled_from(PARAMS), st.text("uvUV", max_size=8), st.text("uvUV", max_size=8), st.text("uvUV", max_size=8))
def test_group_axioms(param, w1, w2, w3):
    g, h, k = (from_word(param, w) for w in (w1, w2, w3))
    e = identity(param)
    assert (g * h) * k == g * (h * k)
    assert g * e == g and e * g == g
    assert (g * g.inverse()).is_identity()
    assert (g.inverse() * g).is_identity()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PARAMS[:3]), st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5))
def test_canonical_form_is_representation_independent(param, mono):
    """Adding a multiple of Q_a(a) a^n never changes the canonical vector."""
    b = BElement(param, mono)
    coeffs = param.poly.coeffs
    extra = dict(mono)
    for i, c in enumerate(coeffs):
        extra[i + 2] = extra.get(i + 2, 0) + 3 * c
    assert BElement(param, extra) == b
    assert b.reduced() == b
    assert b.reduced().reduced().key == b.reduced().key


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PARAMS[:3]), st.integers(-8, 8))
def test_power_vector_multiplicative(param, n):
    """a^n computed from a^(n-1) by one multiplication agrees with the cache."""
    b = BElement(param, {n - 1: 1}).shift(1)
    assert b.canonical == power_vector(param.poly, n)


def test_canonical_denominators(bs2):
    poly = normalize_poly([-2, -1, 2])
    for n in range(-6, 7):
        for c in power_vector(poly, n):
            den = c.denominator
            while den % 2 == 0:
                den //= 2
            assert den == 1
