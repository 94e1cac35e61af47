import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kappa_solenoid.dynamics import (
    Character,
    aperiodicity_witness,
    bohr_embed,
    classify,
    entropy,
    entropy_growth_check,
    enumerate_characters,
    find_roots,
    fixed_count,
    k_groups,
    least_period_count,
    mobius,
    orbit_periods,
    satisfies_recursion,
    shift_orbits,
)
from kappa_solenoid.errors import GuardExceeded, InvalidParameter
from kappa_solenoid.exactalg import Algebraic, Transcendental, companion_matrix, normalize_poly

from conftest import CORPUS

F = Fraction


def P(*coeffs):
    return normalize_poly(list(coeffs))


# --- counts -------------------------------------------------------------------

def test_fixed_count_examples():
    assert fixed_count(P(-2, 1), 3) == 7
    assert fixed_count(P(-1, 2), 3) == 7
    assert fixed_count(P(-1, -1, 1), 3) == 4


def test_fixed_count_rejects_bad_period():
    with pytest.raises(InvalidParameter):
        fixed_count(P(-2, 1), 0)
    with pytest.raises(InvalidParameter):
        least_period_count(P(-2, 1), 0)


def test_least_period_examples():
    assert least_period_count(P(-2, 1), 2) == 2
    assert least_period_count(P(-2, 1), 1) == 1
    assert least_period_count(P(-1, -1, 1), 2) == 0


def test_mobius_values():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


@pytest.mark.parametrize("q", range(1, 13))
def test_fixed_count_root_product_oracle(corpus_poly, q):
    coeffs = corpus_poly.coeffs
    prod = 1.0
    for k in range(1, q + 1):
        z = np.exp(2j * np.pi * k / q)
        prod *= abs(np.polyval(list(reversed(coeffs)), z))
    assert fixed_count(corpus_poly, q) == round(prod)
    assert abs(prod - round(prod)) < 1e-6 * max(1, prod)


@pytest.mark.parametrize("q", range(1, 13))
def test_moebius_identity_and_nonnegative(corpus_poly, q):
    divs = [e for e in range(1, q + 1) if q % e == 0]
    assert sum(least_period_count(corpus_poly, e) for e in divs) == fixed_count(corpus_poly, q)
    assert least_period_count(corpus_poly, q) >= 0
    assert least_period_count(corpus_poly, q) % q == 0


@pytest.mark.parametrize("q", range(1, 13))
def test_reciprocal_invariance(corpus_poly, q):
    assert fixed_count(corpus_poly, q) == fixed_count(corpus_poly.reciprocal(), q)


# --- enumeration ----------------------------------------------------------------

def test_enumerate_bs2_period_two():
    chars = enumerate_characters(P(-2, 1), 2)
    assert [c.angles for c in chars] == [(0, 0), (F(1, 3), F(2, 3)), (F(2, 3), F(1, 3))]


def test_enumerate_trivial_always_present(corpus_poly):
    assert enumerate_characters(P(-2, 1), 1)[0].angles == (0,)
    assert Character((F(0),)) in enumerate_characters(corpus_poly, 1)


@pytest.mark.parametrize("q", range(1, 9))
def test_enumeration_matches_count(corpus_poly, q):
    chars = enumerate_characters(corpus_poly, q)
    assert len(chars) == fixed_count(corpus_poly, q)
    assert len(set(chars)) == len(chars)
    assert all(satisfies_recursion(corpus_poly, c) for c in chars)
    # closed under the dual automorphism
    assert {c.shift(1) for c in chars} == set(chars)
    assert sum(c.is_least_period for c in chars) == least_period_count(corpus_poly, q)


def test_enumeration_brute_force_oracle():
    """For Q = x - 2 and q = 4 every solution has denominator 15: search them all."""
    poly = P(-2, 1)
    brute = {
        Character(tuple(F(k * 2**n, 15) for n in range(4)))
        for k in range(15)
    }
    brute = {c for c in brute if satisfies_recursion(poly, c)}
    assert set(enumerate_characters(poly, 4)) == brute


def test_enumeration_guard():
    with pytest.raises(GuardExceeded):
        enumerate_characters(P(-5, 1), 10, guard=1000)


def test_shift_orbits_partition():
    chars = [c for c in enumerate_characters(P(-1, -1, 1), 6) if c.is_least_period]
    orbits = shift_orbits(chars)
    assert sum(len(o) for o in orbits) == len(chars)
    assert all(len(o) == 6 for o in orbits)
    for o in orbits:
        assert o[0] == min(o, key=lambda c: c.angles)


def test_character_validation():
    with pytest.raises(InvalidParameter):
        Character(())
    chi = Character((F(5, 4), F(-1, 4)))
    assert chi.angles == (F(1, 4), F(3, 4))


# --- entropy -----------------------------------------------------------------

def test_entropy_examples():
    assert abs(entropy(P(-2, 1)).value - math.log(2)) < 1e-12
    assert abs(entropy(P(-1, 2)).value - math.log(2)) < 1e-12
    assert abs(entropy(P(-1, -1, 1)).value - math.log((1 + 5**0.5) / 2)) < 1e-12


def test_entropy_transcendental_infinite():
    assert entropy(Transcendental()).value == math.inf


def test_entropy_rejects_bad_tol():
    with pytest.raises(InvalidParameter):
        entropy(P(-2, 1), tol=0)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_entropy_mahler_measure_oracle(name):
    """Mahler measure from sympy's high-precision roots."""
    x = sympy.Symbol("x")
    coeffs = CORPUS[name]
    poly = sympy.Poly(list(reversed(coeffs)), x)
    roots = poly.nroots(n=30)
    oracle = math.log(abs(coeffs[-1])) + sum(
        math.log(abs(complex(r))) for r in roots if abs(complex(r)) > 1
    )
    rep = entropy(normalize_poly(coeffs))
    assert abs(rep.value - oracle) < 1e-12
    assert rep.error_bound < 1e-12
    assert all(r < 1e-12 for r in rep.residuals)


def test_root_disks_are_disjoint():
    enc = find_roots(P(-1, -1, 0, 1))
    roots, radii = enc.roots, enc.radii
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            assert abs(roots[i] - roots[j]) > radii[i] + radii[j]


def test_entropy_near_unit_circle():
    """Salem polynomial: two roots lie exactly on the unit circle."""
    rep = entropy(P(1, -1, -1, -1, 1))
    assert rep.notes and rep.error_bound < 1e-12
    x = sympy.Symbol("x")
    roots = sympy.Poly(x**4 - x**3 - x**2 - x + 1, x).nroots(n=30)
    oracle = sum(math.log(abs(complex(r))) for r in roots if abs(complex(r)) > 1 + 1e-20)
    assert abs(rep.value - oracle) < 1e-9


def test_growth_examples():
    t = entropy_growth_check(P(-2, 1), 20)
    assert t.rows[9][2] == pytest.approx(math.log(1023) / 10, abs=1e-15)
    assert abs(t.rows[19][2] - math.log(2)) < 1e-6
    g = entropy_growth_check(P(-1, -1, 1), 2)
    assert g.rows[0] == (1, 1, 0.0)
    with pytest.raises(InvalidParameter):
        entropy_growth_check(P(-2, 1), 1)


def test_growth_converges(corpus_poly):
    t = entropy_growth_check(corpus_poly, 20)
    h = t.entropy
    # |h - log(c_q)/q| <= C/q with C fixed by the q = 10 value
    c = 10 * t.deviations[9] + 1e-12
    assert t.deviations[19] <= c / 20 + 1e-12
    assert t.deviations[19] < 5e-2


# --- Bohr embedding -------------------------------------------------------------

def test_bohr_zero_maps_to_zero(corpus_poly):
    z = bohr_embed(corpus_poly, [0] * corpus_poly.degree, range(-3, 4))
    assert all(all(x == 0 for x in v) for v in z.values())


def test_bohr_bs2_third():
    z = bohr_embed(P(-2, 1), [F(1, 3)], range(-2, 3))
    assert z[0] == (F(1, 3),) and z[1] == (F(2, 3),) and z[2] == (F(1, 3),)
    assert z[-1] == (F(1, 6),) and z[-2] == (F(1, 12),)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_bohr_recursion(name):
    poly = normalize_poly(CORPUS[name])
    a = companion_matrix(poly)
    phi = [F(k + 1, 7 + k) for k in range(poly.degree)]
    z = bohr_embed(poly, phi, range(-4, 5))
    for k in range(-4, 4):
        lhs = [poly.leading * x for x in z[k + 1]]
        rhs = [sum(a[i][j] * z[k][j] for j in range(poly.degree)) for i in range(poly.degree)]
        assert all((u - v) % 1 == 0 for u, v in zip(lhs, rhs))


def test_bohr_formula_against_matrix_power():
    poly = P(-1, -1, 1)
    a = sympy.Matrix(companion_matrix(poly))
    phi = sympy.Matrix([sympy.Rational(1, 5), sympy.Rational(2, 9)])
    z = bohr_embed(poly, [F(1, 5), F(2, 9)], range(0, 6))
    for k in range(6):
        ref = (a**k * phi) / poly.leading**k
        assert tuple(F(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) % 1 for v in ref) == z[k]


def test_aperiodicity_witness():
    poly = P(-2, 1)
    w = aperiodicity_witness(poly, [math.sqrt(2) - 1], 6)
    assert all(v is not None for v in w.values())
    assert orbit_periods(poly, [F(1, 3)], 6) == [2, 4, 6]


# --- classification --------------------------------------------------------------

def test_classify_examples():
    v = classify(P(-2, 1), P(-1, 2), qmax=12)
    assert not v.distinguished and v.qmax == 12
    assert any("reciprocal" in n for n in v.notes)
    v = classify(P(-2, 1), P(-3, 1))
    assert v.distinguished and v.witness_q == 1 and v.counts == (1, 2)
    v = classify(Algebraic(P(-2, 1)), Transcendental())
    assert v.distinguished and v.entropy_gap == math.inf
    v = classify(Transcendental(), Transcendental())
    assert not v.distinguished and v.qmax == math.inf


def test_classify_by_entropy_only():
    """Counts agree with themselves; a distinguished verdict always carries a witness."""
    v = classify(P(-1, -1, 1), P(-1, -2, 1), qmax=6)
    assert v.distinguished
    assert v.witness_q is not None or v.entropy_gap > 0


# --- K-theory ----------------------------------------------------------------------

def test_kgroups_examples():
    k = k_groups(1, 3)
    assert (k.k0, k.k1, k.k1_torsion) == ("Z", "Z + Z_2", 2)
    assert k_groups(2, 3).k1 == "Z" and k_groups(2, 3).k1_torsion == 1
    assert k_groups(2, 1).k1 == "Z"


@pytest.mark.parametrize("m,l", [(2, 2), (2, 4), (0, 3), (3, -1)])
def test_kgroups_rejects(m, l):
    with pytest.raises(InvalidParameter):
        k_groups(m, l)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 200), st.integers(1, 200))
def test_kgroups_torsion_order(m, l):
    if math.gcd(m, l) != 1 or m == l:
        return
    k = k_groups(m, l)
    assert k.k0 == "Z" and k.k1_torsion == abs(l - m)


# --- property tests on random polynomials ------------------------------------------

@st.composite
def valid_polys(draw):
    d = draw(st.integers(1, 3))
    coeffs = draw(st.lists(st.integers(-6, 6), min_size=d + 1, max_size=d + 1))
    try:
        return normalize_poly(coeffs)
    except InvalidParameter:
        return None


@settings(max_examples=80, deadline=None)
@given(valid_polys(), st.integers(1, 6))
def test_random_poly_enumeration_invariants(poly, q):
    if poly is None or fixed_count(poly, q) > 5000:
        return
    chars = enumerate_characters(poly, q)
    assert len(chars) == fixed_count(poly, q)
    assert all(satisfies_recursion(poly, c) for c in chars)
    assert fixed_count(poly, q) == fixed_count(poly.reciprocal(), q)


@settings(max_examples=40, deadline=None)
@given(valid_polys())
def test_random_poly_entropy_matches_numpy(poly):
    if poly is None:
        return
    roots = np.roots(list(reversed(poly.coeffs)))
    if any(abs(abs(r) - 1) < 1e-6 for r in roots):
        return
    oracle = math.log(poly.leading) + sum(math.log(abs(r)) for r in roots if abs(r) > 1)
    assert abs(entropy(poly).value - oracle) < 1e-8
