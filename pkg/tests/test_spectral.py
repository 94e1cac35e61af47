import dataclasses
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kappa_solenoid.errors import InvalidParameter
from kappa_solenoid.exactalg import from_word, gen_u, gen_v
from kappa_solenoid.representations import build_family
from kappa_solenoid.spectral import (
    CERTIFIED,
    DIVERGENT,
    commutator_norm,
    dense_commutator_norm,
    dirac_commuting,
    dirac_mixed,
    summability_report,
    trace_bound,
    zigzag,
)

from conftest import alg

F = Fraction


def test_commuting_first_block(bs2):
    spec = dirac_commuting(bs2, 2, 10)
    assert spec.block(1).c_q == 1
    assert float(spec.block(1).offset) == pytest.approx(math.sqrt(2), abs=1e-15)
    rep = summability_report(spec, 2)
    assert rep.increments[0] == pytest.approx(1 / 3, abs=1e-15)


def test_commuting_p4(bs2):
    spec = dirac_commuting(bs2, 4, 3)
    assert float(spec.block(1).offset) == pytest.approx(2 ** 0.25, abs=1e-15)
    rep = summability_report(spec, 4)
    assert rep.increments[0] == pytest.approx((1 + math.sqrt(2)) ** -2, abs=1e-15)


def test_summability_examples(bs2):
    spec = dirac_commuting(bs2, 2, 10)
    rep = summability_report(spec, 2)
    assert rep.verdict == CERTIFIED and rep.total < 1 and rep.tail_bound < 2 ** -9
    low = summability_report(spec, 0.1)
    assert low.verdict == DIVERGENT
    assert all(b > a for a, b in zip(low.increments[-4:], low.increments[-3:]))
    empty = summability_report(dirac_commuting(bs2, 2, 0), 2)
    assert empty.total == 0.0 and empty.verdict == CERTIFIED


def test_constructor_validation(bs2, transcendental):
    with pytest.raises(InvalidParameter):
        dirac_commuting(bs2, 0.5, 4)
    with pytest.raises(InvalidParameter):
        dirac_mixed(bs2, 1.5, 4)
    with pytest.raises(InvalidParameter):
        dirac_commuting(transcendental, 2, 4)
    with pytest.raises(InvalidParameter):
        summability_report(dirac_commuting(bs2, 2, 2), 0)


def test_zigzag_gaps():
    for q in range(1, 30):
        z = zigzag(q)
        assert sorted(z) == list(range(1, q + 1))
        assert all(abs(z[(i + 1) % q] - z[i]) <= 2 for i in range(q))


def test_mixed_q2_block(bs2):
    spec = dirac_mixed(bs2, 2, 2)
    assert spec.block(2).increments == (1, 2)
    fam = build_family(bs2, 2, (F(0),))  # x = 0 puts 1 in the corner
    rep = commutator_norm(spec, fam, gen_u(bs2))
    norms = dict(rep.per_block)
    assert norms[(1, 0, 0)] == 0.0
    assert norms[(2, 0, 0)] == 1.0
    d = spec.block(2).matrix()
    u = fam.blocks[1].evaluate(gen_u(bs2))
    assert np.allclose(d @ u - u @ d, [[0, -1], [1, 0]])


@pytest.mark.parametrize("coeffs", [[-2, 1], [-1, -1, 1], [-3, 1]])
@pytest.mark.parametrize("p", [2, 3, 4])
def test_mixed_contract(coeffs, p):
    param = alg(coeffs)
    spec = dirac_mixed(param, p, 10, x_count=2)
    fam = build_family(param, 5, (F(0), F(1, 4)))
    for k in range(1, 6):
        assert commutator_norm(spec, fam, gen_v(param) ** k).supremum == 0.0
    u = commutator_norm(spec, fam, gen_u(param))
    assert 0 < u.supremum <= 2
    assert u.supremum == pytest.approx(dense_commutator_norm(spec, fam, gen_u(param)), abs=1e-12)
    rep = summability_report(spec, p)
    assert rep.verdict == CERTIFIED and rep.tail_bound < 2 ** -9


@pytest.mark.parametrize("coeffs", [[-2, 1], [-1, -1, 1], [-2, -1, 2]])
def test_commuting_contract(coeffs):
    param = alg(coeffs)
    spec = dirac_commuting(param, 2, 10)
    fam = build_family(param, 4, (F(1, 4),))
    rng = random.Random(11)
    worst = 0.0
    for _ in range(100):
        word = "".join(rng.choice("uvUV") for _ in range(rng.randint(0, 8)))
        worst = max(worst, commutator_norm(spec, fam, from_word(param, word)).supremum)
    assert worst == 0.0


@pytest.mark.parametrize("mode", ["commuting", "mixed"])
def test_increments_bounded_by_geometric(mode, golden):
    build = dirac_commuting if mode == "commuting" else dirac_mixed
    spec = build(golden, 2, 12, x_count=3)
    rep = summability_report(spec, 2)
    for q, inc in enumerate(rep.increments, start=1):
        assert inc <= 3 * 2.0 ** -q
    assert all(b >= a for a, b in zip(rep.partial_sums, rep.partial_sums[1:]))
    assert rep.total <= trace_bound(spec)


def test_cutoff_stability(bs2):
    a = summability_report(dirac_commuting(bs2, 2, 10), 2)
    b = summability_report(dirac_commuting(bs2, 2, 20), 2)
    assert 0 <= b.total - a.total < 2 ** -9
    assert b.tail_bound < a.tail_bound


def test_offset_invariance(bs2):
    spec = dirac_mixed(bs2, 2, 6)
    shifted = dataclasses.replace(
        spec, blocks=tuple(dataclasses.replace(b, offset=b.offset + mpmath.mpf(17)) for b in spec.blocks)
    )
    fam = build_family(bs2, 6, (F(0),))
    g = from_word(bs2, "uvuVUu")
    assert commutator_norm(spec, fam, g).per_block == commutator_norm(shifted, fam, g).per_block


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 6), st.floats(0.0, 3))
def test_verdict_monotone_in_exponent(p1, extra):
    spec = dirac_commuting(alg([-2, 1]), 2, 8)
    if summability_report(spec, p1).verdict == CERTIFIED:
        assert summability_report(spec, p1 + extra).verdict == CERTIFIED


def test_block_misalignment(bs2):
    spec = dirac_mixed(bs2, 2, 3)
    with pytest.raises(InvalidParameter):
        commutator_norm(spec, build_family(bs2, 2, (F(0), F(1, 2))), gen_u(bs2))
    with pytest.raises(InvalidParameter):
        commutator_norm(spec, build_family(bs2, 4, (F(0),)), gen_u(bs2))


def test_offsets_strictly_increase(corpus_poly):
    from kappa_solenoid.exactalg import Algebraic
    spec = dirac_mixed(Algebraic(corpus_poly), 2, 12)
    offs = [b.offset for b in spec.blocks]
    assert all(b > a for a, b in zip(offs, offs[1:]))
    assert spec.provenance
