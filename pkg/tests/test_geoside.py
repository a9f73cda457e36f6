import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from asai_verifier.errors import PreconditionFailed
from asai_verifier.geoside import (
    A0_claimed_limit,
    A0_diagonal_limit,
    A0_value,
    An_candidates,
    An_sum,
    GeoConfig,
    H_n_double_integral,
    H_n_integral,
    I_integral,
    I_integral_reference,
    in_Xn_rd,
    lattice_points_in_box,
    ramified_ramanujan,
)
from asai_verifier.multident import R
from asai_verifier.quadfield import QuadInt, divides, exact_div, ideal_gcd, make_field, sqrt_d
from asai_verifier.spectransform import zero_function

CFG = GeoConfig()
ONE = QuadInt(1, 0, 5)


@pytest.mark.parametrize("c,n,mtt", [((1000, 100), 5, 1), ((900, 250), 40, 1), ((1000, 100), 5000, 1),
                                     ((500, 40), -15, 2), ((1000, 100), 5, 2)])
def test_I_against_reference(c, n, mtt):
    c = QuadInt(*c, 5)
    a = I_integral(n, c, 1e4, mtt, CFG)
    b = I_integral_reference(n, c, 1e4, mtt, CFG)
    assert abs(a - b) < 1e-12


def test_I_window_value():
    # regression value, cross-checked against the panel-doubling reference
    val = I_integral(5, QuadInt(1000, 100, 5), 1e4, 1, CFG)
    assert abs(val - complex(0.09262858028495743, -0.008058465342395595)) < 1e-12


def test_I_decay_in_n():
    c = QuadInt(1000, 100, 5)
    mags = [abs(I_integral(5 * k, c, 1e4, 1, CFG)) for k in (1, 2, 4, 8)]
    assert mags[0] > mags[1] > mags[2] > mags[3]
    # once the phase winds, the envelope collapses
    assert abs(I_integral(8000, c, 1e4, 1, CFG)) < 1e-3 * abs(I_integral(500, c, 1e4, 1, CFG))


def test_I_support_and_preconditions():
    assert I_integral(5, QuadInt(700, -50, 5), 1e4, 1, CFG) == 0  # c' outside the V2 window
    assert I_integral(5, QuadInt(-1000, -100, 5), 1e4, 1, CFG) == 0
    with pytest.raises(PreconditionFailed):
        I_integral(5, ONE, 0.0, 1, CFG)


def test_H_reduced_matches_double_integral_and_ST_misses():
    res = H_n_integral(5, CFG)
    assert abs(res.integral - res.reduced_integral) < 1e-9 * abs(res.integral)
    # the displayed D (V1*V2)(4 pi sqrt(l l')/n) is not the value
    assert res.residual > 0.5


def test_H_zero_function():
    cfg = GeoConfig(V1=zero_function(1.0, 2.0))
    val, err = H_n_double_integral(5, cfg)
    assert val == 0 and err == 0
    with pytest.raises(PreconditionFailed):
        H_n_integral(0, CFG)


def test_config_rejects_non_totally_positive_l():
    with pytest.raises(PreconditionFailed):
        GeoConfig(l=QuadInt(1, -1, 5))


def test_A0_equal_l_tracks_diagonal_limit():
    value, terms = A0_value(1e2, CFG)
    assert terms > 0
    diag = A0_diagonal_limit(CFG)
    assert abs(value - diag) < 1e-2 * diag
    claimed = A0_claimed_limit(CFG)
    assert abs(value - claimed) > 1.0 * claimed


def test_A0_linear_in_g():
    half = GeoConfig(g=CFG.g.scaled(0.5))
    assert abs(A0_value(1e2, half)[0] - 0.5 * A0_value(1e2, CFG)[0]) < 1e-12
    assert abs(A0_diagonal_limit(half) - 0.5 * A0_diagonal_limit(CFG)) < 1e-12


def test_A0_distinct_l_vanishes():
    cfg = GeoConfig(l=QuadInt(3, 1, 5))
    scale = A0_diagonal_limit(CFG)
    for X in (1e2, 1e3):
        assert abs(A0_value(X, cfg)[0]) < 1e-2 * scale
    assert A0_claimed_limit(cfg) == 0 == A0_diagonal_limit(cfg)


@pytest.mark.parametrize("D", [5, 13])
@given(st.integers(1, 40), st.integers(-30, 30))
def test_ramified_ramanujan_brute(D, b, beta):
    brute = sum(cmath.exp(2j * math.pi * y * beta / b) for y in range(D * b) if math.gcd(y, D * b) == 1)
    assert abs(brute - ramified_ramanujan(b, beta, D)) < 1e-8


@pytest.mark.parametrize("D", [5, 13])
def test_lattice_points_in_box(D):
    box1, box2 = (3.2, 40.5), (-7.0, 12.25)
    a, b = lattice_points_in_box(D, box1, box2)
    got = set(zip(a.tolist(), b.tolist()))
    want = set()
    for u in range(-200, 201):
        for v in range(-200, 201):
            e1, e2 = QuadInt(u, v, D).embeddings()
            if box1[0] <= e1 <= box1[1] and box2[0] <= e2 <= box2[1]:
                want.add((u, v))
    assert got == want


def membership_oracle(c, r, d, n, ctx):
    if not ideal_gcd(c, c.conj(), ctx).is_unit():
        return False
    num = (c * r - c.conj()) * d * sqrt_d(ctx.D)
    N = QuadInt(n, 0, ctx.D)
    if not divides(N, num):
        return False
    lam = exact_div(num, N)
    k = abs(d.a) if d.b == 0 else 1
    return math.gcd(math.gcd(lam.a, lam.b), k) == 1


@pytest.mark.parametrize("D,n,r,d", [(5, 5, (1, 0), (1, 0)), (5, 10, (1, 0), (2, 0)),
                                     (5, 20, (11, 0), (1, 0)), (13, 13, (1, 0), (1, 0))])
# r = 1 mod delta is forced when d = 1: c - c' lies in delta O_K
def test_in_Xn_rd_against_element_arithmetic(D, n, r, d):
    ctx = make_field(D)
    r, d = QuadInt(*r, D), QuadInt(*d, D)
    a, b = lattice_points_in_box(D, (1.0, 60.0), (1.0, 60.0))
    got = in_Xn_rd(a, b, r, d, n, ctx)
    for u, v, g in zip(a.tolist(), b.tolist(), got.tolist()):
        assert g == membership_oracle(QuadInt(u, v, D), r, d, n, ctx), (u, v)
    assert got.any()


def test_An_constant_is_n_R_over_sqrtD():
    # sum over X_5(1, 1) against int int H_5; the measured constant is 5 R(5,1)/sqrt 5
    integral, _ = H_n_double_integral(5, CFG)
    value, points = An_sum(5, ONE, ONE, 1e3, CFG)
    assert points > 1000
    const = value / integral
    target = 5 * float(R(5, 1)) / math.sqrt(5)
    assert abs(const - target) < 1e-2 * target
    for name, cand in An_candidates(5, ONE, 5).items():
        assert abs(const - cand) > 0.5 * cand, name


def test_R_reading_for_sqrtD():
    assert R(5, 5) == Fraction(1, 30)
    cands = An_candidates(5, sqrt_d(5), 5)
    assert math.isclose(cands["R/sqrtD"], float(R(5, 5)) / math.sqrt(5))
    assert np.isfinite(list(cands.values())).all()
