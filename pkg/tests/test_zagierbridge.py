import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asai_verifier.errors import LNotCoprimeToD
from asai_verifier.quadfield import QuadInt, make_field, sqrt_d
from asai_verifier.zagierbridge import (
    bridge_elements,
    bridge_lhs,
    bridge_lhs_bruteforce,
    bridge_rhs_coprime,
    bridge_rhs_general,
    rational_divisors_of,
)

GOLDEN_LHS = 2 * math.cos(4 * math.pi / 5)


def lhs_mod_n_oracle(a, l, D):
    # r runs mod n rather than n/delta; each class mod n/delta appears D times
    n = D * a
    total = 0j
    for u in range(n):
        for v in range(n):
            r = QuadInt(u, v, D)
            if (r.norm() - 1) % n == 0:
                total += cmath.exp(2j * math.pi * (r * l).trace() / n)
    return total / D


def test_golden_instance(ctx5):
    one = QuadInt(1, 0, 5)
    for side in (bridge_lhs, bridge_rhs_coprime, bridge_rhs_general):
        assert abs(side(1, one, ctx5) - GOLDEN_LHS) < 1e-12
    assert abs(GOLDEN_LHS + 1.61803) < 1e-5


@pytest.mark.parametrize("D", [5, 13])
@pytest.mark.parametrize("a", [1, 2, 3, 5])
def test_lhs_against_mod_n_oracle(D, a):
    ctx = make_field(D)
    for l in bridge_elements(20, ctx, coprime_to_D=False)[:12]:
        assert abs(bridge_lhs(a, l, ctx) - lhs_mod_n_oracle(a, l, D)) < 1e-9


@given(st.integers(1, 12), st.integers(-5, 5), st.integers(-5, 5), st.integers(-4, 4), st.integers(-4, 4))
def test_representative_shift(a, la, lb, sa, sb):
    ctx = make_field(5)
    l = QuadInt(la, lb, 5)
    shift = QuadInt(sa, sb, 5)
    assert abs(bridge_lhs_bruteforce(a, l, ctx, shift) - bridge_lhs(a, l, ctx)) < 1e-9


@pytest.mark.parametrize("D", [5, 13])
def test_identity_and_coprime_collapse(D):
    ctx = make_field(D)
    for l in bridge_elements(30, ctx, coprime_to_D=False):
        for a in (1, 2, 4, D, 2 * D):
            lhs = bridge_lhs(a, l, ctx)
            general = bridge_rhs_general(a, l, ctx)
            assert abs(lhs - general) < 1e-9, (a, l)
            assert abs(lhs.imag) < 1e-9
            if l.norm() % D:
                assert abs(general - bridge_rhs_coprime(a, l, ctx)) < 1e-12


def test_coprime_form_refuses_ramified_l(ctx5):
    with pytest.raises(LNotCoprimeToD):
        bridge_rhs_coprime(1, sqrt_d(5), ctx5)


def test_rational_divisors(ctx5):
    assert rational_divisors_of(QuadInt(6, 4, 5)) == [1, 2]
    assert rational_divisors_of(QuadInt(2, 1, 5)) == [1]
    assert rational_divisors_of(QuadInt(12, 0, 5)) == [1, 2, 3, 4, 6, 12]
