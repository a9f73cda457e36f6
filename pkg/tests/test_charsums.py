import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from asai_verifier.charsums import (
    chi_D,
    kloosterman_K,
    kloosterman_K_bruteforce,
    kloosterman_twisted,
    legendre_by_squares,
    psi_additive,
    ramanujan_K,
    ramanujan_K_closed,
    ramanujan_Z,
    ramanujan_Z_bruteforce,
)
from asai_verifier.errors import ZeroModulus
from asai_verifier.quadfield import QuadInt, make_field, omega, phi_ideal, residue_ring, sqrt_d

small = st.integers(-6, 6)
elem5 = st.builds(lambda a, b: QuadInt(a, b, 5), small, small)
modulus5 = elem5.filter(lambda c: bool(c) and abs(c.norm()) <= 60)


def e(x):
    return cmath.exp(2j * math.pi * x)


def kloosterman_by_embeddings(r, s, c):
    """Float oracle: phases from the real embeddings, y/(delta c) + y'/(delta' c')."""
    ring = residue_ring(c)
    sq = math.sqrt(c.D)
    total = 0j
    for u in ring.unit_reps:
        y = r * ring.inverse(u) + s * u
        y1, y2 = y.embeddings()
        c1, c2 = c.embeddings()
        total += e(y1 / (sq * c1) - y2 / (sq * c2))
    return total


def test_chi_examples(ctx5):
    assert chi_D(2, ctx5) == -1
    assert chi_D(1, ctx5) == 1
    assert chi_D(5, ctx5) == 0


@given(st.integers(-500, 500), st.integers(-500, 500))
def test_chi_multiplicative_periodic(m, n):
    ctx = make_field(5)
    assert chi_D(m * n, ctx) == chi_D(m, ctx) * chi_D(n, ctx)
    assert chi_D(n + 5, ctx) == chi_D(n, ctx)
    assert chi_D(n, ctx) == legendre_by_squares(n, 5)


def test_psi_examples():
    D = 5
    for k in range(-3, 4):
        assert abs(psi_additive(sqrt_d(D) * k) - 1) < 1e-15
    assert abs(psi_additive(omega(D)) - 1) < 1e-15
    assert abs(psi_additive((Fraction(0), Fraction(1, 4))) + 1) < 1e-15


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50), small, small)
def test_psi_shift_by_different(p, q, a, b):
    # w in delta O_K has Tr(w/delta) integral, so psi(x + w) = psi(x)
    w = sqrt_d(5) * QuadInt(a, b, 5)
    wp, wq = w.rational_pair()
    assert abs(psi_additive((p + wp, q + wq)) - psi_additive((p, q))) < 1e-12


def test_twisted_examples(ctx5):
    assert abs(kloosterman_twisted(1, 1, 5, ctx5) - (e(2 / 5) + e(3 / 5) - 2)) < 1e-12
    assert abs(kloosterman_twisted(1, 1, 5, ctx5) - (-3.6180339887498949)) < 1e-12
    assert kloosterman_twisted(3, 7, 1, ctx5) == 1
    # mod 4: x = 1 gives e(1/2); x = 3 has chi_5(3) = -1 and e(6/4) = -1
    assert abs(kloosterman_twisted(1, 1, 4, ctx5)) < 1e-12


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 20))
def test_twisted_symmetric(n, m, k):
    # chi_D is a function on (Z/c)* only when D | c
    ctx = make_field(5)
    c = 5 * k
    assert abs(kloosterman_twisted(n, m, c, ctx) - kloosterman_twisted(m, n, c, ctx)) < 1e-12


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 100))
def test_untwisted_symmetric(n, m, c):
    assert abs(kloosterman_twisted(n, m, c, None) - kloosterman_twisted(m, n, c, None)) < 1e-12


def test_kloosterman_unit_modulus():
    assert kloosterman_K(QuadInt(3, 1, 5), QuadInt(2, 0, 5), omega(5)) == 1
    with pytest.raises(ZeroModulus):
        kloosterman_K(QuadInt(1, 0, 5), QuadInt(1, 0, 5), QuadInt(0, 0, 5))


def test_kloosterman_mod_2_in_F4():
    one = QuadInt(1, 0, 5)
    c = QuadInt(2, 0, 5)
    assert len(residue_ring(c).unit_reps) == 3
    assert abs(kloosterman_K(one, one, c) - kloosterman_by_embeddings(one, one, c)) < 1e-12


@given(elem5, elem5, modulus5)
def test_kloosterman_against_embedding_oracle(r, s, c):
    if c.is_unit():
        return
    val = kloosterman_K(r, s, c)
    assert abs(val - kloosterman_by_embeddings(r, s, c)) < 1e-9
    assert abs(val - kloosterman_K_bruteforce(r, s, c)) < 1e-12
    assert abs(val - kloosterman_K(s, r, c)) < 1e-12
    assert abs(val) <= len(residue_ring(c).unit_reps) + 1e-9


def test_ramanujan_Z_examples():
    assert ramanujan_Z(1, 17) == 1
    assert ramanujan_Z(6, 4) == -1
    for p in (2, 3, 5, 7, 101):
        assert ramanujan_Z(p, 0) == p - 1


@given(st.integers(1, 500), st.integers(-500, 500))
def test_ramanujan_Z_brute(n, y):
    brute = ramanujan_Z_bruteforce(n, y)
    assert abs(brute.imag) < 1e-9
    assert round(brute.real) == ramanujan_Z(n, y)
    assert abs(brute.real - ramanujan_Z(n, y)) < 1e-9


def test_ramanujan_K_examples(ctx5):
    c = QuadInt(6, 1, 5)
    assert abs(ramanujan_K(QuadInt(0, 0, 5), c) - phi_ideal(c, ctx5)) < 1e-9
    assert abs(ramanujan_K(QuadInt(1, 0, 5), sqrt_d(5)) + 1) < 1e-12


@given(elem5, modulus5)
def test_ramanujan_K_moebius(r, c):
    assert abs(ramanujan_K(r, c) - ramanujan_K_closed(r, c)) < 1e-9


@given(modulus5)
def test_ramanujan_K_at_r_equal_c(c):
    # every phase is trivial, so the sum counts the units
    assert abs(ramanujan_K(c, c) - phi_ideal(c, make_field(5))) < 1e-9


@pytest.mark.parametrize("n", [1, 2, 12, 30, 97, 360])
def test_ramanujan_Z_is_multiplicative_in_n(n):
    # c_{mn}(y) = c_m(y) c_n(y) for coprime m, n
    for m in (7, 11):
        if math.gcd(m, n) == 1:
            for y in range(-20, 21):
                assert ramanujan_Z(m * n, y) == ramanujan_Z(m, y) * ramanujan_Z(n, y)
    assert sum(ramanujan_Z(d, 0) for d in sympy.divisors(n)) == n
