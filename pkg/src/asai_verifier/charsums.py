"""Characters and complete exponential sums over Z and over O_K.

All phases are reduced exactly (as fractions) before exponentiation, so a
single term has modulus one to machine precision.  Sums are accumulated
with ``math.fsum`` on real and imaginary parts separately.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .errors import ZeroModulus
from .quadfield import (
    FieldContext,
    QuadInt,
    _shape,
    divides,
    element_divisors,
    kronecker,
    make_field,
    mobius_ideal,
    residue_ring,
)

TWO_PI = 2.0 * math.pi


def e_frac(q: Fraction | int) -> complex:
    """exp(2 pi i q) for rational q, reduced mod 1 first."""
    q = Fraction(q)
    r = Fraction(q.numerator % q.denominator, q.denominator)
    theta = TWO_PI * float(r)
    return complex(math.cos(theta), math.sin(theta))


def csum(values) -> complex:
    """Correctly rounded sum of complex values."""
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


@lru_cache(maxsize=256)
def _unit_circle(m: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(m, dtype=np.float64)
    theta = TWO_PI * k / m
    return np.cos(theta), np.sin(theta)


def sum_roots(numerators: np.ndarray, modulus: int, weights: np.ndarray | None = None) -> complex:
    """Sum of w_j * e(k_j / modulus) for integer arrays k_j."""
    modulus = int(modulus)
    if modulus < 0:
        numerators, modulus = -numerators, -modulus
    k = np.mod(numerators, modulus).astype(np.int64)
    cos, sin = _unit_circle(modulus)
    re, im = cos[k], sin[k]
    if weights is not None:
        re, im = re * weights, im * weights
    return complex(math.fsum(re.tolist()), math.fsum(im.tolist()))


# ---------------------------------------------------------------------------
# Characters


def chi_D(n: int, ctx: FieldContext) -> int:
    """Kronecker symbol (disc / n) of the field."""
    return kronecker(ctx.disc, n)


def legendre_by_squares(n: int, p: int) -> int:
    """Legendre symbol (n/p) from the set of nonzero squares mod p."""
    n %= p
    if n == 0:
        return 0
    return 1 if n in {x * x % p for x in range(1, p)} else -1


def different_scale(D: int) -> int:
    """kappa with Tr(x/delta) = kappa * (w-coordinate of x) on O_K."""
    t, _ = _shape(D)
    return 1 if t else 2


def trace_over_delta(p: Fraction, q: Fraction) -> Fraction:
    """x/delta + x'/delta' for x = p + q sqrt D; the rational part drops out."""
    return 2 * Fraction(q)


def psi_additive(x: QuadInt | tuple[Fraction, Fraction]) -> complex:
    """exp(2 pi i (x/delta + x'/delta')) for x in K.

    ``x`` is a QuadInt or a rational pair (p, q) meaning p + q sqrt D.
    """
    if isinstance(x, QuadInt):
        p, q = x.rational_pair()
    else:
        p, q = x
    return e_frac(trace_over_delta(Fraction(p), Fraction(q)))


def psi_quotient(y: QuadInt, c: QuadInt) -> complex:
    """psi(y / c) for y, c in O_K."""
    if not c:
        raise ZeroModulus("psi of y/0")
    return e_frac(_trace_delta_quotient(y, c))


def _trace_delta_quotient(y: QuadInt, c: QuadInt) -> Fraction:
    z = y * c.conj()
    return Fraction(different_scale(y.D) * z.b, c.norm())


# ---------------------------------------------------------------------------
# Kloosterman sums over O_K


def _coords(xs) -> tuple[np.ndarray, np.ndarray]:
    return (np.array([x.a for x in xs], dtype=object),
            np.array([x.b for x in xs], dtype=object))


def _w_coefficient_of_product(za: np.ndarray, zb: np.ndarray, c: QuadInt) -> np.ndarray:
    """w-coordinate of z * c for coordinate arrays of z (object arrays)."""
    t, _ = _shape(c.D)
    return za * c.b + zb * (c.a + t * c.b)


def kloosterman_K(r: QuadInt, s: QuadInt, c: QuadInt) -> complex:
    """S(r, s, c) = sum over x in (O_K/c)* of psi((r xbar + s x)/c).

    A unit modulus gives the single trivial class and the value 1.
    """
    if not c:
        raise ZeroModulus("Kloosterman sum modulo 0")
    if c.is_unit():
        return 1.0 + 0.0j
    ring = residue_ring(c)
    units = ring.unit_reps
    inv = [ring.inverse_table[u] for u in units]
    # y = r*xbar + s*x, phase kappa * w-coord(y * c') / N(c)
    ys = [r * v + s * u for u, v in zip(units, inv)]
    ya, yb = _coords(ys)
    k = different_scale(c.D) * _w_coefficient_of_product(ya, yb, c.conj())
    return sum_roots(np.array([int(v) for v in k], dtype=object), c.norm())


def kloosterman_K_bruteforce(r: QuadInt, s: QuadInt, c: QuadInt) -> complex:
    """Term-by-term oracle using exact rational phases."""
    if c.is_unit():
        return 1.0 + 0.0j
    ring = residue_ring(c)
    return csum(psi_quotient(r * ring.inverse(u) + s * u, c) for u in ring.unit_reps)


def ramanujan_K(r: QuadInt, c: QuadInt) -> complex:
    """S(r, 0, c) by enumeration of (O_K/c)*."""
    if not c:
        raise ZeroModulus("Ramanujan sum modulo 0")
    if c.is_unit():
        return 1.0 + 0.0j
    ring = residue_ring(c)
    ua, ub = _coords(ring.unit_reps)
    z = r * c.conj()
    t, _ = _shape(c.D)
    k = different_scale(c.D) * (ua * z.b + ub * (z.a + t * z.b))
    return sum_roots(np.array([int(v) for v in k], dtype=object), c.norm())


def ramanujan_K_closed(r: QuadInt, c: QuadInt) -> int:
    """Ideal-Moebius form: sum over ideals b | (c, kappa r) of mu(c/b) N(b).

    kappa = 1 when delta generates the different and 2 on Z[sqrt D], where
    the different is 2 sqrt D.
    """
    if not c:
        raise ZeroModulus("Ramanujan sum modulo 0")
    ctx = make_field(c.D)
    target = r * different_scale(c.D)
    total = 0
    for b in element_divisors(c, ctx):
        if target and not divides(b, target):
            continue
        quotient = _exact_div(c, b)
        total += mobius_ideal(quotient, ctx) * abs(b.norm())
    return total


def _exact_div(x: QuadInt, y: QuadInt) -> QuadInt:
    from .quadfield import exact_div

    return exact_div(x, y)


# ---------------------------------------------------------------------------
# Sums over Z


def kloosterman_twisted(n: int, m: int, c: int, ctx: FieldContext | None) -> complex:
    """S_D(n, m, c) = sum over x mod c, (x, c) = 1, of chi_D(x) e((n x + m xbar)/c).

    Representatives are taken in 1..c.  ``ctx=None`` gives the untwisted sum.
    """
    if c < 1:
        raise ZeroModulus("twisted Kloosterman sum needs c >= 1")
    if c == 1:
        return 1.0 + 0.0j
    xs = [x for x in range(1, c + 1) if math.gcd(x, c) == 1]
    inv = [pow(x, -1, c) for x in xs]
    k = np.array([(n * x + m * y) % c for x, y in zip(xs, inv)], dtype=np.int64)
    if ctx is None:
        return sum_roots(k, c)
    w = np.array([chi_D(x, ctx) for x in xs], dtype=np.float64)
    return sum_roots(k, c, w)


def ramanujan_Z(n: int, y: int) -> int:
    """Classical Ramanujan sum c_n(y) via mu(n/g) phi(n)/phi(n/g), g = (y, n)."""
    if n < 1:
        raise ValueError("n must be positive")
    g = math.gcd(y, n)
    q = n // g
    return int(sympy.mobius(q)) * int(sympy.totient(n)) // int(sympy.totient(q))


def ramanujan_Z_bruteforce(n: int, y: int) -> complex:
    """sum over x mod n with (x, n) = 1 of e(x y / n), exact phases."""
    x = np.arange(1, n + 1, dtype=np.int64)
    x = x[np.gcd(x, n) == 1]
    return sum_roots((x * (y % n)) % n, n)


def ramanujan_Z_table(n_max: int, y_values: np.ndarray) -> np.ndarray:
    """Brute-force Ramanujan sums for all 1 <= n <= n_max and the given y.

    Returns a float array of shape (n_max, len(y_values)).
    """
    y_values = np.asarray(y_values, dtype=np.int64)
    out = np.empty((n_max, y_values.size))
    for n in range(1, n_max + 1):
        x = np.arange(1, n + 1, dtype=np.int64)
        x = x[np.gcd(x, n) == 1]
        k = np.mod(np.outer(x, np.mod(y_values, n)), n)
        out[n - 1] = np.cos(TWO_PI * k / n).sum(axis=0)
    return out
