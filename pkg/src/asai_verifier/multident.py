"""Multiplicative identities: the density R(n, d), local Euler factors,
divisor identities over K, and a Hecke-relation model for coefficient
sequences built from Satake parameters.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable

import sympy

from .charsums import chi_D, ramanujan_Z
from .errors import DNotDividesN, PoleProximity
from .quadfield import (
    FieldContext,
    QuadInt,
    Splitting,
    element_divisors,
    exact_div,
    ideals_of_norm,
)

# ---------------------------------------------------------------------------
# R(n, d)


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    return tuple(sorted(sympy.factorint(n)))


def _local_weight(m: int) -> Fraction:
    """prod over p | m of 1/(1 + 1/p)."""
    out = Fraction(1)
    for p in _prime_factors(m):
        out *= Fraction(p, p + 1)
    return out


def R(n: int, d: int) -> Fraction:
    """R(n, d) = (1/(d n)) sum_{a | d} (mu(a)/a) prod_{p | n a / d} 1/(1 + 1/p)."""
    if n < 1 or d < 1 or n % d:
        raise DNotDividesN(f"R({n}, {d}) needs d | n")
    total = Fraction(0)
    primes = _prime_factors(d)
    for k in range(len(primes) + 1):
        for subset in combinations(primes, k):
            a = math.prod(subset)
            total += Fraction((-1) ** k, a) * _local_weight(n * a // d)
    return total / (d * n)


def R_prime_power(p: int, l: int, i: int) -> Fraction:
    """Closed forms of R(p^l, p^i) for 0 <= i <= l."""
    if i == 0:
        return Fraction(1, p ** l) / (1 + Fraction(1, p))
    if i == l:
        return Fraction(1, p ** (2 * l)) / (1 + Fraction(1, p))
    return Fraction(1, p ** (l + i)) * (1 - Fraction(1, p)) / (1 + Fraction(1, p))


def R_sum_check(n: int) -> Fraction:
    """sum_{d | n} R(n, d), expected to be 1/n."""
    return sum((R(n, d) for d in sympy.divisors(n)), Fraction(0))


def R_from_prime_powers(n: int, d: int) -> Fraction:
    """Product of the prime-power closed forms over p | n."""
    out = Fraction(1)
    fn, fd = sympy.factorint(n), sympy.factorint(d)
    for p, l in fn.items():
        out *= R_prime_power(p, l, fd.get(p, 0))
    return out


# ---------------------------------------------------------------------------
# Local Euler factors


def _guard(*denominators: complex) -> None:
    for den in denominators:
        if abs(den) < 1e-8:
            raise PoleProximity(f"denominator {den} too close to zero")


def ramanujan_local_series(p: int, y: int, s: complex) -> complex:
    """sum_k f_{p^k}(y) p^{-k s}, exact finite sum (f_{p^k}(y) = 0 for k > v_p(y) + 1)."""
    v = sympy.multiplicity(p, y) if y else 60
    u = p ** (-s)
    total = 0j
    for k in range(v + 2):
        total += ramanujan_Z(p ** k, y) * u ** k
    return total


def ramanujan_local_display(p: int, y: int, s: complex) -> complex:
    """The displayed factor: (1 - p^-s) if p does not divide y, else (1 - p^-s)(1 + p^{1-s})."""
    u = p ** (-s)
    if y % p:
        return 1 - u
    return (1 - u) * (1 + p * u)


def ramanujan_local_closed(p: int, y: int, s: complex) -> complex:
    """(1 - u) sum_{j <= v} (p u)^j, valid for every valuation v = v_p(y)."""
    v = sympy.multiplicity(p, y)
    u = p ** (-s)
    return (1 - u) * sum((p * u) ** j for j in range(v + 1))


def asai_local_series(kind: Splitting, p: int, s: complex, t: float,
                      w1: complex = 1.0, w2: complex = 1.0, terms: int | None = None) -> complex:
    """sum_k sigma_{2it, omega^2}(p^k) p^{-k(s + 2it)} by direct enumeration.

    ``w1``, ``w2`` are omega^2 on the two primes above a split p.  Ideals
    dividing p^k are enumerated as exponent tuples and omega^2 evaluated
    multiplicatively.
    """
    u = p ** (-(s + 2j * t))
    x = p ** (2j * t)  # N(prime)^{2it} for a degree-one prime
    if terms is None:
        terms = max(8, int(40 / max(s.real * math.log(p), 0.1)) + 4)
    total = 0j
    for k in range(terms):
        if kind is Splitting.SPLIT:
            sig = sum(w1 ** i * w2 ** j * x ** (i + j) for i in range(k + 1) for j in range(k + 1))
        elif kind is Splitting.INERT:
            sig = sum(x ** (2 * i) for i in range(k + 1))
        else:
            sig = sum(x ** i for i in range(2 * k + 1))
        total += sig * u ** k
    return total


def asai_local_display(kind: Splitting, p: int, s: complex, t: float, chi: int,
                       w1: complex = 1.0, w2: complex = 1.0) -> complex:
    """The displayed closed forms for split, inert and ramified p."""
    ps = p ** (-s)
    a = 1 - p ** (-(s + 2j * t))
    b = 1 - p ** (-(s - 2j * t))
    if kind is Splitting.SPLIT:
        den = (1 - w1 * ps) * (1 - w2 * ps) * a * b
        _guard(den)
        return (1 - ps * ps) / den
    den = (1 - ps) * (1 - chi * ps) * a * b
    _guard(den)
    return (1 - ps * ps) / den


def euler_factor_sides(kind: str, s: complex, t: float, p: int, ctx: FieldContext,
                       y: int = 1, omega_sq: complex | None = None) -> tuple[complex, complex]:
    """(series, displayed closed form) for one per-prime factorization.

    kind: "ramanujanL" compares the Ramanujan-sum series at y against the
    displayed factor; "split", "inert", "ramified" compare the divisor-sum
    series against the displayed closed form.  For split p, ``omega_sq`` is
    omega^2 on one prime above p (the other gets the inverse).
    """
    if abs(p ** (-s)) >= 1:
        raise PoleProximity("series needs |p^-s| < 1")
    if kind == "ramanujanL":
        return ramanujan_local_series(p, y, s), ramanujan_local_display(p, y, s)
    sp = Splitting(kind)
    w1 = omega_sq if omega_sq is not None else 1.0
    w2 = 1 / w1
    return (asai_local_series(sp, p, s, t, w1, w2),
            asai_local_display(sp, p, s, t, chi_D(p, ctx), w1, w2))


def euler_factor_identity_check(kind: str, s: complex, t: float, p: int, ctx: FieldContext,
                                y: int = 1, omega_sq: complex | None = None) -> float:
    """|series - closed form|; see ``euler_factor_sides``."""
    lhs, rhs = euler_factor_sides(kind, s, t, p, ctx, y, omega_sq)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Characters omega_mu and divisor sums over K


def mu_lattice(k: int, ctx: FieldContext, half: bool = False) -> float:
    """k pi / log eps0, or k pi / (2 log eps0) with ``half``."""
    return k * math.pi / ((2 if half else 1) * ctx.log_eps0)


def omega_mu(x: QuadInt, mu: float) -> complex:
    """|x / x'|^{i mu}."""
    e1, e2 = x.embeddings()
    return cmath.exp(1j * mu * (math.log(abs(e1)) - math.log(abs(e2))))


def sigma_omega(n: QuadInt, s: complex, mu_k: int, ctx: FieldContext, power: int = 1) -> complex:
    """sum over ideals a | (n) of omega_mu(a)^power N(a)^s, mu = k pi / log eps0."""
    mu = mu_lattice(mu_k, ctx)
    total = 0j
    for a in element_divisors(n, ctx):
        total += omega_mu(a, mu) ** power * abs(a.norm()) ** s
    return total


def tau_it(n: int, t: float, ctx: FieldContext) -> complex:
    """sum_{a b = n} chi_D(a) (a/b)^{it}."""
    n = abs(n)
    total = 0j
    for a in sympy.divisors(n):
        b = n // a
        c = chi_D(a, ctx)
        if c:
            total += c * cmath.exp(1j * t * math.log(a / b))
    return total


def psi_mu(y: int, mu: float, ctx: FieldContext) -> complex:
    """sum over ideals q with N(q) = y of omega_mu(q)."""
    return sum((omega_mu(q, mu) for q in ideals_of_norm(abs(y), ctx)), 0j)


def rational_divisors(l: QuadInt) -> list[int]:
    g = math.gcd(l.a, l.b)
    return [int(r) for r in sympy.divisors(g)] if g else []


@dataclass(frozen=True)
class CompaResult:
    lhs1: complex
    rhs1: complex
    lhs2: complex
    rhs2: complex

    @property
    def residuals(self) -> tuple[float, float]:
        return abs(self.lhs1 - self.rhs1), abs(self.lhs2 - self.rhs2)


def compa_sides(l: QuadInt, t: float, mu_index: int, ctx: FieldContext,
                reading: str = "literal") -> CompaResult:
    """Both sides of the two divisor identities.

    (1)  N(l)^{it} sigma_{-2it,0}(l) = sum_{r | l} tau_{it}(l l'/r^2)
    (2)  omega(l)^{-e} sigma_{0,omega^2}(l) = sum_{r | l} psi_mu(l l'/r^2)

    with e = 2 for ``reading="literal"`` and e = 1 for ``"derived"``; omega is
    omega_mu with mu = k pi / log eps0.  |l l'| is used for negative norms.
    """
    N = abs(l.norm())
    mu = mu_lattice(mu_index, ctx)
    rs = rational_divisors(l)
    lhs1 = cmath.exp(1j * t * math.log(N)) * sigma_omega(l, -2j * t, 0, ctx)
    rhs1 = sum((tau_it(N // (r * r), t, ctx) for r in rs), 0j)
    e = 2 if reading == "literal" else 1
    lhs2 = omega_mu(l, mu) ** (-e) * sigma_omega(l, 0, mu_index, ctx, power=2)
    rhs2 = sum((psi_mu(N // (r * r), mu, ctx) for r in rs), 0j)
    return CompaResult(lhs1, rhs1, lhs2, rhs2)


def compa_identity_check(l: QuadInt, t: float, mu_index: int, ctx: FieldContext,
                         reading: str = "literal") -> tuple[float, float]:
    return compa_sides(l, t, mu_index, ctx, reading).residuals


# ---------------------------------------------------------------------------
# Hecke relations


@dataclass
class HeckeSequence:
    """Coefficients a_n generated from Satake parameters.

    For p with character value c = nebentypus(p): a_p = alpha + c/alpha when
    c != 0, and a_{p^k} = alpha^k when c = 0.
    """

    satake: dict[int, complex]
    nebentypus: Callable[[int], int]
    _cache: dict[int, complex] = field(default_factory=dict, repr=False)

    def prime_power(self, p: int, k: int) -> complex:
        c = self.nebentypus(p)
        alpha = self.satake[p]
        if c == 0:
            return alpha ** k
        vals = [1.0 + 0j, alpha + c / alpha]
        for _ in range(2, k + 1):
            vals.append(vals[1] * vals[-1] - c * vals[-2])
        return vals[k]

    def __call__(self, n: int) -> complex:
        if n in self._cache:
            return self._cache[n]
        out = 1.0 + 0j
        for p, k in sympy.factorint(n).items():
            out *= self.prime_power(p, k)
        self._cache[n] = out
        return out


def random_hecke_sequence(rng: random.Random, max_prime: int,
                          nebentypus: Callable[[int], int]) -> HeckeSequence:
    """Satake parameters alpha_p on the unit circle for every prime <= max_prime."""
    satake = {p: cmath.exp(2j * math.pi * rng.random()) for p in sympy.primerange(2, max_prime + 1)}
    return HeckeSequence(satake, nebentypus)


def trivial_character(n: int) -> int:
    return 1


def hecke_relation_worst(seq: HeckeSequence, depth: int,
                         weighted: bool = True) -> tuple[int, int, complex, complex]:
    """(n, m, a_n a_m, sum_{r | (n,m)} chi(r) a_{nm/r^2}) at the worst pair n, m <= depth.

    With ``weighted=False`` the weights chi(r) are dropped.
    """
    worst = (1, 1, seq(1) * seq(1), seq(1))
    err = -1.0
    for n in range(1, depth + 1):
        for m in range(1, depth + 1):
            g = math.gcd(n, m)
            if weighted:
                rhs = sum((seq.nebentypus(r) * seq(n * m // (r * r)) for r in sympy.divisors(g)), 0j)
            else:
                rhs = sum((seq(n * m // (r * r)) for r in sympy.divisors(g)), 0j)
            lhs = seq(n) * seq(m)
            if abs(lhs - rhs) > err:
                err = abs(lhs - rhs)
                worst = (n, m, lhs, rhs)
    return worst


def hecke_relation_residual(seq: HeckeSequence, depth: int) -> float:
    """max over n, m <= depth of |a_n a_m - sum_{r | (n,m)} chi(r) a_{nm/r^2}|.

    With the trivial character the weights are all one and this is the
    displayed relation.
    """
    _, _, lhs, rhs = hecke_relation_worst(seq, depth)
    return abs(lhs - rhs)


def hecke_relation_residual_unweighted(seq: HeckeSequence, depth: int) -> float:
    """The displayed relation without character weights, for any sequence."""
    _, _, lhs, rhs = hecke_relation_worst(seq, depth, weighted=False)
    return abs(lhs - rhs)


def alpha_l(seq: HeckeSequence, l: QuadInt) -> complex:
    """sum_{r in N, r | l} a_{|N(l)|/r^2}."""
    N = abs(l.norm())
    return sum((seq(N // (r * r)) for r in rational_divisors(l)), 0j)


def alpha_relation_worst(seq: HeckeSequence, ctx: FieldContext,
                         max_norm: int) -> tuple[QuadInt, QuadInt, complex, complex]:
    """(x, y, alpha_x alpha_y, sum_{ideals q | (x, y)} alpha_{x y / q^2}) at the worst
    pair of ideals x, y coprime to D with norm <= max_norm."""
    from .quadfield import ideal_gcd, principal_ideals_up_to

    ideals = [g for g in principal_ideals_up_to(max_norm, ctx) if g.norm() % ctx.D]
    worst, err = None, -1.0
    for x in ideals:
        for y in ideals:
            g = ideal_gcd(x, y, ctx)
            xy = x * y
            rhs = 0j
            for q in element_divisors(g, ctx):
                rhs += alpha_l(seq, exact_div(xy, q * q))
            lhs = alpha_l(seq, x) * alpha_l(seq, y)
            if abs(lhs - rhs) > err:
                err = abs(lhs - rhs)
                worst = (x, y, lhs, rhs)
    return worst


def alpha_relation_residual(seq: HeckeSequence, ctx: FieldContext, max_norm: int) -> float:
    """max |alpha_x alpha_y - sum_{ideals q | (x, y)} alpha_{x y / q^2}| over
    ideals x, y coprime to D with norm <= max_norm."""
    _, _, lhs, rhs = alpha_relation_worst(seq, ctx, max_norm)
    return abs(lhs - rhs)


def hecke_relation_check(seq: HeckeSequence, depth: int) -> float:
    return hecke_relation_residual(seq, depth)
