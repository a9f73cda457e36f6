"""Both sides of Zagier's identity linking quadratic-field exponential sums
over r with r r' = 1 (mod n) to chi_D-twisted Kloosterman sums over Z.

Only D = 1 mod 4 is meaningful here (D is then a fundamental discriminant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

from .charsums import TWO_PI, kloosterman_twisted
from .errors import LNotCoprimeToD, UnsupportedRing
from .quadfield import FieldContext, QuadInt, _shape, div_rational, kronecker, make_field
from .solnsets import unit_norm_classes


@dataclass(frozen=True)
class BridgeInstance:
    D: int
    a: int
    l: QuadInt
    lhs: complex
    rhs: complex

    @property
    def abs_error(self) -> float:
        return abs(self.lhs - self.rhs)


def _require_fundamental(ctx: FieldContext) -> None:
    if ctx.D % 4 != 1:
        raise UnsupportedRing("the bridge identity needs D = 1 mod 4")


@lru_cache(maxsize=256)
def _r_coords(n: int, D: int) -> tuple[np.ndarray, np.ndarray]:
    rs = unit_norm_classes(n, D)
    return (np.array([r.a for r in rs], dtype=np.int64),
            np.array([r.b for r in rs], dtype=np.int64))


def bridge_lhs(a: int, l: QuadInt, ctx: FieldContext) -> complex:
    """sum over r mod n/delta with r r' = 1 (mod n) of e(Tr(r l)/n), n = D a."""
    _require_fundamental(ctx)
    n = ctx.D * a
    ra, rb = _r_coords(n, ctx.D)
    t, k = _shape(ctx.D)
    # Tr((ra + rb w) l) = ra Tr(l) + rb Tr(w l)
    wl = QuadInt(0, 1, ctx.D) * l
    num = (ra * l.trace() + rb * wl.trace()) % n
    theta = TWO_PI * num / n
    return complex(math.fsum(np.cos(theta).tolist()), math.fsum(np.sin(theta).tolist()))


def bridge_lhs_bruteforce(a: int, l: QuadInt, ctx: FieldContext, shift: QuadInt | None = None) -> complex:
    """Term-by-term LHS; ``shift`` adds a multiple of n/delta to every representative."""
    from fractions import Fraction

    from .charsums import csum, e_frac
    from .solnsets import n_over_delta

    n = ctx.D * a
    s = n_over_delta(n, ctx.D) * (shift if shift is not None else QuadInt(0, 0, ctx.D))
    return csum(e_frac(Fraction(((r + s) * l).trace(), n)) for r in unit_norm_classes(n, ctx.D))


def rational_divisors_of(l: QuadInt) -> list[int]:
    """Positive integers r with r | l in O_K."""
    g = math.gcd(l.a, l.b)
    return [int(r) for r in sympy.divisors(g)] if g else []


@lru_cache(maxsize=65536)
def _twisted(n: int, m: int, c: int, D: int | None) -> complex:
    ctx = make_field(D) if D is not None else None
    return kloosterman_twisted(n % c if c > 1 else n, m, c, ctx)


def bridge_rhs_coprime(a: int, l: QuadInt, ctx: FieldContext) -> complex:
    """(1/sqrt D) sum_{r | l, r | a} r S_D(l l'/r^2, 1, D a / r)."""
    _require_fundamental(ctx)
    if math.gcd(l.norm(), ctx.D) != 1:
        raise LNotCoprimeToD(f"(l, D) != 1 for l={l}")
    N = l.norm()
    total = 0j
    for r in rational_divisors_of(l):
        if a % r:
            continue
        total += r * _twisted(N // (r * r), 1, ctx.D * a // r, ctx.D)
    return total / math.sqrt(ctx.D)


def H_b(b: int, n: int, m: int, ctx: FieldContext) -> complex:
    """H_b(n, m) for prime D: the D2 = 1 and D2 = D terms.

    D2 = 1:  (1/(b D)) S_D(n, m, b D)
    D2 = D:  (psi(D)/D) (1/b) (b/D) S_1(n/D * Dbar, m, b), needs D | n, (b, D) = 1,
             with psi(D) = (1/D) sqrt D = sqrt D.
    """
    D = ctx.D
    total = _twisted(n, m, b * D, D) / (b * D)
    if n % D == 0 and math.gcd(b, D) == 1:
        dbar = pow(D, -1, b) if b > 1 else 0
        psi = math.sqrt(D)
        term = (kronecker(b, D) / b) * _twisted((n // D) * dbar, m, b, None)
        total += psi / D * term
    return total


def bridge_rhs_general(a: int, l: QuadInt, ctx: FieldContext) -> complex:
    """a sqrt D sum_{r | l, r | a} H_{a/r}(-l l'/r^2, -1)."""
    _require_fundamental(ctx)
    N = l.norm()
    total = 0j
    for r in rational_divisors_of(l):
        if a % r:
            continue
        total += H_b(a // r, -N // (r * r), -1, ctx)
    return a * math.sqrt(ctx.D) * total


def bridge_instance(a: int, l: QuadInt, ctx: FieldContext, form: str = "coprime") -> BridgeInstance:
    lhs = bridge_lhs(a, l, ctx)
    rhs = bridge_rhs_coprime(a, l, ctx) if form == "coprime" else bridge_rhs_general(a, l, ctx)
    return BridgeInstance(ctx.D, a, l, lhs, rhs)


def bridge_elements(max_norm: int, ctx: FieldContext, coprime_to_D: bool = True) -> list[QuadInt]:
    """Elements l with |N(l)| <= max_norm: canonical generators and the associates
    -l, eps0*l, eps0'*l."""
    from .quadfield import principal_ideals_up_to

    out = []
    for g in principal_ideals_up_to(max_norm, ctx):
        if coprime_to_D and g.norm() % ctx.D == 0:
            continue
        out.extend([g, -g, g * ctx.eps0, g * ctx.eps0.conj()])
    return out


def empirical_constant(lhs: complex, rhs: complex) -> complex | None:
    """lhs / rhs when the right side is not negligible."""
    if abs(rhs) < 1e-9:
        return None
    return lhs / rhs


def twisted_sum_exact_check(a: int, l: QuadInt, ctx: FieldContext) -> bool:
    """The LHS is real when l' is the conjugate of l."""
    return abs(bridge_lhs(a, l, ctx).imag) < 1e-9


__all__ = [
    "BridgeInstance",
    "H_b",
    "bridge_elements",
    "bridge_instance",
    "bridge_lhs",
    "bridge_lhs_bruteforce",
    "bridge_rhs_coprime",
    "bridge_rhs_general",
    "div_rational",
    "empirical_constant",
    "rational_divisors_of",
]
