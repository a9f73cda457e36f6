"""Exact arithmetic in the maximal order of a real quadratic field Q(sqrt D).

Elements are stored as integer coordinates on the basis (1, w) where
w = (1 + sqrt D)/2 when D = 1 mod 4 and w = sqrt D otherwise.  Every
quantity that can be exact is exact; real embeddings are computed on
demand in double precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

import sympy

from .errors import (
    ClassNumberNotOne,
    GeneratorSearchExhausted,
    NotPrime,
    UnsupportedRing,
    ZeroModulus,
)


class OmegaKind(str, enum.Enum):
    SQRT_D = "sqrtD"
    HALF_INTEGRAL = "halfIntegral"


class Splitting(str, enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@lru_cache(maxsize=None)
def _shape(D: int) -> tuple[int, int]:
    """Return (t, k) with w^2 = k + t*w."""
    if D % 4 == 1:
        return 1, (D - 1) // 4
    return 0, D


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The element a + b*w of O_K, K = Q(sqrt D)."""

    a: int
    b: int
    D: int

    # -- ring structure -------------------------------------------------
    def _coerce(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, QuadInt):
            if other.D != self.D:
                raise ValueError(f"mixed fields: D={self.D} and D={other.D}")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.D)
        return NotImplemented

    def __add__(self, other: QuadInt | int) -> QuadInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadInt(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.b, self.D)

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadInt(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other: int) -> QuadInt:
        return (-self) + other

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.a * other, self.b * other, self.D)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        t, k = _shape(self.D)
        bd = self.b * o.b
        return QuadInt(self.a * o.a + k * bd, self.a * o.b + self.b * o.a + t * bd, self.D)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QuadInt:
        if e < 0:
            raise ValueError("negative powers are not integral in general")
        result, base = QuadInt(1, 0, self.D), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    # -- invariants ------------------------------------------------------
    def conj(self) -> QuadInt:
        t, _ = _shape(self.D)
        return QuadInt(self.a + t * self.b, -self.b, self.D)

    def norm(self) -> int:
        t, k = _shape(self.D)
        return self.a * self.a + t * self.a * self.b - k * self.b * self.b

    def trace(self) -> int:
        t, _ = _shape(self.D)
        return 2 * self.a + t * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def rational_pair(self) -> tuple[Fraction, Fraction]:
        """Coordinates (p, q) with self = p + q*sqrt(D)."""
        t, _ = _shape(self.D)
        if t:
            return Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2)
        return Fraction(self.a), Fraction(self.b)

    def embeddings(self) -> tuple[float, float]:
        """The two real embeddings (x, x').

        The embedding of larger modulus is computed directly, the other as
        N(x)/larger, which keeps relative accuracy near machine epsilon even
        under cancellation.
        """
        p, q = self.rational_pair()
        r = math.sqrt(self.D)
        if q == 0:
            v = float(p)
            return v, v
        same_sign = (p >= 0) == (q >= 0)
        big = float(p) + float(q) * r if same_sign else float(p) - float(q) * r
        small = self.norm() / big
        return (big, small) if same_sign else (small, big)

    def __float__(self) -> float:
        return self.embeddings()[0]

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}w"

    def canonical(self) -> str:
        return f"({self.a},{self.b})@D{self.D}"


def sqrt_d(D: int) -> QuadInt:
    """The element sqrt D, which generates the different."""
    t, _ = _shape(D)
    return QuadInt(-1, 2, D) if t else QuadInt(0, 1, D)


def omega(D: int) -> QuadInt:
    return QuadInt(0, 1, D)


def from_rational_pair(p: Fraction | int, q: Fraction | int, D: int) -> QuadInt:
    """The element p + q*sqrt(D); raises ArithmeticError if not integral."""
    p, q = Fraction(p), Fraction(q)
    t, _ = _shape(D)
    if t:
        a, b = p - q, 2 * q
    else:
        a, b = p, q
    if a.denominator != 1 or b.denominator != 1:
        raise ArithmeticError(f"{p} + {q}*sqrt({D}) is not in the maximal order")
    return QuadInt(int(a), int(b), D)


def divides(y: QuadInt, x: QuadInt) -> bool:
    """Whether y | x in O_K."""
    if not y:
        return not x
    n = y.norm()
    z = x * y.conj()
    return z.a % n == 0 and z.b % n == 0


def exact_div(x: QuadInt, y: QuadInt) -> QuadInt:
    """x / y, which must lie in O_K."""
    if not y:
        raise ZeroModulus("division by zero element")
    n = y.norm()
    z = x * y.conj()
    if z.a % n or z.b % n:
        raise ArithmeticError(f"{y} does not divide {x}")
    return QuadInt(z.a // n, z.b // n, x.D)


def div_rational(x: QuadInt, n: int) -> QuadInt:
    if x.a % n or x.b % n:
        raise ArithmeticError(f"{n} does not divide {x}")
    return QuadInt(x.a // n, x.b // n, x.D)


def congruent(x: QuadInt, y: QuadInt, c: QuadInt) -> bool:
    return divides(c, x - y)


def congruent_mod_int(x: QuadInt, y: QuadInt, n: int) -> bool:
    n = abs(n)
    return (x.a - y.a) % n == 0 and (x.b - y.b) % n == 0


# ---------------------------------------------------------------------------
# Field context


def _cf_fundamental_unit(D: int) -> QuadInt:
    """Fundamental unit from the continued fraction of w."""
    t, _ = _shape(D)
    P, Q, N = (1, 2, D) if t else (0, 1, D)
    s = math.isqrt(N)
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(10 * D + 100):
        a = (P + s) // Q if Q > 0 else -((P + s) // -Q) - 1
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        x = QuadInt(p_cur, -q_cur, D)
        if abs(x.norm()) == 1:
            eps = x.conj()
            val = eps.embeddings()[0]
            if val < 0:
                eps, val = -eps, -val
            if val < 1:
                eps = eps.conj() if eps.norm() == 1 else -eps.conj()
            return eps
        P = a * Q - P
        Q = (N - P * P) // Q
    raise UnsupportedRing(f"continued fraction of w did not reach a unit for D={D}")


def _reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    s = math.isqrt(disc)
    forms = []
    for b in range(1, s + 1):
        if (b - disc) % 2:
            continue
        m = (disc - b * b) // 4
        if m <= 0:
            continue
        for a0 in sympy.divisors(m):
            if (2 * a0 + b) ** 2 <= disc:
                continue
            if 2 * a0 - b > 0 and (2 * a0 - b) ** 2 >= disc:
                continue
            for a in (a0, -a0):
                forms.append((a, b, -m // a))
    return forms


def _rho(form: tuple[int, int, int], disc: int) -> tuple[int, int, int]:
    s = math.isqrt(disc)
    _, b, c = form
    m = 2 * abs(c)
    b2 = s - ((s + b) % m)
    return c, b2, (b2 * b2 - disc) // (4 * c)


def narrow_class_number(disc: int) -> int:
    """Number of rho-cycles of reduced indefinite forms of discriminant disc."""
    remaining = set(_reduced_forms(disc))
    cycles = 0
    while remaining:
        start = remaining.pop()
        cycles += 1
        f = _rho(start, disc)
        while f != start:
            if f not in remaining:
                raise UnsupportedRing(f"rho left the reduced set at {f}")
            remaining.discard(f)
            f = _rho(f, disc)
    return cycles


def _norm_search(D: int, targets: Iterable[int], bound: int) -> QuadInt | None:
    t, k = _shape(D)
    targets = tuple(targets)
    for b in range(0, bound + 1):
        for sb in {b, -b}:
            for target in targets:
                disc = t * t * sb * sb + 4 * (k * sb * sb + target)
                if disc < 0:
                    continue
                r = math.isqrt(disc)
                if r * r != disc:
                    continue
                for sq in (r, -r):
                    num = -t * sb + sq
                    if num % 2 == 0:
                        return QuadInt(num // 2, sb, D)
    return None


def _search_bound(D: int, p: int, eps0_val: float) -> int:
    width = math.sqrt(D) * (1 if D % 4 == 1 else 2)
    return int(2 * math.sqrt(p) * eps0_val / width) + 2


@dataclass(frozen=True)
class FieldContext:
    D: int
    disc: int
    omega_kind: OmegaKind
    eps0: QuadInt
    log_eps0: float
    class_number: int
    minkowski_bound: float
    narrow_class_number: int = field(default=1)

    @property
    def sqrt_d(self) -> QuadInt:
        return sqrt_d(self.D)

    @property
    def delta(self) -> QuadInt:
        return sqrt_d(self.D)

    @property
    def omega(self) -> QuadInt:
        return omega(self.D)

    def element(self, a: int, b: int = 0) -> QuadInt:
        return QuadInt(a, b, self.D)

    def one(self) -> QuadInt:
        return QuadInt(1, 0, self.D)

    def zero(self) -> QuadInt:
        return QuadInt(0, 0, self.D)

    @property
    def eps0_norm(self) -> int:
        return self.eps0.norm()


@lru_cache(maxsize=None)
def make_field(D: int) -> FieldContext:
    """Build and certify the context for Q(sqrt D), D prime, class number one."""
    if not isinstance(D, int) or D < 2 or not sympy.isprime(D):
        raise NotPrime(f"D={D} is not a prime")
    half = D % 4 == 1
    disc = D if half else 4 * D
    eps0 = _cf_fundamental_unit(D)
    eps_val = eps0.embeddings()[0]
    if not (eps_val > 1 and abs(eps0.norm()) == 1):
        raise UnsupportedRing(f"bad fundamental unit {eps0}")
    mink = math.sqrt(disc) / 2
    h_plus = narrow_class_number(disc)
    h = h_plus if eps0.norm() == -1 else h_plus // 2
    minkowski_ok = _minkowski_principal(D, disc, mink, eps_val)
    if (h == 1) != minkowski_ok:
        raise UnsupportedRing(
            f"class number certificates disagree for D={D}: forms give h={h}, "
            f"Minkowski enumeration gives principal={minkowski_ok}"
        )
    if h != 1:
        raise ClassNumberNotOne(f"Q(sqrt {D}) has class number {h}")
    return FieldContext(
        D=D,
        disc=disc,
        omega_kind=OmegaKind.HALF_INTEGRAL if half else OmegaKind.SQRT_D,
        eps0=eps0,
        log_eps0=math.log(eps_val),
        class_number=h,
        minkowski_bound=mink,
        narrow_class_number=h_plus,
    )


def _minkowski_principal(D: int, disc: int, mink: float, eps_val: float) -> bool:
    """Every non-inert prime below the Minkowski bound has a principal factor."""
    for p in sympy.primerange(2, int(mink) + 1):
        if _kronecker(disc, p) == -1:
            continue
        if _norm_search(D, (p, -p), _search_bound(D, p, eps_val)) is None:
            return False
    return True


def _kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    return _kronecker(a, n)


# ---------------------------------------------------------------------------
# Units and canonical associates


def canonical_associate(x: QuadInt, ctx: FieldContext) -> QuadInt:
    """The associate u*x with 1 <= |x/x'| < eps0^2 and positive first embedding.

    When N(eps0) = -1 the ratio window can be narrowed further, but the
    wider window already makes the choice unique up to sign.
    """
    if not x:
        return x
    eps, eps_c = ctx.eps0, ctx.eps0.conj()
    y = x
    e1, e2 = y.embeddings()
    ratio = math.log(abs(e1)) - math.log(abs(e2))
    j = math.floor(ratio / (2 * ctx.log_eps0))
    # multiplying by eps^{-j} shifts log|x/x'| by -2j log eps0
    if j > 0:
        inv = eps_c if ctx.eps0_norm == 1 else -eps_c
        y = y * inv ** j
    elif j < 0:
        y = y * eps ** (-j)
    # repair rounding at the window edges
    for _ in range(2):
        e1, e2 = y.embeddings()
        ratio = math.log(abs(e1)) - math.log(abs(e2))
        if ratio < -1e-12:
            y = y * eps
        elif ratio >= 2 * ctx.log_eps0 - 1e-12:
            inv = eps_c if ctx.eps0_norm == 1 else -eps_c
            y = y * inv
    if y.embeddings()[0] < 0:
        y = -y
    return y


def associated(x: QuadInt, y: QuadInt) -> bool:
    if not x or not y:
        return not x and not y
    return abs(x.norm()) == abs(y.norm()) and divides(x, y)


# ---------------------------------------------------------------------------
# Prime splitting and factorization


@dataclass(frozen=True)
class PrimeFactor:
    generator: QuadInt
    splitting: Splitting
    exponent: int


@dataclass(frozen=True)
class IdealFactorization:
    n: int
    factors: tuple[PrimeFactor, ...]

    def regenerate(self) -> QuadInt:
        D = self.factors[0].generator.D if self.factors else None
        if D is None:
            raise ValueError("empty factorization has no field attached")
        out = QuadInt(1, 0, D)
        for f in self.factors:
            out = out * f.generator ** f.exponent
        return out


def splitting_type(p: int, ctx: FieldContext) -> Splitting:
    chi = kronecker(ctx.disc, p)
    if chi == 0:
        return Splitting.RAMIFIED
    return Splitting.SPLIT if chi == 1 else Splitting.INERT


@lru_cache(maxsize=None)
def _prime_ideals(p: int, D: int) -> tuple[tuple[QuadInt, ...], Splitting]:
    ctx = make_field(D)
    kind = splitting_type(p, ctx)
    if kind is Splitting.INERT:
        return (QuadInt(p, 0, D),), kind
    eps_val = ctx.eps0.embeddings()[0]
    bound = _search_bound(D, p, eps_val)
    pi = None
    for scale in (1, 4, 16):
        pi = _norm_search(D, (p, -p), bound * scale)
        if pi is not None:
            break
    if pi is None:
        raise GeneratorSearchExhausted(f"no element of norm +-{p} in D={D}")
    pi = canonical_associate(pi, ctx)
    if kind is Splitting.RAMIFIED:
        return (pi,), kind
    return (pi, canonical_associate(pi.conj(), ctx)), kind


def prime_ideals_over(p: int, ctx: FieldContext) -> tuple[tuple[QuadInt, ...], Splitting]:
    """Generators of the prime ideals above the rational prime p."""
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    return _prime_ideals(p, ctx.D)


def factor_in_K(n: int, ctx: FieldContext) -> IdealFactorization:
    """Prime-ideal factorization of the principal ideal (n)."""
    if n == 0:
        raise ZeroModulus("cannot factor 0")
    factors = []
    for p, e in sorted(sympy.factorint(abs(n)).items()):
        gens, kind = prime_ideals_over(p, ctx)
        exp = 2 * e if kind is Splitting.RAMIFIED else e
        for g in gens:
            factors.append(PrimeFactor(g, kind, exp))
    return IdealFactorization(n, tuple(factors))


def valuation(x: QuadInt, pi: QuadInt) -> int:
    if not x:
        raise ZeroModulus("valuation of zero")
    v = 0
    while divides(pi, x):
        x = exact_div(x, pi)
        v += 1
    return v


def factor_element(x: QuadInt, ctx: FieldContext) -> list[tuple[QuadInt, Splitting, int]]:
    """Prime-ideal factorization of (x) as (generator, splitting, exponent)."""
    if not x:
        raise ZeroModulus("cannot factor 0")
    out = []
    for p in sorted(sympy.factorint(abs(x.norm()))):
        gens, kind = prime_ideals_over(p, ctx)
        for g in gens:
            v = valuation(x, g)
            if v:
                out.append((g, kind, v))
    return out


def unit_part(x: QuadInt, ctx: FieldContext) -> QuadInt:
    y = x
    for g, _, e in factor_element(x, ctx):
        y = exact_div(y, g ** e)
    if not y.is_unit():
        raise UnsupportedRing(f"cofactor {y} of {x} is not a unit")
    return y


def _divisors_from(parts: list[tuple[QuadInt, int]], ctx: FieldContext) -> list[QuadInt]:
    gens = [QuadInt(1, 0, ctx.D)]
    for g, e in parts:
        gens = [h * g ** i for h in gens for i in range(e + 1)]
    return sorted((canonical_associate(g, ctx) for g in gens), key=_sort_key)


def _sort_key(x: QuadInt) -> tuple[int, int, int]:
    return abs(x.norm()), x.a, x.b


def ideal_divisors(n: int, ctx: FieldContext) -> list[QuadInt]:
    """One generator for every ideal dividing (n), n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    fac = factor_in_K(n, ctx)
    return _divisors_from([(f.generator, f.exponent) for f in fac.factors], ctx)


def element_divisors(x: QuadInt, ctx: FieldContext) -> list[QuadInt]:
    """One generator for every ideal dividing (x)."""
    return _divisors_from([(g, e) for g, _, e in factor_element(x, ctx)], ctx)


def ideal_divisor_count(n: int, ctx: FieldContext) -> int:
    total = 1
    for p, e in sympy.factorint(n).items():
        kind = splitting_type(p, ctx)
        total *= {Splitting.SPLIT: (e + 1) ** 2, Splitting.INERT: e + 1,
                  Splitting.RAMIFIED: 2 * e + 1}[kind]
    return total


def ideals_of_norm(y: int, ctx: FieldContext) -> list[QuadInt]:
    """Generators of all integral ideals of norm exactly y >= 1."""
    if y < 1:
        return []
    choices: list[list[QuadInt]] = []
    for p, e in sorted(sympy.factorint(y).items()):
        gens, kind = prime_ideals_over(p, ctx)
        if kind is Splitting.SPLIT:
            pi, pic = gens
            choices.append([pi ** i * pic ** (e - i) for i in range(e + 1)])
        elif kind is Splitting.INERT:
            if e % 2:
                return []
            choices.append([gens[0] ** (e // 2)])
        else:
            choices.append([gens[0] ** e])
    out = []
    for combo in product(*choices):
        g = QuadInt(1, 0, ctx.D)
        for h in combo:
            g = g * h
        out.append(canonical_associate(g, ctx))
    return sorted(out, key=_sort_key)


def ideal_gcd(x: QuadInt, y: QuadInt, ctx: FieldContext) -> QuadInt:
    """A generator of the ideal (x, y)."""
    if not x:
        return canonical_associate(y, ctx) if y else y
    if not y:
        return canonical_associate(x, ctx)
    g = QuadInt(1, 0, ctx.D)
    for pi, _, e in factor_element(x, ctx):
        v = 0
        z = y
        while v < e and divides(pi, z):
            z = exact_div(z, pi)
            v += 1
        g = g * pi ** v
    return canonical_associate(g, ctx)


def coprime(x: QuadInt, y: QuadInt, ctx: FieldContext | None = None) -> bool:
    """Whether the ideal (x, y) is the unit ideal."""
    if math.gcd(x.norm(), y.norm()) == 1:
        return True
    return lattice_index(x, y) == 1


def lattice_index(*elements: QuadInt) -> int:
    """Index in O_K of the Z-lattice spanned by x*1, x*w over the given x.

    This is the norm of the ideal generated by the elements, computed as
    the gcd of all 2x2 minors.
    """
    cols = []
    for x in elements:
        m = mult_matrix(x)
        cols.append((m[0][0], m[1][0]))
        cols.append((m[0][1], m[1][1]))
    g = 0
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            g = math.gcd(g, cols[i][0] * cols[j][1] - cols[i][1] * cols[j][0])
    return g


def mult_matrix(c: QuadInt) -> tuple[tuple[int, int], tuple[int, int]]:
    """Matrix of multiplication by c on the basis (1, w), columns c*1 and c*w."""
    cw = c * omega(c.D)
    return (c.a, cw.a), (c.b, cw.b)


def mobius_ideal(x: QuadInt, ctx: FieldContext) -> int:
    fac = factor_element(x, ctx)
    if any(e > 1 for _, _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def ideal_norm(x: QuadInt) -> int:
    return abs(x.norm())


def phi_ideal(x: QuadInt, ctx: FieldContext) -> int:
    """Euler phi of the ideal (x): the order of (O_K/x)*."""
    out = 1
    for pi, _, e in factor_element(x, ctx):
        q = abs(pi.norm())
        out *= q ** (e - 1) * (q - 1)
    return out


# ---------------------------------------------------------------------------
# Residue rings


def smith_invariants(m: tuple[tuple[int, int], tuple[int, int]]) -> tuple[int, int]:
    """Elementary divisors (d1, d2) of a nonsingular 2x2 integer matrix."""
    (p, q), (r, s) = m
    d1 = math.gcd(math.gcd(p, q), math.gcd(r, s))
    det = abs(p * s - q * r)
    if d1 == 0 or det == 0:
        raise ZeroModulus("singular multiplication matrix")
    return d1, det // d1


def hermite_box(c: QuadInt) -> tuple[int, int, int]:
    """Hermite basis (h11, 0), (h12, h22) of the lattice cO_K."""
    (x1, x2), (y1, y2) = mult_matrix(c)
    g, s, t = _xgcd(y1, y2)
    wx = s * x1 + t * x2
    ux = (y2 // g) * x1 - (y1 // g) * x2
    h11 = abs(ux)
    h22 = abs(g)
    if g < 0:
        wx = -wx
    return h11, wx % h11, h22


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class ResidueRing:
    modulus: QuadInt
    size: int
    reps: tuple[QuadInt, ...]
    unit_reps: tuple[QuadInt, ...]
    inverse_table: dict = field(compare=False, hash=False, repr=False)
    hnf: tuple[int, int, int] = (1, 0, 1)
    snf: tuple[int, int] = (1, 1)

    def reduce(self, z: QuadInt) -> QuadInt:
        h11, h12, h22 = self.hnf
        q = z.b // h22
        a = z.a - q * h12
        return QuadInt(a % h11, z.b - q * h22, z.D)

    def inverse(self, u: QuadInt) -> QuadInt:
        return self.inverse_table[self.reduce(u)]

    def is_unit(self, u: QuadInt) -> bool:
        return self.reduce(u) in self.inverse_table

    def index(self, z: QuadInt) -> int:
        r = self.reduce(z)
        return r.b * self.hnf[0] + r.a


@lru_cache(maxsize=4096)
def residue_ring(c: QuadInt) -> ResidueRing:
    """Complete residue system and unit group of O_K/(c)."""
    if not c:
        raise ZeroModulus("residue ring modulo 0")
    ctx = make_field(c.D)
    h11, h12, h22 = hermite_box(c)
    size = h11 * h22
    if size != abs(c.norm()):
        raise UnsupportedRing(f"Hermite box of {c} has size {size}, expected |N(c)|")
    reps = tuple(QuadInt(a, b, c.D) for a in range(h11) for b in range(h22))
    primes = [g for g, _, _ in factor_element(c, ctx)]
    units = tuple(u for u in reps if not any(divides(pi, u) for pi in primes))
    ring = ResidueRing(c, size, reps, units, {}, (h11, h12, h22), smith_invariants(mult_matrix(c)))
    phi = len(units)
    if size == 1:
        ring.inverse_table[reps[0]] = reps[0]
        return ring
    unit_set = set(units)
    table = ring.inverse_table
    for u in units:
        if u in table:
            continue
        v = _powmod(u, phi - 1, ring)
        if v not in unit_set:
            raise UnsupportedRing(f"inverse of {u} mod {c} is not a unit")
        table[u] = v
        table[v] = u
    return ring


def _powmod(u: QuadInt, e: int, ring: ResidueRing) -> QuadInt:
    result, base = ring.reduce(QuadInt(1, 0, u.D)), ring.reduce(u)
    while e:
        if e & 1:
            result = ring.reduce(result * base)
        base = ring.reduce(base * base)
        e >>= 1
    return result


def elements_in_box(D: int, bound: int) -> Iterator[QuadInt]:
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            yield QuadInt(a, b, D)


def principal_ideals_up_to(max_norm: int, ctx: FieldContext) -> list[QuadInt]:
    """Canonical generators of all nonzero ideals with norm <= max_norm."""
    out = []
    for y in range(1, max_norm + 1):
        out.extend(ideals_of_norm(y, ctx))
    return out
