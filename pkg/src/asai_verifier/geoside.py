"""Geometric-side experiments: the oscillatory integrals I_m, the kernel H_n
and its double integral, the n = 0 term A_{0,X} and the n != 0 main term.

All experiments take a totally positive l, so that the arguments
4 pi sqrt(t l)/x and 4 pi sqrt(t l')/y of V_1, V_2 are real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .charsums import ramanujan_Z
from .errors import PreconditionFailed, QuadratureFailure, TruncationBudgetExceeded
from .multident import R
from .quadfield import FieldContext, QuadInt, _shape, make_field
from .spectransform import TestFunction, bump, convolve, gauss_legendre, panel_nodes, panels_for_phase

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi


@dataclass
class GeoConfig:
    D: int = 5
    l: QuadInt | None = None
    g: TestFunction = field(default_factory=lambda: bump(1.0, 2.0).normalized())
    V1: TestFunction = field(default_factory=lambda: bump(1.0, 2.0))
    V2: TestFunction = field(default_factory=lambda: bump(1.0, 2.0))
    X_values: tuple[float, ...] = (1e2, 1e3, 1e4)
    t_nodes: int = 48
    max_points: int = 5_000_000
    tolerance: float = 1e-2

    def __post_init__(self):
        if self.l is None:
            self.l = QuadInt(1, 0, self.D)
        l1, l2 = self.l.embeddings()
        if l1 <= 0 or l2 <= 0:
            raise PreconditionFailed(f"l={self.l} must be totally positive")

    @property
    def ctx(self) -> FieldContext:
        return make_field(self.D)

    @property
    def l_embeddings(self) -> tuple[float, float]:
        return self.l.embeddings()

    def window(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Boxes in x and y outside which H vanishes for every t in supp g."""
        l1, l2 = self.l_embeddings
        (ga, gb), (a1, b1), (a2, b2) = self.g.support, self.V1.support, self.V2.support
        x = (FOUR_PI * math.sqrt(ga * l1) / b1, FOUR_PI * math.sqrt(gb * l1) / a1)
        y = (FOUR_PI * math.sqrt(ga * l2) / b2, FOUR_PI * math.sqrt(gb * l2) / a2)
        return x, y


# ---------------------------------------------------------------------------
# The t-integral


def _t_interval(x: np.ndarray, y: np.ndarray, cfg: GeoConfig, g_scale: float = 1.0):
    """Overlap of supp g(g_scale t), V1(4 pi sqrt(t l1)/x) and V2(4 pi sqrt(t l2)/y) in t."""
    l1, l2 = cfg.l_embeddings
    (ga, gb), (a1, b1), (a2, b2) = cfg.g.support, cfg.V1.support, cfg.V2.support
    k = 1.0 / (FOUR_PI * FOUR_PI)
    lo = np.maximum.reduce([np.full_like(x, ga / g_scale), k * (a1 * x) ** 2 / l1, k * (a2 * y) ** 2 / l2])
    hi = np.minimum.reduce([np.full_like(x, gb / g_scale), k * (b1 * x) ** 2 / l1, k * (b2 * y) ** 2 / l2])
    return lo, hi


def _t_integral(x: np.ndarray, y: np.ndarray, freq: np.ndarray, cfg: GeoConfig,
                g_scale: float = 1.0, nodes: int | None = None) -> np.ndarray:
    """int e(freq t) g(g_scale t) V1(4 pi sqrt(t l1)/x) V2(4 pi sqrt(t l2)/y) dt, elementwise.

    Gauss-Legendre on the per-point overlap interval, so the integrand is
    resolved at every point regardless of how narrow the overlap is.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    freq = np.broadcast_to(np.asarray(freq, dtype=float), x.shape)
    l1, l2 = cfg.l_embeddings
    lo, hi = _t_interval(x, y, cfg, g_scale)
    out = np.zeros(x.shape, dtype=complex)
    live = hi > lo
    if not np.any(live):
        return out
    nodes = nodes or cfg.t_nodes
    u, w = np.polynomial.legendre.leggauss(nodes)
    lo, hi, xs, ys, fr = lo[live], hi[live], x[live], y[live], freq[live]
    half = 0.5 * (hi - lo)
    t = (0.5 * (hi + lo))[:, None] + half[:, None] * u[None, :]
    vals = (cfg.g(g_scale * t) * cfg.V1(FOUR_PI * np.sqrt(t * l1) / xs[:, None])
            * cfg.V2(FOUR_PI * np.sqrt(t * l2) / ys[:, None]))
    if np.any(fr):
        vals = vals * np.exp(1j * TWO_PI * fr[:, None] * t)
    out[live] = half * (vals @ w)
    return out


def I_integral(n: int, c: QuadInt, X: float, mtt: int, cfg: GeoConfig) -> complex:
    """I_m(n, c, X) = int e(X t n / N(delta c)) g(m^2 t) V1(4 pi sqrt(X t l)/c) V2(4 pi sqrt(X t l')/c') dt.

    V vanishes on negative arguments, so c must be totally positive for a
    nonzero value.
    """
    if X <= 0:
        raise PreconditionFailed("X must be positive")
    c1, c2 = c.embeddings()
    if c1 <= 0 or c2 <= 0:
        return 0j
    norm_delta_c = -cfg.D * c.norm()
    # T = X t turns V(4 pi sqrt(X t l)/c) into V(4 pi sqrt(T l)/c), with dt = dT/X
    val = _t_integral(np.array([c1]), np.array([c2]),
                      np.array([n / norm_delta_c]), cfg, g_scale=mtt * mtt / X, nodes=4 * cfg.t_nodes)
    return complex(val[0]) / X


def I_integral_reference(n: int, c: QuadInt, X: float, mtt: int, cfg: GeoConfig) -> complex:
    """I_m by composite Gauss-Legendre over supp g(m^2 .) with panel doubling."""
    c1, c2 = c.embeddings()
    if c1 <= 0 or c2 <= 0:
        return 0j
    l1, l2 = cfg.l_embeddings
    freq = X * n / (-cfg.D * c.norm())
    ga, gb = cfg.g.support
    lo, hi = ga / mtt ** 2, gb / mtt ** 2

    def f(t):
        return (np.exp(1j * TWO_PI * freq * t) * cfg.g(mtt * mtt * t)
                * cfg.V1(FOUR_PI * np.sqrt(X * t * l1) / c1) * cfg.V2(FOUR_PI * np.sqrt(X * t * l2) / c2))

    return gauss_legendre(f, lo, hi, panels_for_phase(TWO_PI * abs(freq) * (hi - lo)), tol=1e-12)[0]


# ---------------------------------------------------------------------------
# H_n


def H_n(x, y, n: int, cfg: GeoConfig) -> np.ndarray:
    """H_n(x, y) = (1/(xy)) e(-(x l'/y + y l/x)/n) I_1(n, x, 1), where the pair
    (x, y) plays (c, c') and N(delta c) = -D x y."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    l1, l2 = cfg.l_embeddings
    freq = n / (-cfg.D * x * y)
    inner = _t_integral(x, y, freq, cfg)
    phase = np.exp(-1j * TWO_PI * (x * l2 / y + y * l1 / x) / n)
    return phase * inner / (x * y)


def H0(x, y, cfg: GeoConfig) -> np.ndarray:
    """H(x, y) = (1/(xy)) int g(t) V1(4 pi sqrt(l t)/x) V2(4 pi sqrt(l' t)/y) dt."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return (_t_integral(x, y, np.zeros_like(x), cfg) / (x * y)).real


@dataclass(frozen=True)
class STResult:
    """Double integral of H_n against the scaled convolution."""

    n: int
    integral: complex
    est_error: float
    convolution_side: complex
    reduced_integral: complex

    @property
    def residual(self) -> float:
        return abs(self.integral - self.convolution_side) / abs(self.convolution_side)


def H_n_double_integral(n: int, cfg: GeoConfig, panels: int = 24) -> tuple[complex, float]:
    """int int H_n(x, y) dx dy by tensor Gauss-Legendre over the support window,
    doubling the panel count once for the error estimate."""
    (x0, x1), (y0, y1) = cfg.window()

    def evaluate(p: int) -> complex:
        xs, wx = panel_nodes(x0, x1, p)
        ys, wy = panel_nodes(y0, y1, p)
        X_, Y_ = np.meshgrid(xs, ys, indexing="ij")
        vals = H_n(X_.ravel(), Y_.ravel(), n, cfg).reshape(X_.shape)
        return complex(wx @ vals @ wy)

    a = evaluate(panels)
    b = evaluate(2 * panels)
    err = abs(a - b)
    if err > 1e-6 * max(abs(b), 1e-300):
        raise QuadratureFailure(f"int int H_{n}: est_error {err:.3e}")
    return b, err


def H_n_reduced_integral(n: int, cfg: GeoConfig) -> complex:
    """int int H_n in the variables p = 4 pi sqrt(t l)/x, q = 4 pi sqrt(t l')/y.

    Both phases become independent of t, leaving
    (int g) int int exp(-i z/2 (p/q + q/p) - i pq/(2 D z)) V1(p) V2(q) dp dq/(pq)
    with z = 4 pi sqrt(l l')/n.
    """
    l1, l2 = cfg.l_embeddings
    z = FOUR_PI * math.sqrt(l1 * l2) / n
    (a, b), (c, d) = cfg.V1.support, cfg.V2.support
    p, wp = panel_nodes(a, b, 32)
    q, wq = panel_nodes(c, d, 32)
    P, Q = np.meshgrid(p, q, indexing="ij")
    phase = -0.5 * z * (P / Q + Q / P) - P * Q / (2.0 * cfg.D * z)
    inner = (cfg.V1(p) * wp / p) @ np.exp(1j * phase) @ (cfg.V2(q) * wq / q)
    return cfg.g.integral() * complex(inner)


def H_n_integral(n: int, cfg: GeoConfig) -> STResult:
    """int int H_n and D (V1*V2)(4 pi sqrt(l l')/|n|)."""
    if n == 0:
        raise PreconditionFailed("n must be nonzero")
    integral, err = H_n_double_integral(n, cfg)
    l1, l2 = cfg.l_embeddings
    conv, _ = convolve(cfg.V1, cfg.V2, FOUR_PI * math.sqrt(l1 * l2) / abs(n))
    return STResult(n, integral, err, cfg.D * conv, H_n_reduced_integral(n, cfg))


# ---------------------------------------------------------------------------
# A_{0,X}


def _J_profile(w: np.ndarray, cfg: GeoConfig) -> np.ndarray:
    """J(w) = int g(u) V1(4 pi sqrt(l u)/w) V2(4 pi sqrt(l' u)/w) du."""
    return _t_integral(w, w, np.zeros_like(w), cfg).real


def _J_window(cfg: GeoConfig) -> tuple[float, float]:
    (x0, x1), (y0, y1) = cfg.window()
    return max(x0, y0), min(x1, y1)


def _delta_quotient(cfg: GeoConfig) -> int:
    """(l - l')/delta as an integer."""
    t, _ = _shape(cfg.D)
    # l - l' = b (w - w') and w - w' = sqrt D (half basis) or 2 sqrt D (sqrt D basis)
    return cfg.l.b * (1 if t else 2)


def ramified_ramanujan(b: int, beta: int, D: int) -> int:
    """sum over y mod Db, (y, Db) = 1, of e(y beta / b).

    Reduction mod b is phi(Db)/phi(b)-to-one onto (Z/b)*.
    """
    from sympy import totient

    return int(totient(D * b)) // int(totient(b)) * ramanujan_Z(b, beta)


@dataclass(frozen=True)
class A0Row:
    X: float
    value: float
    claimed: float
    diagonal: float
    terms: int

    @property
    def rel_error(self) -> float:
        return abs(self.value - self.claimed) / abs(self.claimed) if self.claimed else abs(self.value)


@dataclass(frozen=True)
class A0Table:
    rows: tuple[A0Row, ...]
    l_equal: bool
    scale: float

    @property
    def monotone(self) -> bool:
        errs = [abs(r.value - r.claimed) for r in self.rows]
        return all(b < a for a, b in zip(errs, errs[1:]))


def A0_value(X: float, cfg: GeoConfig) -> tuple[float, int]:
    """Truncated eq. for A_{0,X}: sum over m, a, b with Ramanujan-sum weights.

    Each term is reduced by t -> u/m^2: int g(m^2 t) V1(4 pi sqrt(X l t)/c) ... dt
    = J(m c/sqrt X)/m^2, and J vanishes off a compact window, which bounds
    m a and m b sqrt D.
    """
    w_lo, w_hi = _J_window(cfg)
    if w_hi <= w_lo:
        return 0.0, 0
    beta = _delta_quotient(cfg)
    s = math.sqrt(X)
    sqD = math.sqrt(cfg.D)
    total_a, total_b, terms = [], [], 0
    n_max = int(w_hi * s) + 1
    if n_max > cfg.max_points:
        raise TruncationBudgetExceeded(f"{n_max} terms exceed budget at X={X}")
    for m in range(1, n_max + 1):
        a = np.arange(max(1, int(w_lo * s / m)), int(w_hi * s / m) + 2)
        if a.size:
            J = _J_profile(m * a / s, cfg)
            live = J != 0
            weights = np.array([ramanujan_Z(int(v), beta) for v in a[live]], dtype=float)
            total_a.append(math.fsum((weights * J[live] / (a[live] ** 2 * m * m)).tolist()))
            terms += int(live.sum())
        b = np.arange(max(1, int(w_lo * s / (m * sqD))), int(w_hi * s / (m * sqD)) + 2)
        if b.size:
            J = _J_profile(m * b * sqD / s, cfg)
            live = J != 0
            weights = np.array([ramified_ramanujan(int(v), beta, cfg.D) for v in b[live]], dtype=float)
            total_b.append(math.fsum((weights * J[live] / (b[live] ** 2 * m * m)).tolist()) / cfg.D)
            terms += int(live.sum())
    return math.fsum(total_a) + math.fsum(total_b), terms


def A0_claimed_limit(cfg: GeoConfig) -> float:
    """delta(l, l') (1 + 1/D)/2 int int V1(x) V2(y) dx dy/(xy)."""
    if cfg.l.b != 0:
        return 0.0
    return (1 + 1 / cfg.D) / 2 * cfg.V1.integral(lambda x: 1 / x) * cfg.V2.integral(lambda x: 1 / x)


def A0_diagonal_limit(cfg: GeoConfig) -> float:
    """(2D+1)/(D+1) (int g) int V1 V2 dp/p for rational l.

    The a-sum collapses via sum_{a | N} phi(a) = N to a Riemann sum of J(w)/w,
    and the b-sum contributes D/(D+1) of the same integral.
    """
    if cfg.l.b != 0:
        return 0.0
    lo = max(cfg.V1.support[0], cfg.V2.support[0])
    hi = min(cfg.V1.support[1], cfg.V2.support[1])
    if lo >= hi:
        return 0.0
    diag = gauss_legendre(lambda p: cfg.V1(p) * cfg.V2(p) / p, lo, hi, tol=1e-13)[0].real
    return (2 * cfg.D + 1) / (cfg.D + 1) * cfg.g.integral() * diag


def A0_limit_experiment(cfg: GeoConfig) -> A0Table:
    claimed = A0_claimed_limit(cfg)
    diagonal = A0_diagonal_limit(cfg)
    rows = []
    for X in cfg.X_values:
        value, terms = A0_value(X, cfg)
        rows.append(A0Row(X, value, claimed, diagonal, terms))
    equal = cfg.l.b == 0
    scale = claimed if equal else (1 + 1 / cfg.D) / 2 * cfg.V1.integral(lambda x: 1 / x) * cfg.V2.integral(lambda x: 1 / x)
    return A0Table(tuple(rows), equal, scale)


# ---------------------------------------------------------------------------
# A_{n,X} main term


def _mul_coords(a1, b1, a2, b2, D: int):
    """Coordinates of (a1 + b1 w)(a2 + b2 w), elementwise on integer arrays."""
    t, k = _shape(D)
    return a1 * a2 + k * b1 * b2, a1 * b2 + a2 * b1 + t * b1 * b2


def _ramified_primes(ctx: FieldContext) -> list[int]:
    from sympy import primefactors

    return [int(p) for p in primefactors(abs(ctx.disc))]


def lattice_points_in_box(D: int, box1: tuple[float, float], box2: tuple[float, float]) -> tuple[np.ndarray, np.ndarray]:
    """All c = a + b w in O_K with embeddings in box1 x box2."""
    ctx = make_field(D)
    w1, w2 = ctx.omega.embeddings()  # w1 > w2 for both bases
    lo1, hi1 = box1
    lo2, hi2 = box2
    b_min = math.floor((lo1 - hi2) / (w1 - w2))
    b_max = math.ceil((hi1 - lo2) / (w1 - w2))
    A, B = [], []
    for b in range(b_min, b_max + 1):
        a_lo = max(lo1 - b * w1, lo2 - b * w2)
        a_hi = min(hi1 - b * w1, hi2 - b * w2)
        if a_hi < a_lo:
            continue
        a = np.arange(math.ceil(a_lo), math.floor(a_hi) + 1, dtype=np.int64)
        A.append(a)
        B.append(np.full_like(a, b))
    if not A:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(A), np.concatenate(B)


def in_Xn_rd(a: np.ndarray, b: np.ndarray, r: QuadInt, d: QuadInt, n: int, ctx: FieldContext) -> np.ndarray:
    """Membership of c = a + b w in the displayed set: (c, c') = 1,
    c r - c' = lambda n/(d delta) with lambda integral, and (lambda, d)_Z = 1.

    (c, c') = 1 iff no rational prime divides c and no ramified prime divides N(c).
    """
    t, k = _shape(ctx.D)
    norm = a * a + t * a * b - k * b * b
    ok = np.gcd(a, b) == 1
    for p in _ramified_primes(ctx):
        ok &= norm % p != 0
    # c' = (a + t b) - b w
    ca, cb = a + t * b, -b
    ea, eb = _mul_coords(a, b, r.a, r.b, ctx.D)
    ea, eb = ea - ca, eb - cb
    delta = QuadInt(-1, 2, ctx.D) if t else QuadInt(0, 1, ctx.D)
    dd = d * delta
    la, lb = _mul_coords(ea, eb, dd.a, dd.b, ctx.D)
    ok &= (la % n == 0) & (lb % n == 0)
    if d.b == 0 and abs(d.a) > 1:
        g = np.gcd(np.gcd(la // n, lb // n), abs(d.a))
        ok &= g == 1
    return ok


@dataclass(frozen=True)
class AnRow:
    X: float
    empirical: complex
    constant: complex
    points: int


@dataclass(frozen=True)
class AnTable:
    n: int
    r: QuadInt
    d: QuadInt
    integral: complex
    rows: tuple[AnRow, ...]
    candidates: dict[str, float]

    def best_candidate(self, X: float | None = None) -> tuple[str, float]:
        row = self.rows[-1] if X is None else next(r for r in self.rows if r.X == X)
        name = min(self.candidates, key=lambda k: abs(row.constant - self.candidates[k]))
        return name, abs(row.constant - self.candidates[name]) / abs(self.candidates[name])

    def errors_to(self, name: str) -> list[float]:
        c = self.candidates[name]
        return [abs(r.constant - c) / abs(c) for r in self.rows]


def _R_for(n: int, d: QuadInt) -> Fraction:
    """R(n, d) with d read through its rational size |N(d)|^{1/2} when d = d',
    and |N(d)| when d = -d'."""
    if d.b == 0:
        return R(n, abs(d.a))
    return R(n, abs(d.norm()))


def An_candidates(n: int, d: QuadInt, D: int) -> dict[str, float]:
    Rv = float(_R_for(n, d))
    sq = math.sqrt(D)
    return {
        "R/sqrtD": Rv / sq,
        "R/(sqrtD n)": Rv / (sq * n),
        "R/D^(3/2)": Rv / D ** 1.5,
        "(1+1/D) R/n": (1 + 1 / D) * Rv / n,
    }


def An_sum(n: int, r: QuadInt, d: QuadInt, X: float, cfg: GeoConfig) -> tuple[complex, int]:
    """(1/X) sum_m sum_c H_n(m d c/sqrt X, m d c'/sqrt X) over the displayed set.

    For d = -d' the second argument keeps the displayed d c'.
    """
    ctx = cfg.ctx
    (x0, x1), (y0, y1) = cfg.window()
    d1 = abs(d.embeddings()[0])
    s = math.sqrt(X)
    total, points, m = [], 0, 1
    while True:
        scale = s / (m * d1)
        if x1 * scale < 1 and y1 * scale < 1 and m > 1:
            break
        a, b = lattice_points_in_box(ctx.D, (x0 * scale, x1 * scale), (y0 * scale, y1 * scale))
        if a.size == 0:
            if x1 * scale < 1:
                break
            m += 1
            continue
        keep = in_Xn_rd(a, b, r, d, n, ctx)
        a, b = a[keep], b[keep]
        points += a.size
        if points > cfg.max_points:
            raise TruncationBudgetExceeded(f"more than {cfg.max_points} lattice points")
        w1, w2 = ctx.omega.embeddings()
        c1 = a + b * w1
        c2 = a + b * w2
        for lo in range(0, a.size, 200_000):
            hi = lo + 200_000
            vals = H_n(m * d1 * c1[lo:hi] / s, m * d1 * c2[lo:hi] / s, n, cfg)
            total.append(complex(np.sum(vals)))
        m += 1
    return complex(math.fsum(v.real for v in total), math.fsum(v.imag for v in total)) / X, points


def An_mainterm_experiment(n: int, r: QuadInt, d: QuadInt, cfg: GeoConfig) -> AnTable:
    if (r.norm() - 1) % n:
        raise PreconditionFailed(f"r r' != 1 mod {n}")
    integral, _ = H_n_double_integral(n, cfg)
    rows = []
    for X in cfg.X_values:
        value, points = An_sum(n, r, d, X, cfg)
        rows.append(AnRow(X, value, value / integral, points))
    return AnTable(n, r, d, integral, tuple(rows), An_candidates(n, d, cfg.D))
