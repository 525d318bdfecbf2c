"""Occupancy bound for strong (2-)independent sets via degree profiles.

In a cross-edge-free hypergraph the local configuration around v is the
profile (d_1, ..., d_r): d_t edges through v keep t available vertices
(counting v). Here Q_t = (1 + (t-1) lam)^d is the weight of the pure profile
I_t = d e_t without v, and

    v(t) = C(r-1, t-1) * prod_{i=t}^{r-1} ((1 + i lam)^{d-1} - 1)

are the weights of the optimal primal solution, supported on I_1..I_r.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from .lp import DenseLP
from .quadrature import integrate_to_infinity

SLACK_TOL = 1e-10
EXHAUSTIVE_MAX_D = 50
DEFAULT_COLUMN_BUDGET = 20_000


class ConsistencyError(ArithmeticError):
    """Two independent routes to the same dual variable disagree."""


def _check(r: int, d: int, lam: float) -> None:
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be a positive finite number, got {lam}")


def is_proven(r: int) -> bool:
    """Whether alpha_strong is a proven occupancy bound (only r = 3)."""
    return r == 3


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrongConfig:
    profile: tuple[int, ...]

    @property
    def d(self) -> int:
        return sum(self.profile)

    @property
    def r(self) -> int:
        return len(self.profile)

    @property
    def eta(self) -> tuple[float, ...]:
        d = self.d
        return tuple(x / d for x in self.profile)

    def is_vertex(self) -> bool:
        return sum(1 for x in self.profile if x) == 1


def profiles(r: int, d: int) -> list[StrongConfig]:
    """All (d_1..d_r) >= 0 with sum d, by stars and bars; C(d+r-1, r-1) of them."""
    out = []
    for bars in combinations(range(d + r - 1), r - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(d + r - 2 - prev)
        out.append(StrongConfig(tuple(parts)))
    return out


def pure_profile(r: int, d: int, t: int) -> StrongConfig:
    p = [0] * r
    p[t - 1] = d
    return StrongConfig(tuple(p))


def partition_local(r: int, d: int, lam: float, cfg: StrongConfig) -> float:
    """P_C = lam + prod_s (1 + (s-1) lam)^{d_s}."""
    _check(r, d, lam)
    if cfg.r != r or cfg.d != d:
        raise ValueError(f"profile {cfg.profile} does not match r = {r}, d = {d}")
    logq = log_q_profile(lam, cfg.profile)
    if logq < 700.0:
        return lam + q_profile(lam, cfg.profile)
    return lam + math.exp(logq)


def log_q_profile(lam: float, profile: Sequence[int]) -> float:
    """log prod_s (1 + (s-1) lam)^{d_s}."""
    return math.fsum(ds * math.log1p(s * lam) for s, ds in enumerate(profile) if ds)


def q_profile(lam: float, profile: Sequence[int]) -> float:
    out = 1.0
    for s, ds in enumerate(profile):
        if ds:
            out *= (1.0 + s * lam) ** ds
    return out


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

def _log_expm1(x: float) -> float:
    if x > 30.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def _logsumexp(xs: Sequence[float]) -> float:
    m = max(xs)
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


@dataclass(frozen=True)
class StrongQuantities:
    lam: float
    Q: tuple  # Q_1..Q_r
    P: tuple  # P_{I_t} = Q_t + lam
    v: tuple  # v(1)..v(r); v(r) = 1
    Z: float
    q: tuple  # q(t) = v(t) / Z

    @property
    def alpha_over_lambda(self) -> float:
        return math.fsum(self.q)

    def primal(self) -> tuple:
        """p*(I_t) = P_{I_t} v(t) / Z."""
        return tuple(P * q for P, q in zip(self.P, self.q))


def strong_quantities(r: int, d: int, lam: float) -> StrongQuantities:
    _check(r, d, lam)
    a = [math.expm1((d - 1) * math.log1p(i * lam)) for i in range(r)]
    v = []
    for t in range(1, r + 1):
        prod = 1.0
        for i in range(t, r):
            prod *= a[i]
        v.append(comb(r - 1, t - 1) * prod)
    assert all(x > 0 for x in v), "v(t) must be positive for lam > 0, d >= 2"
    Q = [(1.0 + (t - 1) * lam) ** d for t in range(1, r + 1)]
    P = [x + lam for x in Q]
    Z = math.fsum(p * w for p, w in zip(P, v))
    return StrongQuantities(lam, tuple(Q), tuple(P), tuple(v), Z, tuple(w / Z for w in v))


def _log_terms(r: int, d: int, lam: float):
    la = [_log_expm1((d - 1) * math.log1p(i * lam)) for i in range(1, r)]
    logv = []
    for t in range(1, r + 1):
        logv.append(math.log(comb(r - 1, t - 1)) + math.fsum(la[t - 1:]))
    logP = [float(np.logaddexp(d * math.log1p((t - 1) * lam), math.log(lam))) for t in range(1, r + 1)]
    return logv, logP


def alpha_strong_over_lambda(r: int, d: int, lam: float, method: str = "auto") -> float:
    """alpha_s(r, d, lam) / lam = sum_t v(t) / sum_t P_{I_t} v(t); 1 at lam = 0."""
    if lam == 0:
        return 1.0
    if d == 1:
        # v(t) = 0 for t < r: only I_r survives, and P_{I_r} = 1 + r lam
        _check(r, 2, lam)
        return 1.0 / (1.0 + r * lam)
    _check(r, d, lam)
    if method == "auto":
        # v(1) ~ prod_i (1 + i lam)^d is the largest intermediate
        growth = d * math.fsum(math.log1p(i * lam) for i in range(1, r))
        method = "direct" if growth < 600.0 else "log"
    if method == "direct":
        return strong_quantities(r, d, lam).alpha_over_lambda
    if method == "log":
        logv, logP = _log_terms(r, d, lam)
        return math.exp(_logsumexp(logv) - _logsumexp([a + b for a, b in zip(logv, logP)]))
    raise ValueError(f"unknown method {method!r}")


def alpha_strong(r: int, d: int, lam: float, method: str = "auto") -> float:
    """Strong-IS occupancy bound; a proven bound only for r = 3 (see is_proven)."""
    return lam * alpha_strong_over_lambda(r, d, lam, method)


def strong_second_order_r3(d: int, lam: float) -> float:
    """alpha_s(3, d, lam)/lam - 1/(3(1+lam)), from its own closed form."""
    _check(3, d, lam)
    a = (1.0 + lam) ** d
    b = (1.0 + 2.0 * lam) ** d
    num = 3.0 * b - 1.0 - 2.0 * lam
    den = 3.0 * (1.0 + lam) * (1.0 - 3.0 * a + 3.0 * a * b + lam * (2.0 - 6.0 * a + 3.0 * b))
    return num / den


# ---------------------------------------------------------------------------
# LP
# ---------------------------------------------------------------------------

def build_strong_lp(r: int, d: int, lam: float, budget: int = DEFAULT_COLUMN_BUDGET) -> DenseLP:
    _check(r, d, lam)
    ncols = comb(d + r - 1, r - 1)
    if ncols > budget:
        raise ValueError(f"{ncols} profile columns exceed the budget of {budget}")
    cfgs = profiles(r, d)
    A = np.zeros((r, ncols))
    c = np.zeros(ncols)
    for col, cfg in enumerate(cfgs):
        eta = cfg.eta + (0.0,)
        P = partition_local(r, d, lam, cfg)
        c[col] = 1.0 / P
        for t in range(1, r):
            coef = eta[t - 1] + eta[t] * ((P - lam) / (1.0 + t * lam) - 1.0) - r * eta[t - 1] / t
            A[t - 1, col] = coef / P
        A[r - 1, col] = 1.0
    b = np.zeros(r)
    b[-1] = 1.0
    return DenseLP(
        c, A, b,
        column_labels=tuple(str(cfg.profile).replace(" ", "") for cfg in cfgs),
        row_labels=tuple(f"t={t}" for t in range(1, r)) + ("normalization",),
    )


# ---------------------------------------------------------------------------
# dual certificate
# ---------------------------------------------------------------------------

def solve_linear_recurrence(f: Sequence[float], g: Sequence[float], a0: float) -> list[float]:
    """a_t = f_t a_{t-1} + g_t via (prod f)(a_0 + sum g_m / prod_{k<=m} f_k), t = 1..len(f)."""
    out = []
    prod = 1.0
    acc = a0
    for ft, gt in zip(f, g):
        if ft == 0:
            raise ZeroDivisionError("closed-form recurrence solution needs f_t != 0")
        prod *= ft
        acc += gt / prod
        out.append(prod * acc)
    return out


@dataclass(frozen=True)
class StrongDualCertificate:
    r: int
    lam: float
    Lambda: float
    Lambdas: tuple  # Lambda*_1 .. Lambda*_{r-1}
    c: tuple  # c_1 .. c_r
    cs_residual: float  # s = r constraint residual with Lambda*_r = 0, relative to its largest term

    def Lambda_at(self, s: int) -> float:
        return self.Lambdas[s - 1] if 1 <= s < self.r else 0.0

    def as_vector(self) -> np.ndarray:
        """Dual vector for build_strong_lp: Lambda*_1..Lambda*_{r-1}, then Lambda*."""
        return np.array(list(self.Lambdas) + [self.Lambda])


def lambdas_by_recursion(Q: Sequence, P: Sequence, Lam, r: int, lam) -> list:
    """Forward recursion from Lambda*_0 = 0.

    Works on floats or Fractions. In floats it amplifies the rounding error of
    Lambda* by roughly v(1)/v(t), so for r >= 4 and large d use exact input.
    """
    out = [0 * Lam]
    for s in range(1, r):
        prev = out[-1]
        val = s * (prev * (Q[s - 1] / (1 + (s - 1) * lam) - 1) + Lam * P[s - 1] - 1) / (r - s)
        out.append(val)
    return out[1:]


def lambdas_exact(r: int, d: int, lam: float) -> list[Fraction]:
    """Forward recursion in rational arithmetic (lam taken as its exact binary value)."""
    x = Fraction(lam)
    a = [(1 + i * x) ** (d - 1) - 1 for i in range(r)]
    v = []
    for t in range(1, r + 1):
        prod = Fraction(1)
        for i in range(t, r):
            prod *= a[i]
        v.append(comb(r - 1, t - 1) * prod)
    Q = [(1 + (t - 1) * x) ** d for t in range(1, r + 1)]
    P = [q + x for q in Q]
    Lam = sum(v) / sum(p * w for p, w in zip(P, v))
    return lambdas_by_recursion(Q, P, Lam, r, x)


def lambdas_closed_form(sq: StrongQuantities, r: int) -> list[float]:
    """Lambda*_t = t/(r-t) * W_t / v(t), W_t = sum_{s<=t} v(s) (Lambda* P_{I_s} - 1).

    The full sum W_r vanishes, so W_t also equals minus the tail over s > t;
    whichever side has the smaller absolute mass is used.
    """
    v, Q, Z = sq.v, sq.Q, sq.Z
    # Lambda* P_{I_s} - 1 = sum_i v(i) (Q_s - Q_i) / Z
    x = [math.fsum(v[i] * (Q[s] - Q[i]) for i in range(r)) / Z for s in range(r)]
    terms = [v[s] * x[s] for s in range(r)]
    out = []
    for t in range(1, r):
        head, tail = terms[:t], terms[t:]
        if math.fsum(map(abs, head)) <= math.fsum(map(abs, tail)):
            W = math.fsum(head)
        else:
            W = -math.fsum(tail)
        out.append(t / (r - t) * W / v[t - 1])
    return out


def strong_dual(r: int, d: int, lam: float, rtol: float = 1e-9) -> StrongDualCertificate:
    """Dual certificate; Lambda*_t cross-checked between the exact recursion and the closed form."""
    sq = strong_quantities(r, d, lam)
    Lam = sq.alpha_over_lambda
    rec = [float(x) for x in lambdas_exact(r, d, lam)]
    closed = lambdas_closed_form(sq, r)
    for t, (a, b) in enumerate(zip(rec, closed), start=1):
        if abs(a - b) > rtol * max(1.0, abs(a), abs(b)):
            raise ConsistencyError(f"Lambda*_{t}: recursion {a!r} vs closed form {b!r}")
    full = [0.0] + closed
    c = tuple(Lam + full[t - 1] / (1.0 + (t - 1) * lam) for t in range(1, r + 1))
    last = full[r - 1]
    terms = (Lam * sq.P[r - 1], last * (sq.Q[r - 1] / (1.0 + (r - 1) * lam) - 1.0), -1.0)
    resid = math.fsum(terms) / max(map(abs, terms))
    return StrongDualCertificate(r, lam, Lam, tuple(closed), c, resid)


# ---------------------------------------------------------------------------
# slack sweep over profiles
# ---------------------------------------------------------------------------

def slack_value(cert: StrongDualCertificate, d: int, profile: Sequence[int]) -> float:
    """S(eta) = sum_t eta_t c_t (Q_eta - Q_t)."""
    lam = cert.lam
    Qe = q_profile(lam, profile)
    return math.fsum(
        (dt / d) * ct * (Qe - (1.0 + t * lam) ** d)
        for t, (dt, ct) in enumerate(zip(profile, cert.c)) if dt
    )


@dataclass
class SlackReport:
    r: int
    d: int
    lam: float
    mode: str  # "exhaustive" | "sampled"
    profiles_checked: int = 0
    min_slack: float = math.inf
    min_profile: Optional[tuple] = None
    max_vertex_abs: float = 0.0
    tol: float = SLACK_TOL

    @property
    def passed(self) -> bool:
        return self.min_slack >= -self.tol and self.max_vertex_abs <= 1e-12


def _sampled_profiles(r: int, d: int, samples: int, seed: int) -> Iterable[tuple]:
    seen = set()
    for t in range(1, r + 1):
        seen.add(pure_profile(r, d, t).profile)
    for i in range(r):
        for j in range(i + 1, r):
            p = [0] * r
            p[i] = d // 2
            p[j] = d - d // 2
            seen.add(tuple(p))
    rng = random.Random(seed)
    for _ in range(samples):
        cuts = sorted(rng.randint(0, d) for _ in range(r - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        seen.add(tuple(parts))
    return sorted(seen)


def slack_check(
    r: int,
    d: int,
    lam: float,
    cert: Optional[StrongDualCertificate] = None,
    tol: float = SLACK_TOL,
    exhaustive_max_d: int = EXHAUSTIVE_MAX_D,
    samples: int = 5000,
    seed: int = 0,
) -> SlackReport:
    """Evaluate S(eta) over every integral profile (or a sample for large d)."""
    if cert is None:
        cert = strong_dual(r, d, lam)
    if d <= exhaustive_max_d:
        mode = "exhaustive"
        it = (cfg.profile for cfg in profiles(r, d))
    else:
        mode = "sampled"
        it = _sampled_profiles(r, d, samples, seed)
    rep = SlackReport(r, d, lam, mode, tol=tol)
    for prof in it:
        S = slack_value(cert, d, prof)
        rep.profiles_checked += 1
        if sum(1 for x in prof if x) == 1:
            rep.max_vertex_abs = max(rep.max_vertex_abs, abs(S))
        if S < rep.min_slack:
            rep.min_slack, rep.min_profile = S, tuple(prof)
    return rep


# ---------------------------------------------------------------------------
# r = 3 coefficient claims
# ---------------------------------------------------------------------------

def r3_zc_display(d: int, lam):
    """Closed forms of Z c_1, Z c_2, Z c_3 for r = 3 (float or Fraction lam)."""
    a = (1 + lam) ** (d - 1)
    b = (1 + 2 * lam) ** (d - 1)
    zc1 = a * b + b - a
    zc2 = (3 * b - 1) / (2 * (1 + lam))
    zc3 = (2 * a - 1) / (1 + 2 * lam)
    return zc1, zc2, zc3


@dataclass
class R3Report:
    d: int
    passed: bool = True
    display_max_rel_err: float = 0.0
    min_order_margin: float = math.inf  # min of (c1-c2)/c1, (c2-c3)/c2, c3/c1
    min_pair_margin: float = math.inf  # min over pairs of 1 - c_i(Q_i+Q_j)/(2 c_j Q_j)
    failures: list = field(default_factory=list)


def r3_coefficient_checks(d: int, lams: Iterable[float], display_rtol: float = 1e-9) -> R3Report:
    """Compare Z c_t with its closed forms, then test ordering and pairwise bounds.

    c_t = Lambda* + Lambda*_{t-1}/(1+(t-1)lam) cancels heavily for t = 3, so the
    display error is measured against Z (Lambda* + |Lambda*_{t-1}|/(1+(t-1)lam)).
    Ordering and pairwise tests use the displays in exact arithmetic.
    """
    rep = R3Report(d)
    for lam in map(float, lams):
        cert = strong_dual(3, d, lam)
        sq = strong_quantities(3, d, lam)
        disp = r3_zc_display(d, lam)
        for t, (got, ct) in enumerate(zip(disp, cert.c), start=1):
            scale = sq.Z * (cert.Lambda + abs(cert.Lambda_at(t - 1)) / (1.0 + (t - 1) * lam))
            err = abs(got - sq.Z * ct) / scale
            rep.display_max_rel_err = max(rep.display_max_rel_err, err)
            if err > display_rtol:
                rep.passed = False
                rep.failures.append(("display", lam, t))
        # exact rational arithmetic: the pairwise margins shrink like (1+lam)^(1-d)
        x = Fraction(lam)
        c = r3_zc_display(d, x)  # common factor 1/Z dropped
        Q = tuple((1 + (t - 1) * x) ** d for t in (1, 2, 3))
        c1, c2, c3 = c
        if c1 > c2 > c3 > 0:
            om = min((c1 - c2) / c1, (c2 - c3) / c2, c3 / c1)
            rep.min_order_margin = min(rep.min_order_margin, float(om))
        else:
            rep.passed = False
            rep.failures.append(("order", lam))
        for i, j in ((2, 1), (3, 1), (3, 2)):
            lhs = c[i - 1] * (Q[i - 1] + Q[j - 1])
            rhs = 2 * c[j - 1] * Q[j - 1]
            rep.min_pair_margin = min(rep.min_pair_margin, float(1 - lhs / rhs))
            if not lhs < rhs:
                rep.passed = False
                rep.failures.append(("pair", lam, i, j))
    return rep


# ---------------------------------------------------------------------------
# asymptotic constant
# ---------------------------------------------------------------------------

def cs3_integrand(c: float) -> float:
    """(3e^{2c} - 1) / (3(1 - 3e^c + 3e^{3c})), rewritten in e^{-c} to avoid overflow."""
    x = math.exp(-c)
    return (3.0 * x - x ** 3) / (3.0 * (x ** 3 - 3.0 * x * x + 3.0))


def cs3_constant(tol: float = 1e-9) -> float:
    """Constant of the 1/d term in the integrated strong bound for r = 3."""
    return integrate_to_infinity(cs3_integrand, tol * math.log(2)) / math.log(2)
