"""Occupancy bound for weak (r-)independent sets in cross-edge-free hypergraphs.

Around a vertex v of an r-uniform, d-regular, linear, cross-edge-free
hypergraph, the local configuration is described by two integers: j, the
number of intact size-r edges through v, and k, the number of neighbours left
isolated after their edge to v was dropped (0 <= k <= (d - j)(r - 2)).
Throughout, mu = 1 + lam and s = r - 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .lp import DenseLP
from .quadrature import integrate_to_infinity

DUAL_TOL = 1e-10


def _check(r: int, d: int, lam: float) -> None:
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError(f"lambda must be a positive finite number, got {lam}")


def _pow(x: float, e: float) -> float:
    try:
        return math.pow(x, e)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class WeakConfig:
    j: int
    k: int

    def validate(self, r: int, d: int) -> None:
        if not 0 <= self.j <= d:
            raise ValueError(f"j must lie in [0, {d}], got {self.j}")
        kmax = (d - self.j) * (r - 2)
        if not 0 <= self.k <= kmax:
            raise ValueError(f"k must lie in [0, {kmax}] for j = {self.j}, got {self.k}")


def weak_configs(r: int, d: int) -> list[WeakConfig]:
    return [WeakConfig(j, k) for j in range(d + 1) for k in range((d - j) * (r - 2) + 1)]


@dataclass(frozen=True)
class WeakLocalStats:
    Zminus: float
    Zplus: float
    alpha_v: float
    alpha_N: float


def _occupied_ratio(r: int, lam: float, j: int) -> float:
    """Z_j^+ / Z_j^- = (1 - (lam/mu)^s)^j, computed without forming either."""
    mu = 1.0 + lam
    return math.exp(j * math.log1p(-((lam / mu) ** (r - 1))))


def _alpha_v(r: int, lam: float, j: int) -> float:
    x = _occupied_ratio(r, lam, j)
    return lam * x / (1.0 + lam * x)


def _alpha_N(r: int, d: int, lam: float, j: int, k: int, alpha_v: float) -> float:
    mu = 1.0 + lam
    s = r - 1
    t = (lam / mu) ** s
    bracket = k + s * j - s * j * (alpha_v / lam) * (t / (1.0 - t))
    return lam / (mu * d * s) * bracket


def local_stats(r: int, d: int, lam: float, cfg: WeakConfig) -> WeakLocalStats:
    _check(r, d, lam)
    cfg.validate(r, d)
    mu = 1.0 + lam
    s = r - 1
    zm = _pow(mu, s * cfg.j)
    zp = _pow(mu ** s - lam ** s, cfg.j)
    av = _alpha_v(r, lam, cfg.j)
    aN = _alpha_N(r, d, lam, cfg.j, cfg.k, av)
    return WeakLocalStats(zm, zp, av, aN)


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

def _coefficients(r: int, lam: float):
    mu = 1.0 + lam
    A = mu * lam ** r - lam * mu ** r
    B = mu * mu * lam ** r + lam * (r - mu - 1.0) * mu ** r
    C = lam * (mu * lam ** r + (r - mu) * mu ** r)
    return mu, A, B, C


def _alpha_over_lambda_direct(r: int, d: int, lam: float) -> float:
    mu, A, B, C = _coefficients(r, lam)
    big = mu ** (d * (r - 1))
    nud = (mu ** (r - 1) - lam ** (r - 1)) ** d
    num = (r - 1) * A * big + B * nud
    den = mu * (r * A * big + C * nud)
    return num / den


def _shrink(r: int, d: int, lam: float) -> float:
    # ((mu^s - lam^s) / mu^s)^d
    mu = 1.0 + lam
    return math.exp(d * math.log1p(-((lam / mu) ** (r - 1))))


def _alpha_over_lambda_log(r: int, d: int, lam: float) -> float:
    mu, A, B, C = _coefficients(r, lam)
    rho = _shrink(r, d, lam)
    return ((r - 1) * A + B * rho) / (mu * (r * A + C * rho))


def alpha_weak_over_lambda(r: int, d: int, lam: float, method: str = "auto") -> float:
    """alpha_w(r, d, lam) / lam; the limit 1 is returned at lam = 0."""
    if lam == 0:
        return 1.0
    _check(r, d, lam)
    if method == "auto":
        safe = d * (r - 1) * math.log1p(lam) < 600.0
        method = "direct" if d <= 200 and safe else "log"
    if method == "direct":
        return _alpha_over_lambda_direct(r, d, lam)
    if method == "log":
        return _alpha_over_lambda_log(r, d, lam)
    raise ValueError(f"unknown method {method!r}")


def alpha_weak(r: int, d: int, lam: float, method: str = "auto") -> float:
    """Closed-form optimum of the weak occupancy LP (an occupancy fraction)."""
    if r < 3:
        raise ValueError(f"alpha_weak requires r >= 3, got {r}")
    return lam * alpha_weak_over_lambda(r, d, lam, method)


def weak_second_order(r: int, d: int, lam: float) -> float:
    """alpha_w/lam - (r-1)/(r mu), from its own closed form."""
    _check(r, d, lam)
    mu, A, _, C = _coefficients(r, lam)
    rho = _shrink(r, d, lam)
    return (lam ** r * (lam + r) - lam * mu ** r) * rho / (r * (r * A + C * rho))


# ---------------------------------------------------------------------------
# LP, candidate primal and dual certificate
# ---------------------------------------------------------------------------

def build_weak_lp(r: int, d: int, lam: float) -> DenseLP:
    _check(r, d, lam)
    cfgs = weak_configs(r, d)
    av = np.array([_alpha_v(r, lam, c.j) for c in cfgs])
    aN = np.array([_alpha_N(r, d, lam, c.j, c.k, a) for c, a in zip(cfgs, av)])
    A = np.vstack([av - aN, np.ones(len(cfgs))])
    # objective scaled by 1/lam so the optimum is alpha*/lam, as for the strong LP
    return DenseLP(
        av / lam, A, np.array([0.0, 1.0]),
        column_labels=tuple(f"(j={c.j};k={c.k})" for c in cfgs),
        row_labels=("consistency", "normalization"),
    )


@dataclass(frozen=True)
class CandidatePrimal:
    p_d0: float
    alpha: float


def candidate_primal(r: int, d: int, lam: float) -> CandidatePrimal:
    """Two-point solution supported on (d, 0) and (0, (r-2)d)."""
    _check(r, d, lam)
    a0 = _alpha_v(r, lam, 0)
    n0 = _alpha_N(r, d, lam, 0, (r - 2) * d, a0)
    ad = _alpha_v(r, lam, d)
    nd = _alpha_N(r, d, lam, d, 0, ad)
    p = (a0 - n0) / (a0 - n0 - ad + nd)
    return CandidatePrimal(p, p * ad + (1.0 - p) * a0)


@dataclass(frozen=True)
class WeakDualCertificate:
    Lambda_p: float
    Lambda_c: float
    lam: float

    def as_vector(self) -> np.ndarray:
        """Dual vector for build_weak_lp (rows: consistency, normalization)."""
        return np.array([self.Lambda_c, self.Lambda_p]) / self.lam


@dataclass(frozen=True)
class WeakCertificateReport:
    certificate: WeakDualCertificate
    p_d0: float
    worst_slack: float
    worst_config: WeakConfig
    support_slacks: dict
    feasible: bool


def weak_dual_certificate(r: int, d: int, lam: float, tol: float = DUAL_TOL) -> WeakCertificateReport:
    cand = candidate_primal(r, d, lam)
    mu = 1.0 + lam
    Lp = cand.alpha
    Lc = (r - 1) * (1.0 - mu / lam * Lp)
    cert = WeakDualCertificate(Lp, Lc, lam)

    worst, worst_cfg = math.inf, None
    slacks = {}
    for cfg in weak_configs(r, d):
        av = _alpha_v(r, lam, cfg.j)
        aN = _alpha_N(r, d, lam, cfg.j, cfg.k, av)
        sl = Lp + (av - aN) * Lc - av
        slacks[(cfg.j, cfg.k)] = sl
        if sl < worst:
            worst, worst_cfg = sl, cfg
    support = {(d, 0): slacks[(d, 0)], (0, (r - 2) * d): slacks[(0, (r - 2) * d)]}
    return WeakCertificateReport(cert, cand.p_d0, worst, worst_cfg, support, worst >= -tol)


# ---------------------------------------------------------------------------
# monotonicity diagnostics behind dual feasibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeakDualDiagnostics:
    nu: float
    gamma: float
    rho: float
    sigma: float
    # B_j, C_j and g(j) are scaled by mu^{-js} to avoid overflow; g is scale free
    B: tuple
    C: tuple
    g: tuple
    f: tuple


def _f_direct(r: int, d: int, lam: float, j: int) -> float:
    mu = 1.0 + lam
    s = r - 1
    k = (d - j) * (s - 1)
    aj = _alpha_v(r, lam, j) / lam
    X = lam ** s / (mu ** s - lam ** s)
    top = k + s * j - s * j * aj * X - (s - 1) * mu * d * aj
    bot = d + k + s * j - s * j * aj * X - s * mu * d * aj
    return top / (mu * bot)


def weak_diagnostics(r: int, d: int, lam: float) -> WeakDualDiagnostics:
    _check(r, d, lam)
    if r < 3:
        raise ValueError("diagnostics require r >= 3")
    mu = 1.0 + lam
    s = r - 1
    rho = mu ** s
    sigma = lam ** s
    nu = rho - sigma
    gamma = rho - lam ** (s - 1) * (lam + s)
    B, C, g, f = [], [], [], []
    log_ratio = math.log1p(-sigma / rho)
    for j in range(d + 1):
        Bj = -math.expm1(j * log_ratio)
        Cj = nu + lam * gamma * math.exp(j * log_ratio)
        B.append(Bj)
        C.append(Cj)
        if j == 0:
            # 0/0: the j = 0 constraint is one of the two tight ones
            g.append(math.nan)
            f.append(math.nan)
            continue
        gj = j * Cj / Bj
        g.append(gj)
        f.append((1.0 - d * nu / (gj + s * d * nu)) / mu)
    return WeakDualDiagnostics(nu, gamma, rho, sigma, tuple(B), tuple(C), tuple(g), tuple(f))


@dataclass
class MonotonicityReport:
    r: int
    d: int
    passed: bool = True
    worst_margin: float = math.inf  # min over (lam, j) of (g(d) - g(j)) / |g(d)|
    worst_at: Optional[tuple] = None
    failures: list = field(default_factory=list)


def g_monotonicity_check(r: int, d: int, lams: Iterable[float], rtol: float = 1e-12) -> MonotonicityReport:
    """Check g(j) <= g(d) for 0 < j <= d at each lam, plus the auxiliary identities."""
    if r < 3 or d < 2:
        raise ValueError("g monotonicity check needs r >= 3 and d >= 2")
    rep = MonotonicityReport(r, d)
    for lam in lams:
        D = weak_diagnostics(r, d, lam)
        if abs((D.rho - D.nu) - D.sigma) > 1e-12 * D.rho or D.rho < D.gamma:
            rep.passed = False
            rep.failures.append(("aux", lam))
        gd = D.g[d]
        for j in range(1, d + 1):
            margin = (gd - D.g[j]) / abs(gd)
            if margin < rep.worst_margin:
                rep.worst_margin, rep.worst_at = margin, (lam, j)
            if margin < -rtol:
                rep.passed = False
                rep.failures.append(("g", lam, j))
    return rep


# ---------------------------------------------------------------------------
# asymptotic constant
# ---------------------------------------------------------------------------

def cw_integrand(r: int, c: float) -> float:
    x = c ** (r - 1)
    if x > 700.0:
        return 0.0
    return 1.0 / (r + r * r * math.expm1(x))


def cw_constant(r: int, tol: float = 1e-10) -> float:
    """Constant of the d^{-1/(r-1)} term in the integrated weak bound."""
    if r < 3:
        raise ValueError(f"r must be >= 3, got {r}")
    return integrate_to_infinity(lambda c: cw_integrand(r, c), tol * math.log(2)) / math.log(2)
