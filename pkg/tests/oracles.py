"""Independent reference implementations used only by the tests.

Nothing here shares code with the package beyond the Hypergraph container:
counts come from a vectorised scan over all 2^n subsets, local-configuration
statistics from explicit small hypergraphs, LPs from scipy's HiGHS.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

from hyperocc.hypergraph import Hypergraph

MAX_SCAN_N = 22


def _valid_masks(H: Hypergraph, k: int) -> np.ndarray:
    if H.n > MAX_SCAN_N:
        raise ValueError(f"subset scan limited to n <= {MAX_SCAN_N}")
    masks = np.arange(1 << H.n, dtype=np.uint64)
    ok = np.ones(masks.shape, dtype=bool)
    for e in H.edges:
        em = np.uint64(sum(1 << v for v in e))
        ok &= np.bitwise_count(masks & em) < k
    return masks[ok]


def scan_poly(H: Hypergraph, k: int) -> list[int]:
    """Coefficients of the independence polynomial by brute force."""
    sizes = np.bitwise_count(_valid_masks(H, k)).astype(np.int64)
    return np.bincount(sizes, minlength=1).tolist()


def scan_count(H: Hypergraph, k: int) -> int:
    return int(_valid_masks(H, k).size)


def scan_occupancy(H: Hypergraph, k: int, lam) -> Fraction:
    """sum_I |I| lam^|I| / (n sum_I lam^|I|), one term per subset."""
    lam = Fraction(lam)
    num = den = Fraction(0)
    for m in _valid_masks(H, k).tolist():
        s = bin(m).count("1")
        w = lam ** s
        num += s * w
        den += w
    return num / (H.n * den)


def poly_occupancy(coeffs, n: int, lam) -> Fraction:
    lam = Fraction(lam)
    Z = sum(c * lam ** m for m, c in enumerate(coeffs))
    dZ = sum(m * c * lam ** m for m, c in enumerate(coeffs))
    return dZ / (n * Z)


# ---------------------------------------------------------------------------
# local configurations as explicit hypergraphs
# ---------------------------------------------------------------------------

def weak_local_oracle(r: int, d: int, j: int, k: int, lam) -> tuple[Fraction, Fraction]:
    """(Pr[v in I], E|I & N(v)| / (d(r-1))) on v + j intact r-edges + k free vertices, weak (k=r) sets."""
    lam = Fraction(lam)
    n = 1 + j * (r - 1) + k
    edges = [tuple([0] + list(range(1 + i * (r - 1), 1 + (i + 1) * (r - 1)))) for i in range(j)]
    Z = pv = en = Fraction(0)
    for mask in range(1 << n):
        if any(all(mask >> u & 1 for u in e) for e in edges):
            continue
        w = lam ** bin(mask).count("1")
        Z += w
        if mask & 1:
            pv += w
        en += bin(mask >> 1).count("1") * w
    return pv / Z, en / (Z * d * (r - 1))


def strong_local_partition(profile, lam) -> Fraction:
    """Partition function of v plus one edge of each listed size (strong sets)."""
    lam = Fraction(lam)
    edges = []
    nxt = 1
    for s, ds in enumerate(profile, start=1):
        for _ in range(ds):
            edges.append(tuple([0] + list(range(nxt, nxt + s - 1))))
            nxt += s - 1
    n = nxt
    Z = Fraction(0)
    for mask in range(1 << n):
        if any(bin(mask & sum(1 << u for u in e)).count("1") >= 2 for e in edges):
            continue
        Z += lam ** bin(mask).count("1")
    return Z


# ---------------------------------------------------------------------------
# LP and quadrature
# ---------------------------------------------------------------------------

def highs_max(c, A, b) -> float:
    from scipy.optimize import linprog

    res = linprog(-np.asarray(c), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert res.status == 0, res.message
    return -res.fun


def trapezoid(f, a: float, b: float, n: int) -> float:
    x = np.linspace(a, b, n + 1)
    y = np.array([f(t) for t in x])
    h = (b - a) / n
    return float(h * (y.sum() - 0.5 * (y[0] + y[-1])))


def v_weights_exact(r: int, d: int, lam) -> list[Fraction]:
    lam = Fraction(lam)
    out = []
    for t in range(1, r + 1):
        prod = Fraction(1)
        for i in range(t, r):
            prod *= (1 + i * lam) ** (d - 1) - 1
        out.append(comb(r - 1, t - 1) * prod)
    return out


def alpha_strong_exact(r: int, d: int, lam) -> Fraction:
    lam = Fraction(lam)
    v = v_weights_exact(r, d, lam)
    P = [(1 + (t - 1) * lam) ** d + lam for t in range(1, r + 1)]
    return lam * sum(v) / sum(p * w for p, w in zip(P, v))


def alpha_weak_exact(r: int, d: int, lam) -> Fraction:
    """Closed form over the rationals, straight from the displayed expression."""
    lam = Fraction(lam)
    mu = 1 + lam
    s = r - 1
    nu = mu ** s - lam ** s
    A = mu * lam ** r - lam * mu ** r
    B = mu ** 2 * lam ** r + lam * (r - mu - 1) * mu ** r
    C = lam * (mu * lam ** r + (r - mu) * mu ** r)
    num = (r - 1) * A * mu ** (d * s) + B * nu ** d
    den = mu * (r * A * mu ** (d * s) + C * nu ** d)
    return lam * num / den
