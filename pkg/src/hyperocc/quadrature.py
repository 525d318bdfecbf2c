"""Adaptive Simpson quadrature with Richardson correction."""
from __future__ import annotations

import math
from typing import Callable, Sequence


class QuadratureError(ArithmeticError):
    pass


def _checked(f: Callable[[float], float]) -> Callable[[float], float]:
    def g(x: float) -> float:
        y = f(x)
        if not math.isfinite(y):
            raise QuadratureError(f"integrand is not finite at x = {x!r} (value {y!r})")
        return y
    return g


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 50) -> float:
    """Integrate f over [a, b] to absolute tolerance ``tol``."""
    if b == a:
        return 0.0
    f = _checked(f)
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    # explicit stack instead of recursion
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
            stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))
    return total


def integrate_pieces(f: Callable[[float], float], points: Sequence[float], tol: float) -> float:
    """Adaptive Simpson over consecutive breakpoints, splitting tol evenly."""
    pts = sorted(set(points))
    n = len(pts) - 1
    if n < 1:
        return 0.0
    return math.fsum(adaptive_simpson(f, pts[i], pts[i + 1], tol / n) for i in range(n))


def tail_cutoff(f: Callable[[float], float], threshold: float, start: float = 1.0, limit: float = 1e6) -> float:
    """Smallest doubling of ``start`` past which f stays below threshold at probes.

    Assumes f is eventually decreasing.
    """
    x = start
    while x < limit:
        if abs(f(x)) < threshold and abs(f(2 * x)) < threshold:
            return x
        x *= 2.0
    raise QuadratureError(f"integrand does not decay below {threshold} before x = {limit}")


def integrate_to_infinity(f: Callable[[float], float], tol: float) -> float:
    """Integral of a decaying integrand over [0, inf), truncated where f < tol/1000."""
    cut = tail_cutoff(f, tol * 1e-3)
    pts = [0.0] + [cut * 2.0 ** (-i) for i in range(12, -1, -1)]
    return integrate_pieces(f, pts, tol)
