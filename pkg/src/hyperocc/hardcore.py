"""Exact k-independent set enumeration and the hard-core model.

A set I is k-independent when |I & e| < k for every edge e. Enumeration is
output-sensitive backtracking: partial sets are extended by vertices larger
than their current maximum, with per-edge occupancy counters maintained
incrementally, so the work is proportional to the number of sets found.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Sequence, Union

import numpy as np

from .hypergraph import Hypergraph

DEFAULT_BUDGET = 10 ** 8

Fugacity = Union[int, float, Fraction, str]


class EnumerationBudgetExceeded(RuntimeError):
    """Too many independent sets to enumerate; use the Glauber sampler instead."""


@dataclass(frozen=True)
class IndependencePolynomial:
    k: int
    n: int
    coeffs: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam: Fugacity):
        lam = as_fugacity(lam)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    steps: int
    burnin: int
    seed: int


def as_fugacity(lam: Fugacity):
    """Parse a fugacity; rationals (and "p/q" strings) stay exact."""
    if isinstance(lam, str):
        lam = Fraction(lam.strip())
    if isinstance(lam, bool):
        raise TypeError("fugacity must be numeric")
    if isinstance(lam, Rational):
        lam = Fraction(lam)
    elif isinstance(lam, float):
        if not math.isfinite(lam):
            raise ValueError(f"fugacity must be finite, got {lam}")
    else:
        lam = float(lam)
    if lam < 0:
        raise ValueError(f"fugacity must be >= 0, got {lam}")
    return lam


def _check_level(H: Hypergraph, k: int) -> None:
    if k < 2:
        raise ValueError(f"independence level k must be >= 2, got {k}")
    if H.edges and k > max(len(e) for e in H.edges):
        raise ValueError(f"k = {k} exceeds the largest edge size {max(len(e) for e in H.edges)}")


class _Enumerator:
    """Shared backtracking state for counting and listing."""

    def __init__(self, H: Hypergraph, k: int):
        _check_level(H, k)
        self.n = H.n
        self.k = k
        # only edges with at least k vertices can ever be violated
        live = [e for e in H.edges if len(e) >= k]
        self.edge_mask = [sum(1 << v for v in e) for e in live]
        inc: list[list[int]] = [[] for _ in range(H.n)]
        for i, e in enumerate(live):
            for v in e:
                inc[v].append(i)
        self.inc = inc
        self.cnt = [0] * len(live)

    def _add(self, w: int, forbidden: int) -> int:
        cnt, km1 = self.cnt, self.k - 1
        for e in self.inc[w]:
            c = cnt[e] + 1
            cnt[e] = c
            if c == km1:
                forbidden |= self.edge_mask[e]
        return forbidden

    def _remove(self, w: int) -> None:
        cnt = self.cnt
        for e in self.inc[w]:
            cnt[e] -= 1

    def sizes(self, budget: int) -> list[int]:
        """coeffs[m] = number of k-independent sets of size m."""
        n = self.n
        coeffs = [0] * (n + 1)
        coeffs[0] = 1
        total = [1]
        full = (1 << n) - 1
        limit = sys.getrecursionlimit()
        if n + 50 > limit:
            sys.setrecursionlimit(n + 100)

        def extend(cands: int, size: int) -> None:
            # every w in cands extends the current set to a new independent set
            nc = cands.bit_count()
            coeffs[size + 1] += nc
            total[0] += nc
            if total[0] > budget:
                raise EnumerationBudgetExceeded(
                    f"more than {budget} independent sets; use the Glauber sampler (glauber_estimate)"
                )
            rest = cands
            while rest:
                low = rest & -rest
                w = low.bit_length() - 1
                rest ^= low
                if not rest:
                    break
                forb = self._add(w, 0)
                child = rest & ~forb
                if child:
                    extend(child, size + 1)
                self._remove(w)

        if n:
            extend(full, 0)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return coeffs

    def iter_sets(self) -> Iterator[tuple[int, ...]]:
        stack: list[int] = []

        def walk(cands: int):
            rest = cands
            while rest:
                low = rest & -rest
                w = low.bit_length() - 1
                rest ^= low
                stack.append(w)
                yield tuple(stack)
                forb = self._add(w, 0)
                child = rest & ~forb
                if child:
                    yield from walk(child)
                self._remove(w)
                stack.pop()

        yield ()
        if self.n:
            yield from walk((1 << self.n) - 1)


def independence_polynomial(H: Hypergraph, k: int, budget: int = DEFAULT_BUDGET) -> IndependencePolynomial:
    coeffs = _Enumerator(H, k).sizes(budget)
    return IndependencePolynomial(k, H.n, tuple(coeffs))


def count(H: Hypergraph, k: int, budget: int = DEFAULT_BUDGET) -> int:
    return sum(_Enumerator(H, k).sizes(budget))


def iter_independent_sets(H: Hypergraph, k: int) -> Iterator[tuple[int, ...]]:
    """Yield every k-independent set (as a sorted tuple), empty set first."""
    return _Enumerator(H, k).iter_sets()


def is_k_independent(H: Hypergraph, k: int, I: Sequence[int]) -> bool:
    s = set(I)
    return all(len(s.intersection(e)) < k for e in H.edges)


def occupancy_exact(P: IndependencePolynomial, lam: Fugacity):
    """Occupancy fraction (lam/n) Z'(lam)/Z(lam).

    Exact ``Fraction`` for rational input. Float input is converted to its
    exact binary rational, evaluated exactly, and rounded once to float.
    """
    lam = as_fugacity(lam)
    if P.n == 0:
        raise ValueError("occupancy fraction undefined for the empty hypergraph")
    exact = Fraction(lam)
    num = Fraction(0)
    den = Fraction(0)
    power = Fraction(1)
    for m, c in enumerate(P.coeffs):
        den += c * power
        num += m * c * power
        power *= exact
    val = num / (P.n * den)
    return val if isinstance(lam, Fraction) else float(val)


def occupancy_direct(H: Hypergraph, k: int, lam: Fugacity) -> Fraction:
    """Sum of |I| lam^|I| over all sets, divided by n Z, with one term per set."""
    lam = Fraction(as_fugacity(lam))
    num = Fraction(0)
    den = Fraction(0)
    for I in iter_independent_sets(H, k):
        w = lam ** len(I)
        den += w
        num += len(I) * w
    return num / (H.n * den)


def glauber_estimate(
    H: Hypergraph,
    k: int,
    lam: float,
    steps: int,
    burnin: int,
    seed: int = 0,
    batches: int = 50,
) -> McEstimate:
    """Heat-bath Glauber dynamics for the hard-core model on k-independent sets.

    Each step picks a uniform vertex v; with probability lam/(1+lam) it tries
    to occupy v (succeeding only if the result stays k-independent),
    otherwise v is vacated. The estimate is the time average of |I|/n after
    burn-in, with a batch-means standard error.
    """
    _check_level(H, k)
    lam = float(as_fugacity(lam))
    if steps <= 0 or burnin <= 0:
        raise ValueError("steps and burnin must be positive")
    if H.n == 0:
        raise ValueError("empty hypergraph")
    n = H.n
    live = [e for e in H.edges if len(e) >= k]
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, e in enumerate(live):
        for v in e:
            inc[v].append(i)
    cnt = [0] * len(live)
    occ = [False] * n
    km1 = k - 1
    p_in = lam / (1.0 + lam)

    rng = np.random.default_rng(seed)
    total = burnin + steps
    sizes = np.empty(steps, dtype=np.int64)
    size = 0
    chunk = 1 << 16
    t = 0
    while t < total:
        m = min(chunk, total - t)
        vs = rng.integers(0, n, size=m).tolist()
        us = rng.random(m).tolist()
        for v, u in zip(vs, us):
            if u < p_in:
                if not occ[v]:
                    edges = inc[v]
                    if all(cnt[e] < km1 for e in edges):
                        for e in edges:
                            cnt[e] += 1
                            assert cnt[e] < k
                        occ[v] = True
                        size += 1
            elif occ[v]:
                for e in inc[v]:
                    cnt[e] -= 1
                occ[v] = False
                size -= 1
            if t >= burnin:
                sizes[t - burnin] = size
            t += 1

    frac = sizes / n
    mean = float(frac.mean())
    nb = max(2, min(batches, steps))
    usable = (steps // nb) * nb
    bmeans = frac[:usable].reshape(nb, -1).mean(axis=1)
    stderr = float(bmeans.std(ddof=1) / math.sqrt(nb))
    return McEstimate(mean, stderr, steps, burnin, seed)
