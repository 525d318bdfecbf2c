"""Explicit extremal hypergraph families and their predicted counts.

Part ``i`` of a multipartite construction occupies the ids
``[i*block, (i+1)*block)`` where ``block = d*d`` for the tripartite
hypergraph K and ``block = d`` otherwise. Residues are ``0..d-1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Optional

from .hypergraph import Hypergraph


class Family(str, enum.Enum):
    KDD = "KDD"
    KRRT = "KRRT"
    TRIPARTITE_K = "TRIPARTITE_K"
    MOD3 = "MOD3"
    H4 = "H4"
    HRD = "HRD"

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip().upper().replace("-", "_")
        aliases = {"MODGRAPH": "MOD3", "MOD": "MOD3", "TRIPARTITE": "TRIPARTITE_K", "K": "TRIPARTITE_K"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown family {name!r}; choose from {[f.value for f in cls]}") from None


class NoFormulaError(ValueError):
    """No closed-form count is stated for the requested (family, k) pair."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    d: int
    r: Optional[int] = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        d, r = self.d, self.r
        if d < 1:
            raise ValueError(f"{fam.value}: d must be >= 1, got {d}")
        fixed = {Family.KDD: 2, Family.MOD3: 3, Family.TRIPARTITE_K: 3, Family.H4: 4}
        if fam in fixed:
            if r is not None and r != fixed[fam]:
                raise ValueError(f"{fam.value} has r = {fixed[fam]}, got r = {r}")
            object.__setattr__(self, "r", fixed[fam])
        elif r is None:
            raise ValueError(f"{fam.value} requires r")
        if fam is Family.H4 and d % 2 == 0:
            raise ValueError(f"H4 requires odd d, got {d}")
        if fam is Family.HRD:
            if r < 3:
                raise ValueError(f"HRD requires r >= 3, got {r}")
            if not (_is_prime(d) and d > r):
                raise ValueError(f"HRD requires prime d > r; got d = {d}, r = {r} (would not be linear)")
        if fam is Family.KRRT:
            if r < 2:
                raise ValueError(f"KRRT requires r >= 2, got {r}")
            if d != 2:
                raise ValueError(f"KRRT is 2-regular; d must be 2, got {d}")

    @property
    def n(self) -> int:
        if self.family is Family.TRIPARTITE_K:
            return 3 * self.d * self.d
        if self.family is Family.KRRT:
            return self.r * self.r
        return self.r * self.d

    def label(self) -> str:
        if self.family in (Family.HRD, Family.KRRT):
            return f"{self.family.value}(r={self.r},d={self.d})"
        return f"{self.family.value}(d={self.d})"


def _affine_edges(r: int, d: int) -> list[tuple[int, ...]]:
    # x_i = x_1 + (i-2) x_2 (mod d) for i >= 3
    edges = []
    for x1 in range(d):
        for x2 in range(d):
            xs = [x1, x2] + [(x1 + (i - 2) * x2) % d for i in range(3, r + 1)]
            edges.append(tuple(p * d + x for p, x in enumerate(xs)))
    return edges


def build(spec: FamilySpec) -> Hypergraph:
    fam, d, r = spec.family, spec.d, spec.r
    if fam is Family.KDD:
        edges = [(a, d + b) for a in range(d) for b in range(d)]
    elif fam is Family.KRRT:
        # grid cell (a, b) -> a*r + b; an edge per row and per column
        edges = [tuple(a * r + b for b in range(r)) for a in range(r)]
        edges += [tuple(a * r + b for a in range(r)) for b in range(r)]
    elif fam is Family.TRIPARTITE_K:
        blk = d * d
        edges = [
            (k * d + i, blk + k * d + j, 2 * blk + i * d + j)
            for k in range(d) for i in range(d) for j in range(d)
        ]
    elif fam is Family.MOD3:
        edges = [(x, d + y, 2 * d + (-x - y) % d) for x in range(d) for y in range(d)]
    elif fam in (Family.H4, Family.HRD):
        edges = _affine_edges(r, d)
    else:  # pragma: no cover
        raise ValueError(fam)
    meta = {"family": fam.value, "r": r, "d": d}
    return Hypergraph.from_edges(spec.n, edges, **meta)


@dataclass(frozen=True)
class PredictedCount:
    value: int
    kind: str  # "exact" or "lower-bound"


def predicted_count(spec: FamilySpec, k: int) -> PredictedCount:
    """Closed-form count of k-independent sets, as stated for the family."""
    fam, d, r = spec.family, spec.d, spec.r
    if fam is Family.KDD and k == 2:
        return PredictedCount(2 ** (d + 1) - 1, "exact")
    if fam is Family.MOD3:
        if k == 2:
            return PredictedCount(3 * 2 ** d - 2, "exact")
        if k == 3:
            return PredictedCount(3 * 2 ** (2 * d) - 3 * 2 ** d + 1, "lower-bound")
    if fam is Family.H4:
        if k == 2:
            return PredictedCount(4 * 2 ** d - 3, "exact")
        if k == 4:
            # labelled exact, but brute force gives more sets (2550 vs 1695 at d = 3)
            return PredictedCount(4 * 2 ** (3 * d) - 6 * 2 ** (2 * d) + 4 * 2 ** d - 1, "exact")
    if fam is Family.HRD:
        if k == 2:
            return PredictedCount(r * 2 ** d - (r - 1), "exact")
        if k == r:
            return PredictedCount(r * 2 ** ((r - 1) * d) - comb(r, 2) * 2 ** ((r - 2) * d), "lower-bound")
    if fam is Family.TRIPARTITE_K and k == 2:
        return PredictedCount((2 ** (d + 1) - 1) ** d, "lower-bound")
    raise NoFormulaError(f"no count formula for {spec.label()} at k = {k}")
