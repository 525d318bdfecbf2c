"""Small dense LP solver: maximize c.p subject to A p = b, p >= 0.

Two-phase tableau simplex with Bland's rule (lowest-index entering column,
lowest-index basic variable on ratio ties), so it always terminates and is
deterministic. Returns primal and dual vectors at the optimum.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9
GAP_TOL = 1e-8


class LPDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class DenseLP:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    column_labels: Optional[tuple] = None
    row_labels: Optional[tuple] = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        m, N = A.shape
        if c.shape[0] != N:
            raise LPDimensionError(f"objective has length {c.shape[0]}, A has {N} columns")
        if b.shape[0] != m:
            raise LPDimensionError(f"rhs has length {b.shape[0]}, A has {m} rows")
        if m > N:
            raise LPDimensionError(f"more rows ({m}) than columns ({N})")
        for name, arr in (("c", c), ("A", A), ("b", b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite entry in {name}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def to_csv(self) -> str:
        """Rows of [A | b] preceded by the objective row (rhs column empty)."""
        m, N = self.A.shape
        labels = self.column_labels or tuple(f"p{j}" for j in range(N))
        lines = ["row," + ",".join(str(l).replace(",", ";") for l in labels) + ",rhs"]
        lines.append("objective," + ",".join(repr(float(x)) for x in self.c) + ",")
        rlabels = self.row_labels or tuple(f"r{i}" for i in range(m))
        for i in range(m):
            lines.append(f"{rlabels[i]}," + ",".join(repr(float(x)) for x in self.A[i]) + f",{float(self.b[i])!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float
    primal: np.ndarray
    dual: np.ndarray
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass(frozen=True)
class DualCheck:
    feasible: bool
    worst_violation: float  # min over columns of (A^T y - c)_j
    column: int


def _pivot(T: np.ndarray, i: int, j: int) -> None:
    T[i] /= T[i, j]
    col = T[:, j].copy()
    col[i] = 0.0
    T -= np.outer(col, T[i])


def _run(T, basis, cost, allowed, pivot_tol, max_iter):
    """Maximize cost over the current tableau. Returns (status, iterations)."""
    it = 0
    while True:
        rc = cost[:-1] - cost[basis] @ T[:, :-1]
        candidates = np.nonzero((rc > pivot_tol) & allowed)[0]
        if candidates.size == 0:
            return "optimal", it
        j = int(candidates[0])
        col = T[:, j]
        rows = np.nonzero(col > pivot_tol)[0]
        if rows.size == 0:
            return "unbounded", it
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + pivot_tol * max(1.0, abs(best))]
        i = int(min(tied, key=lambda r: basis[r]))
        _pivot(T, i, j)
        basis[i] = j
        it += 1
        if it > max_iter:
            raise RuntimeError("simplex iteration limit reached")


def solve(
    lp: DenseLP,
    pivot_tol: float = PIVOT_TOL,
    feas_tol: float = FEAS_TOL,
    max_iter: int = 100_000,
) -> LPSolution:
    A, b, c = lp.A.copy(), lp.b.copy(), lp.c
    m, N = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b *= sign

    # phase 1: artificial basis, maximize -(sum of artificials)
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(N, N + m))
    basis = np.array(basis)
    cost1 = np.concatenate([np.zeros(N), -np.ones(m), [0.0]])
    allowed = np.ones(N + m, dtype=bool)
    _, it1 = _run(T, basis, cost1, allowed, pivot_tol, max_iter)
    infeas = float(T[basis >= N, -1].sum()) if np.any(basis >= N) else 0.0
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    if infeas > feas_tol * scale:
        return LPSolution("infeasible", float("nan"), np.full(N, np.nan), np.full(m, np.nan), it1)

    # drive remaining artificials out; rows that cannot pivot are redundant
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= N:
            nz = np.nonzero(np.abs(T[i, :N]) > pivot_tol)[0]
            if nz.size:
                _pivot(T, i, int(nz[0]))
                basis[i] = int(nz[0])
            else:
                keep[i] = False
    T = np.hstack([T[keep][:, :N], T[keep][:, -1:]])
    basis = basis[keep]

    cost2 = np.concatenate([c, [0.0]])
    status, it2 = _run(T, basis, cost2, np.ones(N, dtype=bool), pivot_tol, max_iter)
    if status == "unbounded":
        return LPSolution("unbounded", float("inf"), np.full(N, np.nan), np.full(m, np.nan), it1 + it2)

    x = np.zeros(N)
    x[basis] = T[:, -1]
    x[np.abs(x) < 1e-15] = 0.0
    y = np.zeros(m)
    if basis.size:
        B = A[keep][:, basis]
        y[keep] = np.linalg.solve(B.T, c[basis])
    y *= sign
    return LPSolution("optimal", float(c @ x), x, y, it1 + it2)


def check_dual_feasible(lp: DenseLP, dual, tol: float = 1e-10) -> DualCheck:
    """Verify A^T y >= c - tol column by column; report the most violated column."""
    y = np.asarray(dual, dtype=float).reshape(-1)
    if y.shape[0] != lp.A.shape[0]:
        raise LPDimensionError(f"dual has length {y.shape[0]}, LP has {lp.A.shape[0]} rows")
    slack = lp.A.T @ y - lp.c
    j = int(np.argmin(slack))
    worst = float(slack[j])
    return DualCheck(worst >= -tol, worst, j)
