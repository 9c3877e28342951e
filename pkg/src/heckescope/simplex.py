"""Dense two-phase simplex for small standard-form linear programs.

    minimize c @ x  subject to  A @ x = b,  x >= 0

The tableau carries B^-1 alongside B^-1 A so the leaving row can be chosen by
the lexicographic rule, which cannot cycle whatever the entering rule.  The
entering column is Dantzig's most negative reduced cost, or the lowest index
(Bland) when ``rule="bland"``.  The final basis is re-solved directly so x and
the duals carry no accumulated tableau error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LPIterationLimit(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    y: np.ndarray | None = None  # duals: A.T @ y <= c at optimum
    objective: float | None = None
    basis: np.ndarray | None = None
    iterations: int = 0


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])


def _entering(cost: np.ndarray, allowed: np.ndarray, tol: float, rule: str) -> int:
    cand = np.flatnonzero((cost < -tol) & allowed)
    if cand.size == 0:
        return -1
    if rule == "bland":
        return int(cand[0])
    return int(cand[np.argmin(cost[cand])])


def _leaving(T: np.ndarray, col: int, inv_cols: slice, tol: float) -> int:
    colv = T[:-1, col]
    rows = np.flatnonzero(colv > tol)
    if rows.size == 0:
        return -1
    keys = np.column_stack([T[rows, -1], T[rows, inv_cols]]) / colv[rows, None]
    for k in range(keys.shape[1]):
        col_k = keys[:, k]
        keep = col_k <= col_k.min() + tol * max(1.0, abs(col_k.min()))
        rows, keys = rows[keep], keys[keep]
        if rows.size == 1:
            break
    return int(rows[0])


def _run(T, basis, allowed, inv_cols, tol, max_iter, rule, it):
    while True:
        col = _entering(T[-1, :-1], allowed, tol, rule)
        if col < 0:
            return "optimal", it
        row = _leaving(T, col, inv_cols, tol)
        if row < 0:
            return "unbounded", it
        _pivot(T, row, col)
        basis[row] = col
        it += 1
        if it >= max_iter:
            raise LPIterationLimit(f"simplex did not terminate within {max_iter} pivots")


def _price(T: np.ndarray, c: np.ndarray, basis: np.ndarray, n: int) -> None:
    T[-1, :] = 0.0
    T[-1, :n] = c
    for r, j in enumerate(basis):
        T[-1] -= c[j] * T[r]


def _finish(c, A, b, basis, rows, flip, it) -> LPResult:
    B = A[np.ix_(rows, basis)]
    xB = np.linalg.solve(B, b[rows])
    x = np.zeros(A.shape[1])
    x[basis] = xB
    y = np.zeros(A.shape[0])
    y[rows] = np.linalg.solve(B.T, c[basis])
    y *= flip
    return LPResult("optimal", x, y, float(c @ x), basis, it)


def solve_standard(c, A, b, basis=None, tol: float = 1e-11, max_iter: int = 50_000,
                   rule: str = "dantzig") -> LPResult:
    """Solve min c@x, A@x = b, x >= 0.

    ``basis`` optionally names m columns forming a feasible starting basis,
    which skips phase 1.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    flip = np.where(b < 0, -1.0, 1.0)
    A *= flip[:, None]
    b *= flip
    inv_cols = slice(n, n + m)
    T = np.zeros((m + 1, n + m + 1))
    allowed = np.ones(n + m, dtype=bool)
    allowed[n:] = False
    it = 0

    if basis is not None:
        basis = np.array(basis, dtype=int)
        Binv = np.linalg.inv(A[:, basis])
        if (Binv @ b < -1e-9).any():
            raise ValueError("starting basis is not feasible")
        T[:m, :n] = Binv @ A
        T[:m, inv_cols] = Binv
        T[:m, -1] = Binv @ b
        T[:m, basis] = np.eye(m)
        rows = np.arange(m)
    else:
        # Phase 1 on [A | I | b], minimizing the sum of artificials.
        T[:m, :n] = A
        T[:m, inv_cols] = np.eye(m)
        T[:m, -1] = b
        T[-1, :n] = -A.sum(axis=0)
        T[-1, -1] = -b.sum()
        basis = np.arange(n, n + m)
        _, it = _run(T, basis, np.ones(n + m, dtype=bool), inv_cols, tol, max_iter, rule, it)
        if -T[-1, -1] > 1e-8 * max(1.0, np.abs(b).max(initial=0.0)):
            return LPResult("infeasible", iterations=it)
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] >= n:
                cols = np.flatnonzero(np.abs(T[r, :n]) > 1e-9)
                if cols.size:
                    _pivot(T, r, int(cols[0]))
                    basis[r] = cols[0]
                else:
                    keep[r] = False  # redundant equality
        rows = np.flatnonzero(keep)
        T = np.vstack([T[rows], T[-1:]])
        basis = basis[rows]

    _price(T, c, basis, n)
    status, it = _run(T, basis, allowed, inv_cols, tol, max_iter, rule, it)
    if status == "unbounded":
        return LPResult("unbounded", iterations=it)
    return _finish(c, A, b, basis, rows, flip, it)
