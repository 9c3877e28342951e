"""Sym^M minorants of interval indicators.

Find b_0, ..., b_M maximizing b_0 subject to

    sum_n b_n U_n(t) <= 1_I(t)   for every t in [-1, 1].

The semi-infinite program is solved by exchange: a finite LP on a point set,
then the most violated points of the continuous constraint are added and the
LP is solved again.  The finite LP is handled through its dual,

    minimize sum_i 1_I(t_i) w_i   s.t.  sum_i w_i U_n(t_i) = [n == 0],  w >= 0,

which is already in standard form; the minorant coefficients are its duals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .chebyshev import IntervalUnion, u_matrix, u_series
from .simplex import solve_standard


class MinorizationError(RuntimeError):
    """The LP could not be solved (not the same as an infeasible target)."""


@dataclass(frozen=True)
class MinorizeOptions:
    nodes: int = 512
    refine: int = 100_000
    endpoint_offset: float = 1e-6
    violation_tol: float = 1e-10
    max_rounds: int = 100
    infeasible_tol: float = 1e-9


@dataclass(frozen=True)
class MinorizationCert:
    target: IntervalUnion
    M: int
    b: tuple[float, ...]
    margin: float
    grid_size: int

    @property
    def b0(self) -> float:
        return self.b[0]

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "M": self.M,
            "b": list(self.b),
            "margin": self.margin,
            "grid_size": self.grid_size,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "MinorizationCert":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            IntervalUnion(tuple(tuple(c) for c in data["target"])),
            int(data["M"]),
            tuple(float(v) for v in data["b"]),
            float(data["margin"]),
            int(data["grid_size"]),
        )


@dataclass(frozen=True)
class Infeasible:
    """Optimal b_0 is not positive: the target cannot be Sym^M-minorized."""

    target: IntervalUnion
    M: int
    b0: float
    rounds: int

    def __bool__(self) -> bool:
        return False


def _pieces(I: IntervalUnion) -> list[tuple[float, float]]:
    """Split [-1, 1] at the jumps of 1_I."""
    cuts = sorted({-1.0, 1.0, *I.jumps()})
    return list(zip(cuts[:-1], cuts[1:]))


def _levels(I: IntervalUnion, t: np.ndarray) -> np.ndarray:
    """Right-hand side of the constraint at t.

    A continuous minorant must sit below 0 at every jump as well, since the
    jump is a limit point of the complement.
    """
    h = I.indicator(t)
    jumps = I.jumps()
    if jumps:
        h[np.isin(t, jumps)] = 0.0
    return h


def _initial_points(I: IntervalUnion, M: int, opts: MinorizeOptions) -> np.ndarray:
    j = np.arange(1, opts.nodes + 1)
    pts = [np.cos((2 * j - 1) * np.pi / (2 * opts.nodes)), [-1.0, 1.0], gauss_nodes(M)]
    for e in I.endpoints():
        pts.append([e, e - opts.endpoint_offset, e + opts.endpoint_offset])
    pts = np.clip(np.concatenate(pts), -1.0, 1.0)
    return np.unique(pts)


def _refine_grid(I: IntervalUnion, size: int) -> np.ndarray:
    return np.unique(np.concatenate([np.linspace(-1.0, 1.0, size), I.endpoints()]))


def gauss_nodes(M: int) -> np.ndarray:
    """Zeros of U_(M+1); with positive weights they integrate U_0..U_M exactly
    against the Sato-Tate measure, so they give a feasible starting basis."""
    j = np.arange(1, M + 2)
    return np.cos(j * np.pi / (M + 2))


def _solve_finite(points: np.ndarray, I: IntervalUnion, M: int,
                  start: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    U = u_matrix(M, points)
    rhs = np.zeros(M + 1)
    rhs[0] = 1.0
    basis = np.searchsorted(points, start)
    res = solve_standard(_levels(I, points), U.T, rhs, basis=basis)
    if res.status != "optimal":
        raise MinorizationError(f"finite LP returned {res.status}")
    return res.y, points[res.basis]


def _local_peak(b: np.ndarray, a: float, c: float) -> tuple[float, float]:
    res = minimize_scalar(lambda s: -float(u_series(b, np.array([s]))[0]),
                          bounds=(a, c), method="bounded", options={"xatol": 1e-13})
    return float(res.x), float(-res.fun)


def _worst_points(b: np.ndarray, I: IntervalUnion, grid: np.ndarray,
                  near: float = 1e-4) -> tuple[float, list[float]]:
    """Largest violation of the constraint and the locally maximized near-active points."""
    excess = u_series(b, grid) - _levels(I, grid)
    worst = float(excess.max())
    found = []
    for lo, hi in _pieces(I):
        idx = np.flatnonzero((grid > lo) & (grid < hi))
        if idx.size == 0:
            continue
        level = 1.0 if I.contains((lo + hi) / 2) else 0.0
        e = excess[idx]
        padded = np.concatenate([[-np.inf], e, [-np.inf]])
        peaks = np.flatnonzero((e >= padded[:-2]) & (e >= padded[2:]) & (e > -near))
        # a minorant of degree M has at most M local maxima per piece
        peaks = peaks[np.argsort(-e[peaks], kind="stable")[: b.size + 1]]
        for i in peaks:
            k = idx[i]
            a = max(lo, grid[k - 1])
            c = min(hi, grid[k + 1])
            t, val = _local_peak(b, a, c)
            if val - level < excess[k]:
                t, val = float(grid[k]), excess[k] + level
            worst = max(worst, val - level)
            if val - level > 0:
                found.append(t)
    return worst, found


def minorize(I: IntervalUnion, M: int, opts: MinorizeOptions | None = None):
    """Best Sym^M minorant of 1_I, as a :class:`MinorizationCert`, or :class:`Infeasible`."""
    if M < 0:
        raise ValueError("degree must be non-negative")
    opts = opts or MinorizeOptions()
    points = _initial_points(I, M, opts)
    grid = _refine_grid(I, opts.refine)
    b, active = _solve_finite(points, I, M, gauss_nodes(M))
    rounds = 0
    for rounds in range(1, opts.max_rounds + 1):
        worst, new = _worst_points(b, I, grid)
        if worst <= opts.violation_tol or not new:
            break
        points = np.unique(np.concatenate([points, new]))
        b, active = _solve_finite(points, I, M, active)
    worst, _ = _worst_points(b, I, grid)
    b = b.copy()
    # U_0 = 1: lowering b_0 by the residual violation restores feasibility on the grid
    b[0] -= max(worst, 0.0)
    if b[0] <= opts.infeasible_tol:
        return Infeasible(I, M, float(b[0]), rounds)
    margin = float((I.indicator(grid) - u_series(b, grid)).min())
    return MinorizationCert(I, M, tuple(float(v) for v in b), margin, int(grid.size))


@dataclass(frozen=True)
class CertCheck:
    margin: float
    accepted: bool
    grid_size: int
    lipschitz: float
    # lower bound for 1_I - sum b_n U_n between grid points, away from jumps
    between_grid_bound: float
    b0_positive: bool = field(default=True)


def derivative_bound(b) -> float:
    """Conservative bound for max |d/dt sum b_n U_n(t)| on [-1, 1]."""
    return float(sum(abs(v) * n * (n + 1) ** 2 for n, v in enumerate(b)))


def verify_cert(cert: MinorizationCert, grid_size: int = 1_000_000,
                tolerance: float = 1e-9, jump_exclusion: float = 1e-4) -> CertCheck:
    """Re-check a certificate on a fresh uniform grid."""
    grid = np.linspace(-1.0, 1.0, grid_size)
    b = np.asarray(cert.b)
    gap = cert.target.indicator(grid) - u_series(b, grid)
    margin = float(gap.min())
    L = derivative_bound(b)
    h = 2.0 / (grid_size - 1)
    away = np.ones(grid.size, dtype=bool)
    for e in cert.target.jumps():
        away &= np.abs(grid - e) > jump_exclusion
    between = float(gap[away].min() - L * h / 2) if away.any() else margin
    b0_ok = cert.b0 > 0
    return CertCheck(margin, b0_ok and margin >= -tolerance, grid_size, L, between, b0_ok)
