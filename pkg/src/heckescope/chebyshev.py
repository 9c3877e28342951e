"""Chebyshev polynomials of the second kind and the Sato-Tate measure.

Also builds the excluded-neighbourhood sets I_q and J_q on which
|a_f(p^(q-1))| is forced to be large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

DOMAIN_SLACK = 1e-12


def chebyshev_u(n: int, t):
    """U_n(t) by the three-term recurrence; ``t`` may be a float or an ndarray."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if np.any(np.abs(t) > 1 + DOMAIN_SLACK):
        raise ValueError("t must lie in [-1, 1]")
    return _u_recurrence(n, t)


def _u_recurrence(n, t):
    prev, cur = 1.0 + 0 * t, 2 * t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur


def chebyshev_u_mp(n: int, t):
    """U_n(t) for an mpmath number at the current working precision."""
    prev, cur = mpmath.mpf(1), 2 * t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur


def u_matrix(degree: int, t: np.ndarray) -> np.ndarray:
    """Columns U_0(t), ..., U_degree(t)."""
    t = np.asarray(t, dtype=float)
    out = np.empty((t.size, degree + 1))
    out[:, 0] = 1.0
    if degree >= 1:
        out[:, 1] = 2 * t
    for n in range(2, degree + 1):
        out[:, n] = 2 * t * out[:, n - 1] - out[:, n - 2]
    return out


def u_series(coeffs, t):
    """sum_n coeffs[n] U_n(t) by Clenshaw's recurrence."""
    t = np.asarray(t, dtype=float)
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for c in reversed(list(coeffs)):
        b1, b2 = c + 2 * t * b1 - b2, b1
    return b1


def generating_function_residual(t: float, u: float, N: int, precision: int = 256) -> float:
    """|sum_{n<=N} U_n(t) u^n - 1/(1 - 2ut + u^2)| at ``precision`` bits.

    The truncation error is at most (N+2)|u|^(N+1)/(1-|u|)^2 when |u| < 1 - |t|.
    """
    if not -1 < t < 1 or not abs(u) < 1 - abs(t):
        raise ValueError("need |t| < 1 and |u| < 1 - |t|")
    with mpmath.workprec(precision):
        t, u = mpmath.mpf(t), mpmath.mpf(u)
        prev, cur = mpmath.mpf(1), 2 * t
        total = prev + (cur * u if N >= 1 else 0)
        upow = u
        for _ in range(2, N + 1):
            prev, cur = cur, 2 * t * cur - prev
            upow *= u
            total += cur * upow
        closed = 1 / (1 - 2 * u * t + u * u)
        return float(abs(total - closed))


def generating_function_bound(u: float, N: int) -> float:
    return (N + 2) * abs(u) ** (N + 1) / (1 - abs(u)) ** 2


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted disjoint closed intervals inside [-1, 1]."""

    components: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        comps = tuple((float(a), float(b)) for a, b in self.components)
        object.__setattr__(self, "components", comps)
        last = -math.inf
        for a, b in comps:
            if not (-1 <= a <= b <= 1):
                raise ValueError(f"component [{a}, {b}] not inside [-1, 1]")
            if a <= last:
                raise ValueError("components must be sorted and disjoint")
            last = b

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalUnion":
        """Sort and merge arbitrary (possibly overlapping) closed intervals."""
        merged: list[list[float]] = []
        for a, b in sorted((float(a), float(b)) for a, b in pairs):
            if a > b:
                raise ValueError(f"empty interval [{a}, {b}]")
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    @classmethod
    def full(cls) -> "IntervalUnion":
        return cls(((-1.0, 1.0),))

    def contains(self, t):
        """Closed-interval membership; vectorized over ndarrays."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=bool)
        for a, b in self.components:
            out |= (t >= a) & (t <= b)
        return out if out.ndim else bool(out)

    def indicator(self, t):
        return np.asarray(self.contains(t), dtype=float)

    def endpoints(self) -> list[float]:
        return [e for comp in self.components for e in comp]

    def jumps(self) -> list[float]:
        """Endpoints strictly inside (-1, 1), where the indicator is discontinuous."""
        return [e for e in self.endpoints() if -1 < e < 1]

    def to_json(self) -> list[list[float]]:
        return [[a, b] for a, b in self.components]


def _st_primitive(t) -> mpmath.mpf:
    t = mpmath.mpf(t)
    return (t * mpmath.sqrt(1 - t * t) + mpmath.asin(t)) / mpmath.pi


def st_measure(I: IntervalUnion, precision: int = 80) -> float:
    """Sato-Tate mass (2/pi) int_I sqrt(1 - t^2) dt."""
    with mpmath.workprec(precision):
        total = mpmath.mpf(0)
        for a, b in I.components:
            total += _st_primitive(b) - _st_primitive(a)
        return float(total)


def st_density(t):
    t = np.asarray(t, dtype=float)
    return 2 / np.pi * np.sqrt(np.clip(1 - t * t, 0, None))


def _excluded_centres(q: int, precision: int = 96) -> list[float]:
    with mpmath.workprec(precision):
        cs = [mpmath.cos(mpmath.pi * j / q) for j in range(1, (q - 1) // 2 + 1)]
        return sorted(float(s * c) for c in cs for s in (1, -1))


def _complement_of_neighbourhoods(centres: list[float], radius: float) -> IntervalUnion:
    # holes are open intervals, so their endpoints stay in the set
    comps = []
    left = -1.0
    for c in sorted(centres):
        a, b = c - radius, c + radius
        if a >= left:
            comps.append((left, min(a, 1.0)))
        left = max(left, b)
        if left > 1:
            break
    if left <= 1:
        comps.append((left, 1.0))
    return IntervalUnion(tuple(comps))


def _check_odd_prime(q: int) -> None:
    if q < 3 or q % 2 == 0 or any(q % d == 0 for d in range(3, math.isqrt(q) + 1, 2)):
        raise ValueError(f"q={q} is not an odd prime")


def build_I_q(q: int) -> IntervalUnion:
    """[-1, 1] minus the open 1/q^2-neighbourhoods of +-cos(pi j/q), 1 <= j <= (q-1)/2."""
    _check_odd_prime(q)
    return _complement_of_neighbourhoods(_excluded_centres(q), 1 / q ** 2)


def build_J_q(q: int, floor: float = 0.55) -> tuple[float, IntervalUnion]:
    """Like I_q with radius 1/(C q^2), C the least power of two giving mass > ``floor``."""
    _check_odd_prime(q)
    centres = _excluded_centres(q)
    C = 1.0
    while True:
        J = _complement_of_neighbourhoods(centres, 1 / (C * q ** 2))
        if st_measure(J) > floor:
            return C, J
        C *= 2
