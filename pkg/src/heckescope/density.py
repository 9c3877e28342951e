"""Counting primes with a_f(p^m) = 0 (mod d) and comparing with closed forms.

All counting runs the Hecke recurrence on residues mod d.  For d < 2**31 this
is vectorized over primes with int64 numpy arrays; larger moduli fall back to
Python integers.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigenform import EigenformTable, FormId
from .primes import is_probable_prime, prime_count

_NUMPY_MODULUS_LIMIT = 1 << 31


def _powmod_array(base: np.ndarray, e: int, d: int) -> np.ndarray:
    result = np.ones_like(base) % d
    b = base % d
    while e:
        if e & 1:
            result = result * b % d
        b = b * b % d
        e >>= 1
    return result


def residues_mod(table: EigenformTable, m: int, d: int, primes: list[int],
                 coeffs: list[int]) -> np.ndarray | list[int]:
    """a_f(p^m) mod d for each listed prime, from a_f(p) mod d."""
    k = table.weight
    if d < _NUMPY_MODULUS_LIMIT:
        ps = np.array(primes, dtype=np.int64)
        a = np.array([c % d for c in coeffs], dtype=np.int64)
        pk = _powmod_array(ps, k - 1, d)
        prev = np.ones_like(a) % d
        cur = a.copy()
        if m == 0:
            return prev
        for _ in range(m - 1):
            prev, cur = cur, (a * cur - pk * prev) % d
        return cur
    out = []
    for p, c in zip(primes, coeffs):
        a = c % d
        pk = pow(p, k - 1, d)
        prev, cur = 1 % d, a
        if m == 0:
            cur = prev
        for _ in range(m - 1):
            prev, cur = cur, (a * cur - pk * prev) % d
        out.append(cur)
    return out


def _zeros(res) -> int:
    if isinstance(res, np.ndarray):
        return int(np.count_nonzero(res == 0))
    return sum(1 for r in res if r == 0)


def _primes_between(table: EigenformTable, x: int, y: int) -> tuple[list[int], list[int]]:
    from bisect import bisect_right

    ps, cs = table.prime_coeffs(x + y)
    lo = bisect_right(ps, x)
    return ps[lo:], cs[lo:]


def pi_f_m(table: EigenformTable, m: int, d: int, x: int) -> int:
    """#{p <= x : a_f(p^m) = 0 mod d}."""
    if d < 2:
        raise ValueError("modulus must be at least 2")
    if x < 2:
        return 0
    ps, cs = table.prime_coeffs(x)
    return _zeros(residues_mod(table, m, d, ps, cs))


def count_in_interval(table: EigenformTable, m: int, d: int, x: int, y: int) -> int:
    """pi_{f,m}(x + y, d) - pi_{f,m}(x, d), counted directly on (x, x + y]."""
    if d < 2:
        raise ValueError("modulus must be at least 2")
    ps, cs = _primes_between(table, x, y)
    if not ps:
        return 0
    return _zeros(residues_mod(table, m, d, ps, cs))


@dataclass(frozen=True)
class ExpectedDensity:
    value: Fraction
    # closed forms hold only for sufficiently large ell
    asymptotic: bool = True


def delta_expected(q: int, ell: int, n: int = 1) -> ExpectedDensity | None:
    """Closed-form density of a_f(p^(q-1)) = 0 mod ell^n, or None where none is known."""
    if q < 3 or q % 2 == 0 or not is_probable_prime(q):
        raise ValueError("q must be an odd prime")
    if not is_probable_prime(ell):
        raise ValueError("ell must be prime")
    if n < 1:
        raise ValueError("n must be at least 1")
    if ell == q:
        base = Fraction(q, q * q - 1)
    elif ell % q == 1:
        base = Fraction(q - 1, 2) / (ell - 1)
    elif ell % q == q - 1:
        base = Fraction(q - 1, 2) / (ell + 1)
    else:
        base = Fraction(0)
    if n == 1:
        return ExpectedDensity(base)
    if ell == q:
        return ExpectedDensity(Fraction(0)) if q >= 5 else None
    return ExpectedDensity(base / ell ** (n - 1))


def _bernoulli(n: int) -> Fraction:
    # Akiyama-Tanigawa
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def eisenstein_congruence_primes(weight: int) -> list[int]:
    """Primes dividing the numerator of B_k / 2k (Ramanujan-type congruences)."""
    num = abs(_bernoulli(weight).numerator)
    out = []
    ell = 2
    while num > 1 and ell * ell <= num:
        if num % ell == 0:
            out.append(ell)
            while num % ell == 0:
                num //= ell
        ell += 1
    if num > 1:
        out.append(num)
    return out


@dataclass(frozen=True)
class DeltaOneReference:
    ell: int
    center: float
    band: tuple[float, float]
    informative: bool
    possibly_exceptional: bool


def delta1_reference(ell: int, form: FormId | None = None) -> DeltaOneReference:
    """1/ell with a +-3/ell^2 consistency band for the density of ell | a_f(p).

    The O-constant is not known, so the band is for reporting only.  Primes
    below the weight, Eisenstein congruence primes, and 23 for Delta are
    flagged as possibly exceptional.
    """
    if not is_probable_prime(ell):
        raise ValueError("ell must be prime")
    weight = form.weight if form else 12
    lo, hi = 1 / ell - 3 / ell ** 2, 1 / ell + 3 / ell ** 2
    informative = lo >= 0 and hi <= 1
    flagged = ell <= weight or ell in eisenstein_congruence_primes(weight)
    if weight == 12 and ell == 23:
        flagged = True
    return DeltaOneReference(ell, 1 / ell, (max(lo, 0.0), min(hi, 1.0)), informative, flagged)


@dataclass(frozen=True)
class DensityEstimate:
    form: FormId
    m: int
    d: int
    x: int
    count: int
    pi_x: int
    expected: Fraction | None = None

    @property
    def ratio(self) -> float:
        return self.count / self.pi_x if self.pi_x else 0.0

    @property
    def std_err(self) -> float:
        r = self.ratio
        return math.sqrt(r * (1 - r) / self.pi_x) if self.pi_x else 0.0

    def sigma_model(self) -> float | None:
        """Binomial sigma around the expected value, when there is one."""
        if self.expected is None or not self.pi_x:
            return None
        e = float(self.expected)
        return math.sqrt(e * (1 - e) / self.pi_x)

    def deviation(self) -> float | None:
        """(ratio - expected) in units of the binomial sigma."""
        s = self.sigma_model()
        if s is None:
            return None
        gap = self.ratio - float(self.expected)
        if s == 0:
            return 0.0 if gap == 0 else math.copysign(math.inf, gap)
        return gap / s

    def flag(self, threshold: float = 4.0, exceptional: float = 6.0) -> str:
        dev = self.deviation()
        if dev is None:
            return "no-reference"
        if abs(dev) > exceptional:
            return "candidate-exceptional"
        if abs(dev) > threshold:
            return "deviates"
        return "ok"


def _expected_for(m: int, d: int) -> Fraction | None:
    """Closed form when m+1 is an odd prime and d is a prime power."""
    q = m + 1
    if q < 3 or not is_probable_prime(q):
        return None
    for ell in range(2, d + 1):
        if d % ell == 0:
            n = 0
            r = d
            while r % ell == 0:
                r //= ell
                n += 1
            if r != 1:
                return None
            e = delta_expected(q, ell, n)
            return e.value if e else None
    return None


def estimate_density(table: EigenformTable, m: int, d: int, x: int,
                     expected: Fraction | None = None) -> DensityEstimate:
    """pi_{f,m}(x, d) / pi(x) with the closed-form reference when one applies."""
    if expected is None:
        expected = _expected_for(m, d)
    return DensityEstimate(table.form, m, d, x, pi_f_m(table, m, d, x), prime_count(x), expected)


CSV_FIELDS = ("form", "m", "d", "x", "count", "pi_x", "ratio", "expected", "std_err", "flag")


def density_rows_csv(estimates: list[DensityEstimate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for e in estimates:
        w.writerow([e.form.label, e.m, e.d, e.x, e.count, e.pi_x, repr(e.ratio),
                    "" if e.expected is None else str(e.expected), repr(e.std_err), e.flag()])
    return buf.getvalue()


@dataclass(frozen=True)
class ShortIntervalCount:
    observed: int
    predicted: float
    primes_in_interval: int
    reference: float
    sigma: float


def short_interval_congruence(table: EigenformTable, m: int, d: int, x: int, y: int,
                              reference: float | None = None) -> ShortIntervalCount:
    """Observed count on (x, x + y] against reference-density * (pi(x + y) - pi(x))."""
    if x + y > table.n_max:
        raise IndexError(f"x + y = {x + y} exceeds table range n_max={table.n_max}")
    ps, cs = _primes_between(table, x, y)
    observed = _zeros(residues_mod(table, m, d, ps, cs)) if ps else 0
    if reference is None:
        exp = _expected_for(m, d)
        if exp is not None:
            reference = float(exp)
        else:
            reference = pi_f_m(table, m, d, x) / prime_count(x) if x >= 2 else 0.0
    n = len(ps)
    return ShortIntervalCount(observed, reference * n, n, reference,
                              math.sqrt(n * reference * (1 - reference)))
