"""Level-one Hecke eigenforms with integer coefficients.

Each of the six one-dimensional spaces S_k(SL_2(Z)), k in {12, 16, 18, 20, 22, 26},
is spanned by a normalized non-CM eigenform ``Delta * E_4^a * E_6^b``.  Coefficients
are exact Python integers; everything floating point is done with mpmath at an
explicit working precision.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property

import mpmath

from . import series
from .chebyshev import chebyshev_u_mp
from .primes import is_probable_prime, primes_in_interval


class DeligneBoundError(ArithmeticError):
    """|a_f(p)| > 2 p^((k-1)/2): the coefficient table is wrong."""


class LucasDivisibilityError(ArithmeticError):
    """a_f(p^(d-1)) failed to divide a_f(p^n) for some d | n+1."""

    def __init__(self, p: int, n: int, divisors: list[int]):
        self.p, self.n, self.divisors = p, n, divisors
        super().__init__(f"p={p}, n={n}: a_f(p^(d-1)) does not divide a_f(p^n) for d in {divisors}")


@dataclass(frozen=True)
class FormId:
    weight: int
    label: str
    level: int = 1
    # exponents of E_4 and E_6 multiplying Delta
    e4: int = 0
    e6: int = 0


FORMS: dict[str, FormId] = {
    f.label: f
    for f in (
        FormId(12, "delta"),
        FormId(16, "k16", e4=1),
        FormId(18, "k18", e6=1),
        FormId(20, "k20", e4=2),
        FormId(22, "k22", e4=1, e6=1),
        FormId(26, "k26", e4=2, e6=1),
    )
}
WEIGHTS = {f.weight: f for f in FORMS.values()}


def get_form(key: str | int | FormId) -> FormId:
    """Look up a built-in form by label ("delta", "k16", ...) or weight."""
    if isinstance(key, FormId):
        if key.weight not in WEIGHTS or key.level != 1:
            raise ValueError(f"unsupported form {key}")
        return key
    if isinstance(key, int) or (isinstance(key, str) and key.isdigit()):
        w = int(key)
        if w not in WEIGHTS:
            raise ValueError(f"unsupported weight {w}; choose one of {sorted(WEIGHTS)}")
        return WEIGHTS[w]
    if key not in FORMS:
        raise ValueError(f"unknown form {key!r}; choose one of {sorted(FORMS)}")
    return FORMS[key]


@dataclass(frozen=True, eq=False)
class EigenformTable:
    """a_f(1..n_max) for one built-in form.  Immutable once built."""

    form: FormId
    n_max: int
    coeffs: tuple[int, ...]

    @property
    def weight(self) -> int:
        return self.form.weight

    def a(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"a_f({n}) outside the table range 1..{self.n_max}")
        return self.coeffs[n - 1]

    def __len__(self) -> int:
        return self.n_max

    @cached_property
    def primes(self) -> list[int]:
        return primes_in_interval(0, self.n_max)

    def prime_coeffs(self, x: int | None = None) -> tuple[list[int], list[int]]:
        """Primes p <= x (default n_max) and the matching a_f(p)."""
        x = self.n_max if x is None else x
        if x > self.n_max:
            raise IndexError(f"x={x} exceeds table range n_max={self.n_max}")
        ps = self._prime_coeff_cache[0]
        hi = bisect_right(ps, x)
        return ps[:hi], self._prime_coeff_cache[1][:hi]

    @cached_property
    def _prime_coeff_cache(self) -> tuple[list[int], list[int]]:
        ps = self.primes
        return ps, [self.coeffs[p - 1] for p in ps]


def build_form(form: str | int | FormId, n_max: int) -> EigenformTable:
    """First ``n_max`` coefficients of the normalized eigenform of the given weight."""
    form = get_form(form)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    length = n_max + 1
    s = series.delta_series(length)
    if form.e4:
        e4 = series.eisenstein_series(4, length)
        for _ in range(form.e4):
            s = series.mul(s, e4, length)
    if form.e6:
        s = series.mul(s, series.eisenstein_series(6, length), length)
    return EigenformTable(form, n_max, tuple(s[1:]))


@dataclass(frozen=True)
class PrimePowerValue:
    p: int
    m: int
    value: int


def hecke_powers(a_p: int, p: int, weight: int, m: int) -> list[int]:
    """[a_f(p^0), ..., a_f(p^m)] from the Hecke recurrence."""
    pk = p ** (weight - 1)
    out = [1, a_p]
    for _ in range(m - 1):
        out.append(a_p * out[-1] - pk * out[-2])
    return out[: m + 1]


def _check_prime_in_table(table: EigenformTable, p: int) -> None:
    if p > table.n_max:
        raise IndexError(f"p={p} exceeds table range n_max={table.n_max}")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")


def coeff_at_prime_power(table: EigenformTable, p: int, m: int) -> PrimePowerValue:
    """a_f(p^m), reading only a_f(p) from the table."""
    _check_prime_in_table(table, p)
    if m < 0:
        raise ValueError("exponent must be non-negative")
    return PrimePowerValue(p, m, hecke_powers(table.a(p), p, table.weight, m)[m])


@dataclass(frozen=True)
class NormalizedAngle:
    p: int
    value: mpmath.mpf

    def __float__(self) -> float:
        return float(self.value)


def deligne_ok(a_p: int, p: int, weight: int) -> bool:
    return a_p * a_p <= 4 * p ** (weight - 1)


def normalized_lambda(table: EigenformTable, p: int, precision: int = 128) -> NormalizedAngle:
    """lambda_f(p) = a_f(p) / (2 p^((k-1)/2)) at ``precision`` bits."""
    _check_prime_in_table(table, p)
    a_p = table.a(p)
    if not deligne_ok(a_p, p, table.weight):
        raise DeligneBoundError(f"|a_f({p})| = {abs(a_p)} exceeds 2 {p}^(({table.weight}-1)/2)")
    with mpmath.workprec(precision):
        lam = mpmath.mpf(a_p) / (2 * mpmath.power(p, mpmath.mpf(table.weight - 1) / 2))
        # the exact check above makes |lam| <= 1; only rounding can push past it
        lam = max(mpmath.mpf(-1), min(mpmath.mpf(1), lam))
    return NormalizedAngle(p, lam)


def lambda_value(a_p: int, p: int, weight: int, precision: int = 128) -> mpmath.mpf:
    with mpmath.workprec(precision):
        return mpmath.mpf(a_p) / (2 * mpmath.power(p, mpmath.mpf(weight - 1) / 2))


def lucas_closed_form_check(table: EigenformTable, p: int, n: int, precision: int = 128) -> float:
    """Relative gap between a_f(p^(n-1)) and (alpha^n - beta^n)/(alpha - beta).

    alpha, beta are the complex roots of x^2 - a_f(p) x + p^(k-1).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    _check_prime_in_table(table, p)
    a_p = table.a(p)
    exact = hecke_powers(a_p, p, table.weight, n - 1)[n - 1]
    with mpmath.workprec(precision):
        disc = mpmath.mpf(a_p * a_p - 4 * p ** (table.weight - 1))
        root = mpmath.sqrt(mpmath.mpc(disc))
        alpha = (a_p + root) / 2
        beta = (a_p - root) / 2
        closed = (alpha ** n - beta ** n) / (alpha - beta)
        resid = abs(exact - closed) / max(1, abs(exact))
    return float(resid)


def lucas_divisibility_failures(table: EigenformTable, p: int, n: int) -> list[int]:
    """Divisors d of n+1 for which a_f(p^(d-1)) fails to divide a_f(p^n)."""
    _check_prime_in_table(table, p)
    vals = hecke_powers(table.a(p), p, table.weight, n)
    target = vals[n]
    bad = []
    for d in range(1, n + 2):
        if (n + 1) % d:
            continue
        div = vals[d - 1]
        if div != 0 and target % div != 0:
            bad.append(d)
    return bad


def verify_lucas_divisibility(table: EigenformTable, p: int, n: int) -> bool:
    return not lucas_divisibility_failures(table, p, n)


def product_identity_residuals(table: EigenformTable, p: int, q: int,
                               precision: int = 128) -> tuple[float, float]:
    """Relative residuals of the two closed forms for a_f(p^(q-1)).

    First: (4 p^(k-1))^((q-1)/2) * prod_j (lambda^2 - cos^2(pi j/q)).
    Second: p^((q-1)(k-1)/2) * U_(q-1)(lambda).
    """
    if q < 3 or q % 2 == 0 or not is_probable_prime(q):
        raise ValueError("q must be an odd prime")
    _check_prime_in_table(table, p)
    k = table.weight
    m = q - 1
    exact = hecke_powers(table.a(p), p, k, m)[m]
    with mpmath.workprec(precision):
        lam = lambda_value(table.a(p), p, k, precision)
        prod = mpmath.mpf(1)
        for j in range(1, (q - 1) // 2 + 1):
            prod *= lam ** 2 - mpmath.cos(mpmath.pi * j / q) ** 2
        lhs = (4 * mpmath.mpf(p) ** (k - 1)) ** ((q - 1) // 2) * prod
        scale = mpmath.power(p, mpmath.mpf(m * (k - 1)) / 2)
        rhs = scale * chebyshev_u_mp(m, lam)
        denom = max(1, abs(exact))
        r1 = abs(lhs - exact) / denom
        r2 = abs(rhs - exact) / denom
    return float(r1), float(r2)


def chebyshev_product_identity_check(table: EigenformTable, p: int, q: int,
                                     precision: int = 128) -> float:
    return max(product_identity_residuals(table, p, q, precision))
