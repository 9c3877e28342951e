"""Short-interval scans: largest prime factors, Sato-Tate sums, valuation ledgers.

The theorems these scans probe are asymptotic existence statements with
unspecified constants and thresholds.  Everything here gathers evidence at
desk scale; none of it can refute a theorem.
"""

from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np

from .chebyshev import IntervalUnion, st_measure
from .density import residues_mod
from .eigenform import EigenformTable, hecke_powers, lambda_value
from .minorize import MinorizationCert
from .primes import (FactorBudget, FactorReport, IntervalSpec, interval_length, primes_in_interval,
                     is_probable_prime, largest_prime_factor, shape_label, valuation)


def reduce_exponent(n: int) -> int:
    """Largest prime divisor q of n + 1; P(a_f(p^n)) >= P(a_f(p^(q-1)))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    m, q, d = n + 1, 1, 2
    while d * d <= m:
        while m % d == 0:
            q, m = d, m // d
        d += 1
    return max(q, m) if m > 1 else q


# ---------------------------------------------------------------- bounds

@dataclass(frozen=True)
class BoundSpec:
    """Lower-bound shape for P(a_f(p^n)); constants the theorems leave free default to 1."""

    theorem: str  # "T1" | "T2" | "T3"
    n: int = 1
    eps: float = 0.1
    A: float = 1.0
    c: float = 1.0
    b: float | None = None

    def __post_init__(self):
        if self.theorem not in ("T1", "T2", "T3"):
            raise ValueError(f"unknown theorem {self.theorem!r}")
        if self.theorem == "T2":
            if not 0 < self.eps < 0.1:
                raise ValueError(f"eps={self.eps} outside (0, 1/10)")
            if self.n > 1 and (self.b is None or self.b <= 0):
                raise ValueError("T2 with n > 1 needs a positive exponent b (see t2_from_cert)")

    @classmethod
    def t2_from_cert(cls, eps: float, n: int, cert: MinorizationCert, c: float = 1.0) -> "BoundSpec":
        """T2 bound with b = min(b_0, 1/7) / 2, b_0 from a J_q minorant."""
        if cert.b0 <= 0:
            raise ValueError("certificate must have b_0 > 0")
        return cls("T2", n=n, eps=eps, c=c, b=min(cert.b0, 1 / 7) / 2)

    def evaluate(self, x: float) -> float:
        if self.theorem == "T1":
            lxn = self.n * math.log(x)
            llxn = math.log(lxn)
            if llxn <= 1:
                raise ValueError("the T1 bound needs loglog x^n > 1")
            return lxn ** 0.125 * llxn ** (0.375 - self.eps)
        if self.theorem == "T2":
            if self.n == 1:
                return self.c * x ** (self.eps / 7) * math.log(x) ** (2 / 7)
            return self.c * x ** (self.eps * self.b)
        lx = math.log(x)
        return self.c * x ** (1 / 28) * lx ** (3 / 7) * math.log(lx) ** (1 / 7)

    def label(self) -> str:
        if self.theorem == "T1":
            return f"t1:{self.eps:g}"
        if self.theorem == "T2":
            return f"t2:{self.eps:g}:{self.c:g}" + (f":{self.b:g}" if self.b else "")
        return f"t3:{self.c:g}"


def parse_bound(text: str, n: int) -> BoundSpec:
    """``t1:eps``, ``t2:eps[:c[:b]]`` or ``t3[:c]``."""
    parts = text.lower().split(":")
    kind, args = parts[0], [float(a) for a in parts[1:] if a]
    if kind == "t1":
        return BoundSpec("T1", n=n, eps=args[0] if args else 0.1)
    if kind == "t2":
        eps = args[0] if args else 0.05
        c = args[1] if len(args) > 1 else 1.0
        b = args[2] if len(args) > 2 else None
        return BoundSpec("T2", n=n, eps=eps, c=c, b=b)
    if kind == "t3":
        return BoundSpec("T3", n=n, c=args[0] if args else 1.0)
    raise ValueError(f"unknown bound {text!r}")


# ---------------------------------------------------------------- scans

@dataclass(frozen=True)
class ScanRow:
    p: int
    nonzero: bool
    digits: int
    lam: float
    lpf: int
    lpf_status: str
    qualifies: bool


@dataclass
class ScanReport:
    form: str
    n: int
    exponent: int  # exponent actually factored (n, or q-1 when reduced)
    x: int
    y: int
    shape: str
    bound: str
    bound_value: float
    rows: list[ScanRow] = field(default_factory=list)

    @property
    def qualifying_count(self) -> int:
        return sum(r.qualifies for r in self.rows)

    @property
    def qualifying_density(self) -> float:
        return self.qualifying_count * math.log(self.x) / self.y if self.y else 0.0

    @property
    def max_lpf(self) -> int:
        return max((r.lpf for r in self.rows), default=1)

    @property
    def zero_count(self) -> int:
        return sum(not r.nonzero for r in self.rows)

    @property
    def unresolved_count(self) -> int:
        return sum(r.lpf_status == "atleast" for r in self.rows)

    @property
    def no_primes(self) -> bool:
        return not self.rows

    def summary(self) -> dict:
        return {
            "form": self.form, "n": self.n, "exponent": self.exponent,
            "x": self.x, "y": self.y, "shape": self.shape,
            "bound": self.bound, "bound_value": self.bound_value,
            "primes": len(self.rows),
            "qualifying_count": self.qualifying_count,
            "qualifying_density": self.qualifying_density,
            "max_lpf": self.max_lpf,
            "zero_count": self.zero_count,
            "unresolved_count": self.unresolved_count,
            "no_primes": self.no_primes,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "n", "afpn_digits", "lpf", "lpf_status", "lambda", "qualifies"])
        for r in self.rows:
            w.writerow([r.p, self.exponent, r.digits, r.lpf, r.lpf_status,
                        f"{r.lam:.17g}", int(r.qualifies)])
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2)


def _factor_many(values: list[int], budget: FactorBudget, workers: int) -> list[FactorReport]:
    if workers <= 1 or len(values) < 2:
        return [largest_prime_factor(v, budget) for v in values]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # each factorization is seeded by its own value, so order and worker count don't matter
        return list(pool.map(largest_prime_factor, values, [budget] * len(values),
                             chunksize=max(1, len(values) // (4 * workers))))


def _interval_primes(table: EigenformTable, x: int, y: int) -> tuple[list[int], list[int]]:
    if x + y > table.n_max:
        raise IndexError(f"x + y = {x + y} exceeds table range n_max={table.n_max}")
    ps, cs = table.prime_coeffs(x + y)
    lo = bisect_right(ps, x)
    return ps[lo:], cs[lo:]


def scan_interval(table: EigenformTable, n: int, spec: IntervalSpec, bound: BoundSpec,
                  budget: FactorBudget | None = None, reduce: bool = False,
                  precision: int = 128, workers: int = 1) -> ScanReport:
    """Factor a_f(p^n) for every prime p in (x, x + y] and count those beating the bound.

    With ``reduce=True`` the factored value is a_f(p^(q-1)), q = reduce_exponent(n),
    whose largest prime factor is a lower bound for that of a_f(p^n).
    """
    budget = budget or FactorBudget()
    y = interval_length(spec)
    exponent = reduce_exponent(n) - 1 if reduce else n
    ps, cs = _interval_primes(table, spec.x, y)
    k = table.weight
    values = [hecke_powers(a, p, k, exponent)[exponent] for p, a in zip(ps, cs)]
    reports = _factor_many(values, budget, workers)
    bval = bound.evaluate(spec.x)
    rows = []
    for p, a, v, rep in zip(ps, cs, values, reports):
        lam = float(lambda_value(a, p, k, precision))
        nonzero = v != 0
        rows.append(ScanRow(p, nonzero, len(str(abs(v))), lam, rep.lpf, rep.status,
                            nonzero and rep.lpf > bval))
    return ScanReport(table.form.label, n, exponent, spec.x, y, shape_label(spec.shape),
                      bound.label(), bval, rows)


def exponent_fit(reports: list[ScanReport]) -> tuple[float, float]:
    """Least-squares slope and intercept of log(max_lpf) against log x."""
    if len(reports) < 3:
        raise ValueError("need at least three reports")
    xs = [r.x for r in reports]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("reports must have increasing x")
    return fit_loglog(xs, [r.max_lpf for r in reports])


def fit_loglog(xs, ys) -> tuple[float, float]:
    slope, intercept = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope), float(intercept)


# ---------------------------------------------------------------- Sato-Tate

@dataclass(frozen=True)
class SatoTateSum:
    S: float
    normalized: float  # S / y
    mu_st: float
    primes: int
    endpoint_ties: int
    b0: float | None = None


def sato_tate_short_sum(table: EigenformTable, I: IntervalUnion, x: int, y: int,
                        precision: int = 128, cert: MinorizationCert | None = None,
                        tie_tol: float = 2.0 ** -50) -> SatoTateSum:
    """S = sum over p in (x, x + y] with lambda_f(p) in I of log p."""
    ps, cs = _interval_primes(table, x, y)
    ends = I.endpoints()
    k = table.weight
    S = 0.0
    ties = 0
    with mpmath.workprec(precision):
        for p, a in zip(ps, cs):
            lam = lambda_value(a, p, k, precision)
            if any(abs(lam - e) < tie_tol for e in ends):
                ties += 1
            inside = any(lo <= lam <= hi for lo, hi in I.components)
            if inside:
                S += math.log(p)
    return SatoTateSum(S, S / y if y else 0.0, st_measure(I), len(ps), ties,
                       cert.b0 if cert else None)


# ---------------------------------------------------------------- ledger

@dataclass
class ValuationLedger:
    form: str
    q: int
    x: int
    y: int
    w: int
    primes: int  # primes in the interval
    zero_count: int  # primes with a_f(p^(q-1)) = 0, outside V_q
    nu: dict[int, int]  # ell <= w -> nu_{x, ell}
    nu_exact: bool  # False if unresolved cofactors could hide primes <= w
    unresolved: int  # reports with an unresolved cofactor
    smooth_primes: int
    lhs: float  # sum of log|a_f(p^(q-1))| over w-smooth p
    rhs: float  # sum of nu^smooth_ell log ell
    product_identity: bool
    identity_residual: float
    full_residual: float  # log balance over all of V_q, unresolved cofactors included
    ledger_bounds: dict[int, int]  # ell -> sum_m (pi(x+y, ell^m) - pi(x, ell^m))
    inequality_holds: bool
    inequality_failures: list[int]

    @property
    def all_smooth(self) -> bool:
        return self.smooth_primes == self.primes - self.zero_count

    def summary(self) -> dict:
        d = asdict(self)
        d["nu"] = {str(k): v for k, v in sorted(self.nu.items())}
        d["ledger_bounds"] = {str(k): v for k, v in sorted(self.ledger_bounds.items())}
        d["all_smooth"] = self.all_smooth
        return d


def _ilog(n: int, base: int) -> int:
    e, acc = 0, base
    while acc <= n:
        acc *= base
        e += 1
    return e


def ledger_bound(table: EigenformTable, q: int, x: int, ps: list[int], cs: list[int], ell: int) -> int:
    """sum_{1 <= m <= log(q x^(qk))/log ell} #{p in the interval : ell^m | a_f(p^(q-1))}."""
    m_max = _ilog(q * x ** (q * table.weight), ell)
    total = 0
    d = ell
    for _ in range(m_max):
        res = residues_mod(table, q - 1, d, ps, cs)
        cnt = int(np.count_nonzero(np.asarray(res) == 0))
        if cnt == 0:
            break  # ell^(m+1) | a implies ell^m | a
        total += cnt
        d *= ell
    return total


def valuation_ledger(table: EigenformTable, q: int, x: int, y: int, w: int,
                     budget: FactorBudget | None = None, check_all_below: int = 1000,
                     workers: int = 1) -> ValuationLedger:
    """Prime-by-prime valuation bookkeeping for prod_{p in V_q} |a_f(p^(q-1))|.

    The ledger inequality nu_{x,ell} <= sum_m (pi(x+y, ell^m) - pi(x, ell^m)) is
    checked by independent congruence counting for every ell <= check_all_below
    and for every ell <= w that occurs.  Other ell have nu = 0 and hold trivially.
    """
    if not is_probable_prime(q):
        raise ValueError("q must be prime")
    budget = budget or FactorBudget()
    ps, cs = _interval_primes(table, x, y)
    k = table.weight
    values = [hecke_powers(a, p, k, q - 1)[q - 1] for p, a in zip(ps, cs)]
    vq = [(p, v) for p, v in zip(ps, values) if v != 0]
    reports = _factor_many([v for _, v in vq], budget, workers)

    nu: dict[int, int] = {}
    nu_smooth: dict[int, int] = {}
    smooth_prod = 1
    lhs = 0.0
    full_lhs = 0.0
    full_rhs = 0.0
    smooth = 0
    unresolved = 0
    for (p, v), rep in zip(vq, reports):
        logv = math.log(abs(v))
        full_lhs += logv
        full_rhs += sum(e * math.log(ell) for ell, e in rep.resolved)
        if rep.unresolved_cofactor > 1:
            unresolved += 1
            full_rhs += math.log(rep.unresolved_cofactor)
        for ell, e in rep.resolved:
            if ell <= w:
                nu[ell] = nu.get(ell, 0) + e
        if rep.lpf_exact and rep.lpf <= w:
            smooth += 1
            lhs += logv
            smooth_prod *= abs(v)
            for ell, e in rep.resolved:
                nu_smooth[ell] = nu_smooth.get(ell, 0) + e
    ledger_prod = 1
    rhs = 0.0
    for ell, e in nu_smooth.items():
        ledger_prod *= ell ** e
        rhs += e * math.log(ell)
    # unresolved cofactors have no prime factor below the trial bound
    nu_exact = unresolved == 0 or w <= budget.trial_bound

    ells = set(nu)
    if check_all_below >= 2:
        ells.update(primes_in_interval(1, min(check_all_below, w) - 1))
    bounds = {ell: ledger_bound(table, q, x, ps, cs, ell) for ell in sorted(ells)}
    failures = [ell for ell, bnd in bounds.items() if nu.get(ell, 0) > bnd]
    # cross-check nu against direct valuations for the smallest primes
    for ell in [l for l in sorted(bounds) if l <= 7]:
        direct = sum(valuation(v, ell) for _, v in vq)
        if direct != nu.get(ell, 0):
            raise AssertionError(f"valuation bookkeeping mismatch at ell={ell}")
    return ValuationLedger(
        table.form.label, q, x, y, w, len(ps), len(ps) - len(vq), nu, nu_exact, unresolved,
        smooth, lhs, rhs, smooth_prod == ledger_prod,
        abs(lhs - rhs) / max(1.0, abs(lhs)),
        abs(full_lhs - full_rhs) / max(1.0, abs(full_lhs)),
        bounds, not failures, failures,
    )
