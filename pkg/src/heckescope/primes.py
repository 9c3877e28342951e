"""Prime enumeration in short intervals, primality, factorization and P(n).

Intervals are half-open on the left, (x, x + y], everywhere in the package.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import numpy as np

SEGMENT = 1 << 20
MAX_SIEVE = 1 << 63

# Deterministic strong-test witnesses for every n < 3.3e24 (covers all n < 2**64).
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DETERMINISTIC_LIMIT = 3317044064679887385961981


# ---------------------------------------------------------------- intervals

@dataclass(frozen=True)
class PowerLog:
    A: float


@dataclass(frozen=True)
class HalfPlusEps:
    eps: float


@dataclass(frozen=True)
class EtaThreeQuarters:
    pass


@dataclass(frozen=True)
class Fixed:
    y: int


Shape = PowerLog | HalfPlusEps | EtaThreeQuarters | Fixed


@dataclass(frozen=True)
class IntervalSpec:
    x: int
    shape: Shape

    @property
    def y(self) -> int:
        return interval_length(self)


def parse_shape(text: str) -> Shape:
    """Parse ``powerlog:A``, ``halfeps:eps``, ``eta``, or ``fixed:y``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "powerlog":
        return PowerLog(float(arg))
    if kind in ("halfeps", "halfpluseps"):
        return HalfPlusEps(float(arg))
    if kind in ("eta", "eta34", "etathreequarters"):
        return EtaThreeQuarters()
    if kind == "fixed":
        return Fixed(int(arg))
    raise ValueError(f"unknown interval shape {text!r}")


def shape_label(shape: Shape) -> str:
    if isinstance(shape, PowerLog):
        return f"powerlog:{shape.A:g}"
    if isinstance(shape, HalfPlusEps):
        return f"halfeps:{shape.eps:g}"
    if isinstance(shape, EtaThreeQuarters):
        return "eta"
    return f"fixed:{shape.y}"


def interval_length(spec: IntervalSpec) -> int:
    """y for the interval (x, x + y] of the given shape: floored, and at least 1 except for fixed:0."""
    x, shape = spec.x, spec.shape
    if isinstance(shape, EtaThreeQuarters):
        if x < 17:
            raise ValueError("the x^(3/4) log x loglog x shape needs x >= 17")
        lx = math.log(x)
        y = x ** 0.75 * lx * math.log(lx)
    else:
        if x < 2:
            raise ValueError("x must be at least 2")
        if isinstance(shape, PowerLog):
            if shape.A <= 0:
                raise ValueError("A must be positive")
            y = x / math.log(x) ** shape.A
        elif isinstance(shape, HalfPlusEps):
            if not 0 < shape.eps < 0.1:
                raise ValueError(f"eps={shape.eps} outside (0, 1/10)")
            y = x ** (0.5 + shape.eps)
        elif isinstance(shape, Fixed):
            # y = 0 is allowed and gives an empty interval
            if shape.y < 0:
                raise ValueError("fixed interval length must be non-negative")
            return shape.y
        else:
            raise TypeError(f"unknown shape {shape!r}")
    return max(1, math.floor(y))


# ---------------------------------------------------------------- sieving

@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    """All primes <= limit (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _segments(x: int, y: int):
    """Yield (lo, mask) where mask[i] marks lo + i prime, covering (x, x + y]."""
    if y <= 0:
        return
    if x + y >= MAX_SIEVE:
        raise OverflowError("interval end exceeds the 2**63 sieve limit")
    start, stop = max(x + 1, 2), x + y + 1
    if start >= stop:
        return
    base = _base_primes(math.isqrt(stop - 1))
    for lo in range(start, stop, SEGMENT):
        hi = min(lo + SEGMENT, stop)
        mask = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            first = max(p * p, -(-lo // p) * p)
            mask[first - lo::p] = False
        yield lo, mask


def primes_in_interval(x: int, y: int) -> list[int]:
    """Primes p with x < p <= x + y, ascending."""
    out: list[int] = []
    for lo, mask in _segments(x, y):
        out.extend((np.flatnonzero(mask) + lo).tolist())
    return out


def prime_count(x: int) -> int:
    """pi(x)."""
    return sum(int(mask.sum()) for _, mask in _segments(0, x))


# ---------------------------------------------------------------- primality

def _strong_probable_prime(n, base) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = gmpy2.powmod(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 64, seed: int = 0) -> bool:
    """Strong-pseudoprime test.

    Deterministic below 3.3e24; above that, base 2 plus ``rounds`` bases drawn
    from an RNG seeded by (seed, n), so results never depend on call order.
    """
    if n < 2:
        return False
    for p in _DETERMINISTIC_BASES:
        if n % p == 0:
            return n == p
    n = gmpy2.mpz(n)
    if n < _DETERMINISTIC_LIMIT:
        return all(_strong_probable_prime(n, b) for b in _DETERMINISTIC_BASES)
    if not _strong_probable_prime(n, 2):
        return False
    rng = random.Random(f"mr:{seed}:{n}")
    top = int(n) - 1
    return all(_strong_probable_prime(n, rng.randrange(3, top)) for _ in range(rounds))


# ---------------------------------------------------------------- factoring

@dataclass(frozen=True)
class FactorBudget:
    trial_bound: int = 10 ** 4
    rho_iterations: int = 1 << 20  # total per cofactor, across restarts
    restarts: int = 4
    mr_rounds: int = 64
    seed: int = 0


@dataclass(frozen=True)
class FactorReport:
    n: int
    sign: int
    resolved: tuple[tuple[int, int], ...]
    unresolved_cofactor: int = 1
    lpf: int = 1
    lpf_exact: bool = True

    @property
    def status(self) -> str:
        return "exact" if self.lpf_exact else "atleast"

    def reassemble(self) -> int:
        out = self.unresolved_cofactor
        for p, e in self.resolved:
            out *= p ** e
        return out


def _brent(n, budget: FactorBudget, rng: random.Random):
    """A nontrivial factor of the odd composite n, or None if the budget runs out."""
    n = gmpy2.mpz(n)
    remaining = budget.rho_iterations
    batch = 128
    for _ in range(budget.restarts):
        if remaining <= 0:
            return None
        y = gmpy2.mpz(rng.randrange(1, int(n)))
        c = gmpy2.mpz(rng.randrange(1, int(n) - 1))
        g = r = q = gmpy2.mpz(1)
        x = ys = y
        while g == 1 and remaining > 0:
            x = y
            for _ in range(int(r)):
                y = (y * y + c) % n
            remaining -= int(r)
            k = 0
            while k < r and g == 1:
                ys = y
                steps = int(min(batch, r - k))
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gmpy2.gcd(q, n)
                k += steps
                remaining -= steps
            r *= 2
        if g == n:
            # the batch overshot; walk it back one step at a time
            while True:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
                if g > 1:
                    break
        if 1 < g < n:
            return int(g)
    return None


@lru_cache(maxsize=4)
def _trial_primes(bound: int) -> tuple[int, ...]:
    return tuple(int(p) for p in _base_primes(bound))


def largest_prime_factor(n: int, budget: FactorBudget | None = None) -> FactorReport:
    """Factor n as far as the budget allows and report P(n).

    P(0) = P(1) = P(-1) = 1.  If a composite cofactor resists factoring, the
    report says P(n) >= (largest resolved prime) and keeps the cofactor.
    """
    budget = budget or FactorBudget()
    n = int(n)
    sign = (n > 0) - (n < 0)
    m = abs(n)
    if m <= 1:
        return FactorReport(n, sign, ())
    found: dict[int, int] = {}
    for p in _trial_primes(budget.trial_bound):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    unresolved = 1
    stack = [m] if m > 1 else []
    rng = random.Random(f"rho:{budget.seed}:{n}")
    while stack:
        c = stack.pop()
        if c < budget.trial_bound ** 2 or is_probable_prime(c, budget.mr_rounds, budget.seed):
            # every prime factor of c exceeds the trial bound, so c < bound^2 means c is prime
            found[c] = found.get(c, 0) + 1
            continue
        root, exact = gmpy2.iroot(gmpy2.mpz(c), 2)
        if exact:
            stack.extend([int(root), int(root)])
            continue
        f = _brent(c, budget, rng)
        if f is None:
            unresolved *= c
        else:
            stack.extend([f, c // f])
    resolved = tuple(sorted(found.items()))
    lpf = max(found) if found else 1
    return FactorReport(n, sign, resolved, unresolved, lpf, unresolved == 1)


def valuation(n: int, ell: int) -> int:
    """Largest e with ell^e | n."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    _, e = gmpy2.remove(gmpy2.mpz(n), ell)
    return int(e)
