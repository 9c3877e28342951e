"""Exact truncated power series with integer coefficients.

Series are plain Python lists ``s`` with ``s[i]`` the coefficient of ``q**i``.
Dense products go through Kronecker substitution: both operands are packed
into one big integer each, multiplied by GMP, and unpacked.  This is exact and
runs in essentially linear time, which is what makes tables of 10**6 or more
coefficients practical.
"""

from __future__ import annotations

from math import isqrt

import gmpy2
import numpy as np


def _digit_offset(nbytes: int, count: int) -> gmpy2.mpz:
    half = 1 << (8 * nbytes - 1)
    return gmpy2.mpz(int.from_bytes(half.to_bytes(nbytes, "little") * count, "little"))


def _pack(coeffs: list[int], nbytes: int) -> gmpy2.mpz:
    # Shift every digit into [0, 2**(8*nbytes)) so the bytes concatenate without carries.
    half = 1 << (8 * nbytes - 1)
    buf = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(buf, "little")) - _digit_offset(nbytes, len(coeffs))


def _unpack(value: gmpy2.mpz, count: int, nbytes: int) -> list[int]:
    half = 1 << (8 * nbytes - 1)
    mask = (gmpy2.mpz(1) << (8 * nbytes * count)) - 1
    w = (value + _digit_offset(nbytes, count)) & mask
    buf = int(w).to_bytes(nbytes * count, "little")
    frombytes = int.from_bytes
    return [frombytes(buf[i:i + nbytes], "little") - half for i in range(0, nbytes * count, nbytes)]


def _max_abs(coeffs: list[int]) -> int:
    return max(max(coeffs), -min(coeffs))


def mul(a: list[int], b: list[int], n: int | None = None) -> list[int]:
    """Exact product of two integer series, truncated to ``n`` terms.

    ``n`` defaults to the full product length.
    """
    if not a or not b:
        return [0] * (n or 0)
    full = len(a) + len(b) - 1
    n = full if n is None else n
    a = a[:n]
    b = b[:n]
    ma, mb = _max_abs(a), _max_abs(b)
    if ma == 0 or mb == 0:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    nbytes = (bound.bit_length() + 1) // 8 + 1
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    return _unpack(prod, n, nbytes)


def mul_schoolbook(a: list[int], b: list[int], n: int) -> list[int]:
    """Quadratic-time product, used only to cross-check :func:`mul`."""
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j, bj in enumerate(b[: n - i]):
                out[i + j] += ai * bj
    return out


def eta_cubed(n: int) -> list[int]:
    """Coefficients of prod (1 - q^m)^3 below q^n (Jacobi's identity)."""
    s = [0] * n
    k = 0
    while k * (k + 1) // 2 < n:
        s[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return s


def pentagonal_terms(n: int) -> list[tuple[int, int]]:
    """Sparse (exponent, sign) list of prod (1 - q^m) below q^n.

    Euler's pentagonal number theorem: exponents k(3k-1)/2 for k in Z with
    sign (-1)^k.
    """
    terms = [(0, 1)]
    k = 1
    while k * (3 * k - 1) // 2 < n:
        sign = -1 if k % 2 else 1
        terms.append((k * (3 * k - 1) // 2, sign))
        e2 = k * (3 * k + 1) // 2
        if e2 < n:
            terms.append((e2, sign))
        k += 1
    return terms


def mul_sparse(dense: list[int], terms: list[tuple[int, int]], n: int) -> list[int]:
    """Multiply a dense series by a sparse one with +-1 coefficients."""
    arr = np.array(dense[:n] + [0] * max(0, n - len(dense)), dtype=object)
    out = np.zeros(n, dtype=object)
    for e, sign in terms:
        if e >= n:
            continue
        if sign > 0:
            out[e:] += arr[: n - e]
        else:
            out[e:] -= arr[: n - e]
    return [int(v) for v in out]


def delta_series_sparse(n: int) -> list[int]:
    """q * prod (1 - q^m)^24 below q^n by 24 sparse eta passes.

    Independent of :func:`delta_series`; slow, intended for n up to ~10**4.
    """
    if n <= 1:
        return [0] * n
    terms = pentagonal_terms(n - 1)
    s = [1] + [0] * (n - 2)
    for _ in range(24):
        s = mul_sparse(s, terms, n - 1)
    return [0] + s


def delta_series(n: int) -> list[int]:
    """q * prod (1 - q^m)^24 below q^n, as ((eta^3)^2)^2)^2 shifted by one."""
    if n <= 1:
        return [0] * n
    s = eta_cubed(n - 1)
    for _ in range(3):
        s = mul(s, s, n - 1)
    return [0] + s


def divisor_power_sums(n: int, power: int) -> list[int]:
    """sigma_power(m) for 0 <= m < n, with sigma(0) = 0."""
    out = np.zeros(n, dtype=object)
    if n <= 1:
        return [0] * n
    top = n - 1
    r = isqrt(top)
    powers = np.array([d ** power for d in range(top + 1)], dtype=object)
    # Pairs (d, m) with d*m <= top: small d by rows, then large d with small m.
    for d in range(1, r + 1):
        out[d::d] += powers[d]
    for m in range(1, r + 1):
        lo = r + 1
        hi = top // m
        if hi >= lo:
            out[m * lo: m * hi + 1: m] += powers[lo: hi + 1]
    return [int(v) for v in out]


def eisenstein_series(weight: int, n: int) -> list[int]:
    """E_4 or E_6 below q^n, normalized with constant term 1."""
    if weight == 4:
        scale, power = 240, 3
    elif weight == 6:
        scale, power = -504, 5
    else:
        raise ValueError(f"only E_4 and E_6 are built in, got weight {weight}")
    sig = divisor_power_sums(n, power)
    out = [scale * s for s in sig]
    if n:
        out[0] = 1
    return out
