"""Sieved arithmetic tables and Chebyshev psi sums.

One build pass produces, for all n <= bound: the von Mangoldt weight Lambda(n),
the smallest prime factor, the Euler totient, and the Moebius function, plus
compact ascending arrays of primes and prime powers. The compact prime-power
arrays are what every downstream Lambda-weighted sum iterates over.

For arguments beyond the table capacity there are streaming variants of psi
and psi_mod that sieve fixed-size segments and never materialize full tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .accum import Accumulator, fsum_array

#: Hard cap on table construction; beyond this use the streaming functions.
#: At the cap the tables occupy roughly 650 MB.
MAX_TABLE_BOUND = 30_000_000

#: Segment length for the streaming sieve.
STREAM_SEGMENT = 1 << 20


class CapacityError(MemoryError):
    """Requested table bound exceeds the documented memory capacity."""


@dataclass(frozen=True)
class ArithmeticTables:
    """Immutable sieved tables on [0, bound]."""

    bound: int
    lam: np.ndarray              # float64; lam[n] = log p if n = p^v else 0.0
    spf: np.ndarray              # int32; smallest prime factor, 0 for n < 2
    phi: np.ndarray              # int64; Euler totient, phi[0] = 0
    mu: np.ndarray               # int8; Moebius function, mu[0] = 0
    primes: np.ndarray           # int64; ascending primes <= bound
    prime_powers: np.ndarray     # int64; ascending n with lam[n] > 0
    prime_power_logs: np.ndarray  # float64; lam at prime_powers


def build_tables(bound: int) -> ArithmeticTables:
    """Sieve all tables up to bound (inclusive).

    Runs in O(bound log log bound) array operations. Raises CapacityError when
    bound exceeds MAX_TABLE_BOUND and ValueError when bound < 2.
    """
    if bound < 2:
        raise ValueError(f"table bound must be >= 2, got {bound}")
    if bound > MAX_TABLE_BOUND:
        raise CapacityError(
            f"bound {bound} exceeds table capacity {MAX_TABLE_BOUND}; "
            "use psi_stream / psi_mod_stream for large arguments"
        )
    n = bound + 1

    # Smallest prime factor: composites are covered by primes <= sqrt(bound);
    # whatever stays unmarked past index 1 is prime.
    spf = np.zeros(n, dtype=np.int32)
    for p in range(2, isqrt(bound) + 1):
        if spf[p] == 0:
            view = spf[p * p:: p]
            view[view == 0] = p
    unmarked = spf == 0
    unmarked[:2] = False
    prime_idx = np.nonzero(unmarked)[0]
    spf[prime_idx] = prime_idx.astype(np.int32)
    primes = prime_idx.astype(np.int64)

    # von Mangoldt: log p at every prime, then at every higher prime power.
    lam = np.zeros(n, dtype=np.float64)
    lam[primes] = np.log(primes.astype(np.float64))
    for p in primes[primes <= isqrt(bound)].tolist():
        logp = math.log(p)
        pv = p * p
        while pv <= bound:
            lam[pv] = logp
            pv *= p

    # Totient and Moebius by one slice pass per prime. Primes above bound/2
    # only touch themselves, so they are handled in one vectorized step.
    phi = np.arange(n, dtype=np.int64)
    mu = np.ones(n, dtype=np.int8)
    half = bound // 2
    for p in primes[primes <= half].tolist():
        view = phi[p::p]
        view -= view // p
        mu[p::p] *= -1
    big = primes[primes > half]
    phi[big] = big - 1
    mu[big] = -1
    for p in primes[primes <= isqrt(bound)].tolist():
        mu[p * p:: p * p] = 0
    phi[0] = 0
    mu[0] = 0

    pp = np.nonzero(lam > 0.0)[0].astype(np.int64)
    pp_logs = lam[pp].copy()

    for arr in (lam, spf, phi, mu, primes, pp, pp_logs):
        arr.flags.writeable = False
    return ArithmeticTables(
        bound=bound, lam=lam, spf=spf, phi=phi, mu=mu,
        primes=primes, prime_powers=pp, prime_power_logs=pp_logs,
    )


def _check_x(tables: ArithmeticTables, x: float) -> int:
    if not 1 <= x <= tables.bound:
        raise ValueError(f"x must satisfy 1 <= x <= {tables.bound}, got {x}")
    return int(math.floor(x))


def psi(tables: ArithmeticTables, x: float) -> float:
    """Chebyshev psi(x) = sum of Lambda(n) over n <= x, exactly summed."""
    xf = _check_x(tables, x)
    count = int(np.searchsorted(tables.prime_powers, xf, side="right"))
    return fsum_array(tables.prime_power_logs[:count])


def psi_mod(tables: ArithmeticTables, x: float, q: int, a: int) -> float:
    """psi(x; q, a) = sum of Lambda(n) over n <= x with n congruent to a mod q."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if not 0 <= a < q:
        raise ValueError(f"residue must satisfy 0 <= a < q, got a={a}, q={q}")
    xf = _check_x(tables, x)
    count = int(np.searchsorted(tables.prime_powers, xf, side="right"))
    pp = tables.prime_powers[:count]
    sel = tables.prime_power_logs[:count][pp % q == a]
    return fsum_array(sel)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending. Plain trial-division factorize."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    divs = [1]
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            divs = [d * p**k for d in divs for k in range(e + 1)]
        p += 1 if p == 2 else 2
    if m > 1:
        divs = [d * m**k for d in divs for k in range(2)]
    return sorted(divs)


def totient(n: int) -> int:
    """Euler totient by trial division; exact for any positive int."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out -= out // m
    return out


def mobius(n: int) -> int:
    """Moebius function by trial division."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sign = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1 if p == 2 else 2
    if m > 1:
        sign = -sign
    return sign


def _small_primes(limit: int) -> np.ndarray:
    """Boolean-sieve primes up to limit (inclusive)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def _stream_core(x: float, residue: tuple[int, int] | None,
                 segment: int) -> float:
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    xi = int(math.floor(x))
    if xi < 2:
        return 0.0
    base = _small_primes(isqrt(xi))
    base_list = base.tolist()

    def keep(n: int) -> bool:
        return residue is None or n % residue[0] == residue[1]

    chunk_sums: list[float] = []
    lo = 2
    while lo <= xi:
        hi = min(lo + segment, xi + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base_list:
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo:: p] = False
        found = np.nonzero(flags)[0] + lo
        # Base primes below sqrt(x) land in the first segments and are kept:
        # marking starts at p*p, so p itself is never struck.
        if residue is not None:
            q, a = residue
            found = found[found % q == a]
        if found.size:
            chunk_sums.append(fsum_array(np.log(found.astype(np.float64))))
        lo = hi

    power_acc = Accumulator()
    for p in base_list:
        logp = math.log(p)
        pv = p * p
        while pv <= xi:
            if keep(pv):
                power_acc.add(logp)
            pv *= p
    chunk_sums.append(power_acc.value)
    return math.fsum(chunk_sums)


def psi_stream(x: float, *, segment: int = STREAM_SEGMENT) -> float:
    """Chebyshev psi(x) without tables; memory stays O(segment + sqrt(x))."""
    return _stream_core(x, None, segment)


def psi_mod_stream(x: float, q: int, a: int, *,
                   segment: int = STREAM_SEGMENT) -> float:
    """psi(x; q, a) without tables, same contract as psi_mod."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if not 0 <= a < q:
        raise ValueError(f"residue must satisfy 0 <= a < q, got a={a}, q={q}")
    return _stream_core(x, (q, a), segment)
