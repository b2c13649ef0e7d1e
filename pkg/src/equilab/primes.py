"""Prime generation, trial-division factoring and the segmented factor sieve."""

from __future__ import annotations

import os
from math import isqrt

import numpy as np

DEFAULT_SEGMENT_WIDTH = 1 << 22
DEFAULT_MEM_MB = 2048


class MemoryBudgetError(RuntimeError):
    pass


def memory_budget_bytes() -> int:
    mb = os.environ.get("EQUILAB_MEM_MB")
    return int(float(mb) * (1 << 20)) if mb else DEFAULT_MEM_MB * (1 << 20)


def check_budget(n_entries: int, bytes_per_entry: int, what: str) -> None:
    budget = memory_budget_bytes()
    need = n_entries * bytes_per_entry
    if need > budget:
        width = max(1, budget // bytes_per_entry)
        raise MemoryBudgetError(
            f"{what}: {n_entries} entries need ~{need >> 20} MiB, budget is {budget >> 20} MiB "
            f"(EQUILAB_MEM_MB); use a segment width of at most {width}"
        )


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit as int64."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def primes_segment(lo: int, hi: int, base: np.ndarray | None = None) -> np.ndarray:
    """Primes in [lo, hi)."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    if base is None:
        base = sieve_primes(isqrt(hi - 1))
    mark = np.ones(hi - lo, dtype=bool)
    for p in base.tolist():
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        mark[start - lo :: p] = False
    return np.flatnonzero(mark).astype(np.int64) + lo


def iter_prime_segments(lo: int, hi: int, width: int = DEFAULT_SEGMENT_WIDTH):
    base = sieve_primes(isqrt(max(hi - 1, 1)))
    for a in range(max(lo, 2), hi, width):
        yield primes_segment(a, min(a + width, hi), base)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi) as a Python list."""
    out: list[int] = []
    for seg in iter_prime_segments(lo, hi):
        out.extend(seg.tolist())
    return out


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize_small(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for n up to ~1e12."""
    if n < 1:
        raise ValueError("factorize_small needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def segments(lo: int, hi: int, width: int) -> list[tuple[int, int]]:
    """Fixed partition of [lo, hi) into half-open blocks of the given width."""
    if width < 1:
        raise ValueError("segment width must be positive")
    return [(a, min(a + width, hi)) for a in range(lo, hi, width)]


class SegmentFactorizer:
    """Factor every n in [lo, hi) against base primes <= sqrt(hi - 1).

    ``parts()`` yields ``(p, idx, e)`` for each base prime p: ``idx`` indexes the
    multiples of p within the segment and ``e`` is the exact exponent of p in
    each.  After ``parts()`` is exhausted ``cofactor`` holds, for each n, the
    part of n left over: 1 or a single prime exceeding sqrt(hi - 1).
    """

    BYTES_PER_ENTRY = 40

    def __init__(self, lo: int, hi: int, base: np.ndarray | None = None):
        if lo < 1 or hi <= lo:
            raise ValueError(f"empty or invalid segment [{lo}, {hi})")
        check_budget(hi - lo, self.BYTES_PER_ENTRY, "segment factor sieve")
        self.lo, self.hi = lo, hi
        if base is None:
            base = sieve_primes(isqrt(hi - 1))
        self.base = base
        self.cofactor = np.arange(lo, hi, dtype=np.int64)

    def __len__(self) -> int:
        return self.hi - self.lo

    def parts(self):
        lo, hi, n = self.lo, self.hi, self.hi - self.lo
        cof = self.cofactor
        for p in self.base.tolist():
            if p * p > hi - 1:
                break
            start = (-lo) % p
            if start >= n:
                continue
            idx = np.arange(start, n, p)
            e = np.ones(len(idx), dtype=np.int64)
            pk = p * p
            while pk < hi:
                s = (-lo) % pk
                if s >= n:
                    break
                e[(np.arange(s, n, pk) - start) // p] += 1
                pk *= p
            cof[idx] //= np.power(p, e)
            yield p, idx, e
