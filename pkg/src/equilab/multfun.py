"""Polynomial-like multiplicative functions evaluated over sieved ranges."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt, log
from typing import Sequence

import numpy as np

from .polynomials import IntPolynomial, eval_mod_array
from .primes import SegmentFactorizer, check_budget, segments, sieve_primes


class PrimePowerRule(str, enum.Enum):
    COMPLETELY_MULT = "completely_multiplicative"
    EULER_PHI = "euler_phi"
    SIGMA = "sigma"
    IDENTITY = "identity"


_FORCED_POLY = {
    PrimePowerRule.EULER_PHI: IntPolynomial((-1, 1)),
    PrimePowerRule.SIGMA: IntPolynomial((1, 1)),
    PrimePowerRule.IDENTITY: IntPolynomial((0, 1)),
}

PRESET_RULES = {
    "id": PrimePowerRule.IDENTITY,
    "phi": PrimePowerRule.EULER_PHI,
    "sigma": PrimePowerRule.SIGMA,
}


@dataclass(frozen=True)
class MultiplicativeFunction:
    """Multiplicative f with f(p) = F(p) and an explicit rule for f(p**e)."""

    F: IntPolynomial
    rule: PrimePowerRule
    name: str = ""

    def __post_init__(self):
        forced = _FORCED_POLY.get(self.rule)
        if forced is not None and forced != self.F:
            raise ValueError(f"rule {self.rule.value} requires F = {forced}, got {self.F}")

    @classmethod
    def preset(cls, name: str) -> "MultiplicativeFunction":
        rule = PRESET_RULES[name]
        return cls(_FORCED_POLY[rule], rule, name)

    @classmethod
    def completely_multiplicative(cls, F: IntPolynomial, name: str = "") -> "MultiplicativeFunction":
        return cls(F, PrimePowerRule.COMPLETELY_MULT, name)

    def prime_power_value(self, p: int, e: int) -> int:
        if e == 0:
            return 1
        if self.rule is PrimePowerRule.COMPLETELY_MULT:
            return self.F(p) ** e
        if self.rule is PrimePowerRule.EULER_PHI:
            return p ** (e - 1) * (p - 1)
        if self.rule is PrimePowerRule.SIGMA:
            return (p ** (e + 1) - 1) // (p - 1)
        return p**e

    def prime_power_mod(self, p: int, e: int, q: int) -> int:
        if e == 0:
            return 1 % q
        if self.rule is PrimePowerRule.COMPLETELY_MULT:
            return pow(self.F(p) % q, e, q)
        if self.rule is PrimePowerRule.EULER_PHI:
            return pow(p, e - 1, q) * (p - 1) % q
        if self.rule is PrimePowerRule.SIGMA:
            acc, pi = 0, 1
            for _ in range(e + 1):
                acc = (acc + pi) % q
                pi = pi * p % q
            return acc
        return pow(p, e, q)

    def to_json(self) -> dict:
        return {"name": self.name, "poly": self.F.to_list(), "rule": self.rule.value}


@dataclass(frozen=True)
class ProductFunction:
    """Pointwise product f_1 * ... * f_K, itself polynomial-like multiplicative."""

    factors: tuple[MultiplicativeFunction, ...]

    @property
    def F(self) -> IntPolynomial:
        out = IntPolynomial((1,))
        for f in self.factors:
            out = out * f.F
        return out

    def prime_power_value(self, p: int, e: int) -> int:
        out = 1
        for f in self.factors:
            out *= f.prime_power_value(p, e)
        return out

    def prime_power_mod(self, p: int, e: int, q: int) -> int:
        out = 1 % q
        for f in self.factors:
            out = out * f.prime_power_mod(p, e, q) % q
        return out

    def to_json(self) -> dict:
        return {"product_of": [f.to_json() for f in self.factors]}


# -- smallest prime factor tables ---------------------------------------------


@dataclass(frozen=True, eq=False)
class SpfTable:
    lo: int
    hi: int
    spf: np.ndarray
    base: np.ndarray

    def __contains__(self, n: int) -> bool:
        return self.lo <= n < self.hi

    def __getitem__(self, n: int) -> int:
        if n not in self:
            raise KeyError(f"{n} outside table range [{self.lo}, {self.hi})")
        return int(self.spf[n - self.lo])

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n (n = 1 or lo <= n < hi) as (p, e) pairs."""
        if n == 1:
            return []
        if n not in self:
            raise ValueError(f"{n} outside table range [{self.lo}, {self.hi})")
        out: list[tuple[int, int]] = []
        p = self[n]
        base = self.base.tolist()
        k = 0
        while n > 1:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
            if n == 1:
                break
            if n in self:
                p = self[n]
                continue
            # cofactor below the table: continue by trial division from p upward
            while k < len(base) and base[k] <= p:
                k += 1
            nxt = None
            while k < len(base) and base[k] * base[k] <= n:
                if n % base[k] == 0:
                    nxt = base[k]
                    break
                k += 1
            p = nxt if nxt is not None else n
        return out


def build_spf(lo: int, hi: int) -> SpfTable:
    if not (2 <= lo < hi):
        raise ValueError(f"build_spf needs 2 <= lo < hi, got [{lo}, {hi})")
    if hi > 10**9 + 1:
        raise ValueError("build_spf supports hi <= 1e9")
    check_budget(hi - lo, 8, "spf table")
    base = sieve_primes(isqrt(hi - 1))
    spf = np.zeros(hi - lo, dtype=np.int64)
    for p in base.tolist():
        start = max(p * p, -(-lo // p) * p) - lo
        if start >= hi - lo:
            continue
        view = spf[start::p]
        view[view == 0] = p
    rest = spf == 0
    spf[rest] = np.arange(lo, hi, dtype=np.int64)[rest]
    return SpfTable(lo, hi, spf, base)


def evaluate(f, n: int, table: SpfTable) -> int:
    out = 1
    for p, e in table.factorize(n):
        out *= f.prime_power_value(p, e)
    return out


def prime_factors_desc(n: int, table: SpfTable) -> list[int]:
    out = []
    for p, e in table.factorize(n):
        out.extend([p] * e)
    out.sort(reverse=True)
    return out


def jth_largest_prime_factor(n: int, j: int, table: SpfTable | None = None) -> int:
    if n < 1 or j < 1:
        raise ValueError("need n >= 1 and j >= 1")
    if n == 1:
        return 1
    if table is None:
        table = build_spf(2, n + 1)
    factors = prime_factors_desc(n, table)
    return factors[j - 1] if j <= len(factors) else 1


# -- segment kernels --------------------------------------------------------


def residues_segment(functions: Sequence, lo: int, hi: int, q: int,
                     base: np.ndarray | None = None) -> np.ndarray:
    """f_k(n) mod q for every n in [lo, hi); shape (K, hi - lo).

    Values are built from prime-power parts reduced mod q, so f_k(n) itself
    is never formed.
    """
    fac = SegmentFactorizer(lo, hi, base)
    K = len(functions)
    acc = np.full((K, hi - lo), 1 % q, dtype=np.int64)
    for p, idx, e in fac.parts():
        emax = int(e.max())
        for k, f in enumerate(functions):
            tab = np.array([f.prime_power_mod(p, j, q) for j in range(emax + 1)], dtype=np.int64)
            acc[k, idx] = acc[k, idx] * tab[e] % q
    big = np.flatnonzero(fac.cofactor > 1)
    if len(big):
        primes = fac.cofactor[big]
        for k, f in enumerate(functions):
            acc[k, big] = acc[k, big] * eval_mod_array(f.F, primes, q) % q
    return acc


def big_omega_above_segment(lo: int, hi: int, y: int, base: np.ndarray | None = None) -> np.ndarray:
    """Number of prime factors > y (with multiplicity) of each n in [lo, hi)."""
    fac = SegmentFactorizer(lo, hi, base)
    out = np.zeros(hi - lo, dtype=np.int64)
    for p, idx, e in fac.parts():
        if p > y:
            out[idx] += e
    out += fac.cofactor > y
    return out


@dataclass(frozen=True)
class SemismoothResult:
    x: int
    y: int
    J: int
    count: int
    scale: float
    ratio: float

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "J": self.J, "count": self.count,
                "scale": self.scale, "ratio": self.ratio}


def semismooth_count(x: int, y: int, J: int, segment_width: int = 1 << 22,
                     executor=None) -> SemismoothResult:
    """Count n <= x whose J-th largest prime factor is at most y.

    P_J^+(n) <= y exactly when fewer than J prime factors of n (with
    multiplicity) exceed y.  ``ratio`` divides the count by
    x * (log y / log x) * (log log x)**(J - 1).
    """
    if not (10 <= y <= x) or J < 2 or x > 10**8:
        raise ValueError("semismooth_count needs 10 <= y <= x <= 1e8 and J >= 2")
    base = sieve_primes(isqrt(x))
    blocks = segments(1, x + 1, segment_width)

    def work(block):
        a, b = block
        return int(np.count_nonzero(big_omega_above_segment(a, b, y, base) < J))

    mapped = executor.map(work, blocks) if executor is not None else map(work, blocks)
    count = sum(mapped)
    scale = x * (log(y) / log(x)) * log(log(x)) ** (J - 1)
    return SemismoothResult(x, y, J, count, scale, count / scale)
