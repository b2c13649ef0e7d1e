"""Finite checks of the sieve lemmas and the range-limit construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from math import gcd, isqrt
from typing import Mapping

import mpmath
import numpy as np

from ..families import NiceFamily, delta
from ..multfun import ProductFunction, residues_segment
from ..polynomials import IntPolynomial, eval_mod_array
from ..primes import (DEFAULT_SEGMENT_WIDTH, check_budget, is_prime, iter_prime_segments,
                      segments, sieve_primes)

COPRIME_MAX_X = 10**8
SIFT_MAX_X = 10**9


class LemmaError(ValueError):
    pass


def fraction_product(terms: list[Fraction]) -> Fraction:
    """Exact product by pairwise reduction, keeping operand sizes balanced."""
    if not terms:
        return Fraction(1)
    nums = [t.numerator for t in terms]
    dens = [t.denominator for t in terms]
    while len(nums) > 1:
        nums = [nums[i] * nums[i + 1] if i + 1 < len(nums) else nums[i] for i in range(0, len(nums), 2)]
        dens = [dens[i] * dens[i + 1] if i + 1 < len(dens) else dens[i] for i in range(0, len(dens), 2)]
    return Fraction(nums[0], dens[0])


def flagged_primes(F: IntPolynomial, q: int, x: int) -> list[int]:
    """Primes p <= x with gcd(F(p), q) > 1."""
    out: list[int] = []
    for seg in iter_prime_segments(2, x + 1):
        vals = eval_mod_array(F, seg, q)
        out.extend(seg[np.gcd(vals, q) > 1].tolist())
    return out


def _as_function(f):
    if isinstance(f, NiceFamily):
        raise LemmaError("pass a multiplicative function or a ProductFunction, not a bare family")
    if isinstance(f, (list, tuple)):
        return ProductFunction(tuple(f))
    return f


# -- coprime values -------------------------------------------------------------------


@dataclass
class CoprimeLowerResult:
    x: int
    q: int
    count: int
    bound: Fraction
    flagged_primes: int
    status: str  # "pass" or "flag"
    delta_q: Fraction
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "x": self.x, "q": self.q, "count": self.count,
            "bound": float(self.bound), "bound_exact_floor": self.bound.numerator // self.bound.denominator,
            "ratio": self.count / float(self.bound) if self.bound else None,
            "flagged_primes": self.flagged_primes, "status": self.status,
            "delta_q": str(self.delta_q), "notes": self.notes,
        }


def coprime_lower_bound_check(x: int, q: int, f, segment_width: int = DEFAULT_SEGMENT_WIDTH,
                              threads: int = 1) -> CoprimeLowerResult:
    """Count n <= x with gcd(f(n), q) = 1 against x/20 * prod (1 - 1/p) over flagged p <= x.

    The inequality is only promised for large x and nearly prime q, so a
    shortfall is reported as a flag, never as a failure.
    """
    f = _as_function(f)
    if x < 1 or x > COPRIME_MAX_X:
        raise LemmaError(f"need 1 <= x <= {COPRIME_MAX_X}")
    if q < 3 or q % 2 == 0:
        raise LemmaError("q must be odd and >= 3")
    base = sieve_primes(isqrt(x))
    check_budget(min(segment_width, x), 8 * 4, "coprime count")
    unit = np.gcd(np.arange(q), q) == 1

    def work(block):
        res = residues_segment((f,), block[0], block[1], q, base)[0]
        return int(np.count_nonzero(unit[res]))

    blocks = segments(1, x + 1, segment_width)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            count = sum(pool.map(work, blocks))
    else:
        count = sum(work(b) for b in blocks)
    flagged = flagged_primes(f.F, q, x)
    prod = fraction_product([Fraction(p - 1, p) for p in flagged])
    bound = Fraction(x, 20) * prod
    status = "pass" if count >= bound else "flag"
    notes = []
    d = delta(q)
    if d > Fraction(1, 4):
        notes.append(f"delta(q) = {d} is large; outside the regime where the lower bound is promised")
    if status == "flag":
        notes.append("count below the lower bound at this x; the bound holds only eventually")
    return CoprimeLowerResult(x, q, count, bound, len(flagged), status, d, notes)


def remark_b_product(x: int, q: int, fam, dps: int = 40) -> mpmath.mpf:
    """Sum of 1/p over primes p <= x with gcd(f(p), q) > 1, f the product of the family."""
    if x > COPRIME_MAX_X:
        raise LemmaError(f"need x <= {COPRIME_MAX_X}")
    polys = tuple(getattr(fam, "polys", fam))
    F = IntPolynomial((1,))
    for P in polys:
        F = F * getattr(P, "F", P)
    primes = flagged_primes(F, q, x)
    with mpmath.workdps(dps):
        return +mpmath.fsum(mpmath.mpf(1) / p for p in primes)


# -- sifted interval ------------------------------------------------------------------


@dataclass
class SiftResult:
    u: int
    v: int
    Z: int
    count: int
    main_term: float
    relative_error: float
    error_scale: float
    within_scale: bool

    def to_json(self) -> dict:
        return asdict(self)


def sifted_interval_count(u: int, v: int, residue_choices: Mapping[int, int], Z: int | None = None,
                          segment_width: int = DEFAULT_SEGMENT_WIDTH) -> SiftResult:
    """Integers in (u, v] avoiding a_p mod p for every chosen prime p."""
    X = v - u
    choices = {int(p): int(a) % int(p) for p, a in residue_choices.items()}
    for p in choices:
        if not is_prime(p):
            raise LemmaError(f"{p} is not prime")
    if Z is None:
        Z = max([3, *choices])
    if not X >= Z >= 3:
        raise LemmaError(f"need v - u >= Z >= 3 (got X={X}, Z={Z})")
    if any(p > Z for p in choices):
        raise LemmaError(f"all primes must be <= Z={Z}")
    if X > SIFT_MAX_X:
        raise LemmaError(f"interval longer than {SIFT_MAX_X}")
    check_budget(min(segment_width, X), 1, "sifted interval")
    count = 0
    for a, b in segments(u + 1, v + 1, segment_width):
        keep = np.ones(b - a, dtype=bool)
        for p, r in choices.items():
            keep[(r - a) % p :: p] = False
        count += int(np.count_nonzero(keep))
    main = Fraction(X) * fraction_product([Fraction(p - 1, p) for p in choices])
    rel = float(Fraction(count) / main - 1) if main else math.inf
    scale = math.exp(-0.5 * math.log(X) / math.log(Z))
    return SiftResult(u, v, Z, count, float(main), rel, scale, abs(rel) <= scale)


# -- range limit ----------------------------------------------------------------------


@dataclass
class RangeLimitResult:
    x: int
    K: int
    p0: int
    X: float
    p: int
    candidates: list
    lower_count: int
    threshold: Fraction
    passed: bool
    residues: list

    def to_json(self) -> dict:
        return {
            "x": self.x, "K": self.K, "p0": self.p0, "X": self.X, "p": self.p,
            "candidates": self.candidates, "lower_count": self.lower_count,
            "threshold": float(self.threshold), "pass": self.passed,
            "residues_mod_p": self.residues,
        }


def range_limit_interval(x: int, K: int) -> tuple[float, list[int]]:
    if K < 2:
        raise LemmaError("construction requires K >= 2")
    X = 2 * math.log(x) ** (1 / (K - 1))
    lo = 2 * X / 3
    return X, [p for p in range(math.floor(lo) + 1, math.floor(X) + 1) if is_prime(p) and p > lo]


def range_limit_demo(x: int, fam, p0: int, p: int | None = None) -> RangeLimitResult:
    """Primes n <= x with n = p0 mod p all share the class (F_k(p0) mod p)_k.

    Their number is compared with 4x / (3 p**K), far more than a uniform
    share of the coprime classes mod p.
    """
    polys = tuple(getattr(fam, "polys", fam))
    K = len(polys)
    X, cands = range_limit_interval(x, K)
    if not is_prime(p0):
        raise LemmaError(f"p0={p0} is not prime")
    vals = [F(p0) for F in polys]
    if any(v == 0 for v in vals):
        raise LemmaError(f"some F_k(p0) = 0 at p0={p0}")
    if not cands:
        raise LemmaError(f"no prime in ({2 * X / 3:.4f}, {X:.4f}]")
    ok = [r for r in cands if all(gcd(v, r) == 1 for v in vals)]
    if p is None:
        if not ok:
            raise LemmaError(f"every prime in ({2 * X / 3:.4f}, {X:.4f}] divides some F_k(p0)")
        p = ok[0]
    else:
        if p not in cands:
            raise LemmaError(f"p={p} is not a prime in ({2 * X / 3:.4f}, {X:.4f}]; candidates {cands}")
        if p not in ok:
            raise LemmaError(f"p={p} divides some F_k(p0)")
    r = p0 % p
    count = 0
    for seg in iter_prime_segments(2, x + 1):
        count += int(np.count_nonzero(seg % p == r))
    threshold = Fraction(4 * x, 3 * p**K)
    return RangeLimitResult(x, K, p0, X, p, cands, count, threshold, count >= threshold,
                            [v % p for v in vals])
