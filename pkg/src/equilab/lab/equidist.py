"""Empirical joint distribution of (f_1(n), ..., f_K(n)) mod q over n <= x."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

import numpy as np

from ..families import NiceFamily, delta
from ..multfun import MultiplicativeFunction, residues_segment
from ..primes import DEFAULT_SEGMENT_WIDTH, check_budget, segments, sieve_primes

MAX_X = 10**9
MAX_CLASS_SPACE = 10**7


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    x: int
    q: int
    functions: tuple[MultiplicativeFunction, ...]
    targets: tuple[int, ...] | None = None  # None means every class
    segment_width: int = DEFAULT_SEGMENT_WIDTH
    threads: int = 1

    def __post_init__(self):
        if self.q % 2 == 0:
            raise ExperimentError("q must be odd (even q excluded)")
        if self.q < 3:
            raise ExperimentError("q must be >= 3")
        if self.x < self.q:
            raise ExperimentError("need x >= q")
        if self.x > MAX_X:
            raise ExperimentError(f"x <= {MAX_X} required")
        if not self.functions:
            raise ExperimentError("need at least one function")
        if self.targets is not None:
            if len(self.targets) != len(self.functions):
                raise ExperimentError("one target residue per function")
            if any(gcd(a, self.q) != 1 for a in self.targets):
                raise ExperimentError("targets must be coprime to q")
        if self.q ** len(self.functions) > MAX_CLASS_SPACE:
            raise ExperimentError(f"q**K exceeds {MAX_CLASS_SPACE} residue classes")
        if self.segment_width < 1 or self.threads < 1:
            raise ExperimentError("segment width and thread count must be positive")

    @property
    def K(self) -> int:
        return len(self.functions)

    @property
    def family(self) -> NiceFamily:
        return NiceFamily(tuple(f.F for f in self.functions), tuple(f.name for f in self.functions))

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "q": self.q,
            "functions": [f.to_json() for f in self.functions],
            "targets": list(self.targets) if self.targets is not None else "ALL",
            "segment_width": self.segment_width,
        }


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    counts: dict[tuple[int, ...], int]
    rhs_count: int
    stats: dict
    delta_q: Fraction
    notes: list[str] = field(default_factory=list)

    def class_sum_conserved(self) -> bool:
        return sum(self.counts.values()) == self.rhs_count

    def target_count(self) -> int | None:
        if self.config.targets is None:
            return None
        return self.counts.get(tuple(a % self.config.q for a in self.config.targets), 0)

    def to_json(self) -> dict:
        x, K, q = self.config.x, self.config.K, self.config.q
        out = {
            "config": self.config.to_json(),
            "counts": {",".join(map(str, k)): v for k, v in sorted(self.counts.items()) if v},
            "rhs_count": self.rhs_count,
            "stats": self.stats,
            "delta_q": {"exact": str(self.delta_q), "value": float(self.delta_q)},
            "range": {"q": q, "log_x_pow_1_over_K": math.log(x) ** (1 / K)},
            "notes": list(self.notes),
        }
        if self.config.targets is not None:
            out["target"] = {"classes": list(self.config.targets), "count": self.target_count(),
                             "expected": self.rhs_count / len(self.counts)}
        return out

    def csv_rows(self) -> list[list]:
        mean = self.rhs_count / len(self.counts) if self.counts else 0.0
        rows = [["class", "count", "relative_deviation"]]
        for k, v in sorted(self.counts.items()):
            rows.append([",".join(map(str, k)), v, (v - mean) / mean if mean else ""])
        return rows


def uniformity_stats(counts: Sequence[int]) -> dict:
    c = np.asarray(counts, dtype=np.float64)
    total = int(np.sum(np.asarray(counts, dtype=np.int64)))
    n = len(c)
    if total == 0 or n == 0:
        return {"max_rel_dev": None, "tv_distance": None, "chi_square": None,
                "max_count": 0, "min_count": 0, "mean_count": 0.0, "classes": n}
    mean = total / n
    dev = c - mean
    return {
        "max_rel_dev": float(np.max(np.abs(dev)) / mean),
        "tv_distance": math.fsum((np.abs(c / total - 1.0 / n)).tolist()) / 2,
        "chi_square": math.fsum((dev * dev / mean).tolist()),
        "max_count": int(max(counts)),
        "min_count": int(min(counts)),
        "mean_count": mean,
        "classes": n,
    }


def _segment_histogram(functions, q, a, b, base, unit_table, space):
    res = residues_segment(functions, a, b, q, base)
    ok = np.all(unit_table[res], axis=0)
    idx = np.zeros(b - a, dtype=np.int64)
    for k in range(len(functions) - 1, -1, -1):
        idx = idx * q + res[k]
    return np.bincount(idx[ok], minlength=space)


def joint_distribution(config: ExperimentConfig) -> ExperimentReport:
    """Bin each n <= x with every f_k(n) a unit mod q by its class tuple.

    [1, x] is cut into a fixed list of segments independent of the thread
    count; each segment yields an integer histogram and the histograms are
    added in segment order, so results do not depend on ``threads``.
    """
    q, K, x = config.q, config.K, config.x
    config.family  # raises unless the polynomials form a nice family
    space = q**K
    check_budget(min(config.segment_width, x) * max(config.threads, 1), 8 * (K + 4), "joint distribution")
    base = sieve_primes(isqrt(x))
    unit_table = np.gcd(np.arange(q), q) == 1
    blocks = segments(1, x + 1, config.segment_width)

    def work(block):
        return _segment_histogram(config.functions, q, block[0], block[1], base, unit_table, space)

    hist = np.zeros(space, dtype=np.int64)
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            for h in pool.map(work, blocks):
                hist += h
    else:
        for block in blocks:
            hist += work(block)

    unit_res = np.flatnonzero(unit_table).tolist()
    counts = {}
    for cls in itertools.product(unit_res, repeat=K):
        i = 0
        for r in reversed(cls):
            i = i * q + r
        counts[cls] = int(hist[i])
    # every n with all f_k(n) units lands in exactly one unit class, so this
    # total is the full right-hand count
    rhs = int(hist.sum())
    stats = uniformity_stats(list(counts.values()))
    notes = []
    lim = math.log(x) ** (1 / K)
    if q > lim:
        notes.append(f"q={q} exceeds (log x)^(1/K)={lim:.3f}: outside the asymptotic range")
    if stats["mean_count"] and stats["mean_count"] < 100:
        notes.append("mean class count below 100; statistics are noisy")
    return ExperimentReport(config, counts, rhs, stats, delta(q), notes)


def direct_counts(config: ExperimentConfig) -> dict[tuple[int, ...], int]:
    """Reference implementation: evaluate each f_k(n) exactly by trial division."""
    from ..primes import factorize_small

    q = config.q
    out: dict[tuple[int, ...], int] = {}
    for n in range(1, config.x + 1):
        fac = factorize_small(n)
        vals = []
        for f in config.functions:
            v = 1
            for p, e in fac.items():
                v *= f.prime_power_value(p, e)
            vals.append(v)
        if all(gcd(v, q) == 1 for v in vals):
            key = tuple(v % q for v in vals)
            out[key] = out.get(key, 0) + 1
    return out
