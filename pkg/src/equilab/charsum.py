"""Complete multiplicative character sums of polynomials and bound audits.

Every sum is first accumulated as an exact phase histogram: h[j] counts the
x whose summand equals exp(2*pi*i*j/N).  Only then is the complex value
formed, with a tracked rounding budget of (number of terms) * 2**-50.  When a
bound is exactly zero the histogram is tested for vanishing exactly, by
reducing it modulo the N-th cyclotomic polynomial.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import lcm, prod
from operator import mul
from typing import Iterable, Mapping, Sequence

import numpy as np

from .chargroup import CharacterTuple, DirichletCharacter, PrimePowerModulus, character, compose_tuple
from .polynomials import (
    IntPolynomial,
    ModPRoot,
    derivative,
    discriminant,
    divmod_monic,
    eval_mod_array,
    gcd_mod_p,
    is_squarefree_over_Q,
    p_content_valuation,
    roots_mod_p,
    squarefree_part_degree_mod_p,
)
from .primes import factorize_small, is_prime

ROUNDING_UNIT = 2.0**-50
BRUTE_FORCE_LIMIT = 10**7
_CHUNK = 1 << 20

SATISFIED = "satisfied"
VIOLATED = "violated"
HYPOTHESIS_NOT_ESTABLISHED = "hypothesis_not_established"
PRECONDITION_FAILED = "precondition_failed"


class CharsumError(ValueError):
    pass


class RoundingBudgetError(ArithmeticError):
    pass


# -- exact cyclotomic arithmetic -------------------------------------------------


@lru_cache(maxsize=256)
def cyclotomic(n: int) -> IntPolynomial:
    poly = IntPolynomial((-1,) + (0,) * (n - 1) + (1,))
    for d in range(1, n):
        if n % d == 0:
            poly, rem = divmod_monic(poly, cyclotomic(d))
            assert not rem
    return poly


def histogram_is_zero(hist: np.ndarray) -> bool:
    """Exact test that sum_j hist[j] * zeta_N**j == 0 with N = len(hist)."""
    N = len(hist)
    H = IntPolynomial(int(c) for c in hist)
    if not H:
        return True
    if N > 20000:
        raise RoundingBudgetError(f"exact zero test needs N <= 20000, got {N}")
    _, rem = divmod_monic(H, cyclotomic(N))
    return not rem


def histogram_value(hist: np.ndarray) -> complex:
    """sum_j hist[j] * exp(2*pi*i*j/N), summed with fsum in a fixed order."""
    N = len(hist)
    nz = np.flatnonzero(hist)
    if len(nz) == 0:
        return 0j
    ang = 2.0 * math.pi * nz / N
    w = hist[nz].astype(np.float64)
    re = math.fsum((w * np.cos(ang)).tolist())
    im = math.fsum((w * np.sin(ang)).tolist())
    return complex(re, im)


# -- results -----------------------------------------------------------------------


@dataclass
class CharSumResult:
    value: complex
    abs_value: float
    bound: float | None
    bound_name: str | None
    satisfied: bool | None
    rounding_budget: float
    status: str
    modulus: int = 0
    polys: list = field(default_factory=list)
    characters: object = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "polys": [P.to_list() if isinstance(P, IntPolynomial) else P for P in self.polys],
            "characters": self.characters,
            "abs_value": self.abs_value,
            "bound": self.bound,
            "bound_name": self.bound_name,
            "satisfied": self.satisfied,
            "rounding_budget": self.rounding_budget,
            "status": self.status,
            "details": self.details,
        }


def _judge(hist: np.ndarray, bound: float) -> tuple[complex, float, float, bool]:
    value = histogram_value(hist)
    budget = float(hist.sum()) * ROUNDING_UNIT
    a = abs(value)
    if bound == 0:
        ok = histogram_is_zero(hist)
        return (0j if ok else value), (0.0 if ok else a), budget, ok
    if budget >= 1e-6 * bound:
        raise RoundingBudgetError(
            f"rounding budget {budget:.3g} is not below 1e-6 * bound ({bound:.3g}); exact summation required"
        )
    return value, a, budget, a <= bound + budget


# -- the sum kernel -------------------------------------------------------------------


class SumKernel:
    """Phase data for sum_{x mod q} [chi_0(x)] prod_k chi_k(F_k(x)), q odd.

    Discrete logs of F_k(x) modulo each p**e || q are tabulated once, so that
    many character tuples can be summed cheaply against the same polynomials.
    """

    def __init__(self, q: int, polys: Sequence[IntPolynomial], with_unit_restriction: bool):
        if q % 2 == 0 or q < 3:
            raise CharsumError("odd q >= 3 required (even q excluded)")
        if q > BRUTE_FORCE_LIMIT:
            raise CharsumError(f"q={q} exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
        self.q = q
        self.polys = tuple(polys)
        self.unit = with_unit_restriction
        self.fact = dict(sorted(factorize_small(q).items()))
        self.mods = {p: PrimePowerModulus(p, e) for p, e in self.fact.items()}
        self.N = lcm(*(m.group_order for m in self.mods.values()))
        self._cache = [self._chunk(a, min(a + _CHUNK, q)) for a in range(0, q, _CHUNK)] if q <= 4 * _CHUNK else None

    def _chunk(self, a: int, b: int):
        xs = np.arange(a, b, dtype=np.int64)
        valid = np.ones(b - a, dtype=bool)
        if self.unit:
            for p in self.fact:
                valid &= xs % p != 0
        logs = {}
        for p, mod in self.mods.items():
            table = mod.log_table
            per_k = []
            for F in self.polys:
                L = table[eval_mod_array(F, xs, mod.modulus)]
                valid &= L >= 0
                per_k.append(L)
            logs[p] = per_k
        idx = np.flatnonzero(valid)
        return {p: [L[idx] for L in per_k] for p, per_k in logs.items()}, len(idx)

    def _chunks(self):
        if self._cache is not None:
            yield from self._cache
        else:
            for a in range(0, self.q, _CHUNK):
                yield self._chunk(a, min(a + _CHUNK, self.q))

    @property
    def valid_count(self) -> int:
        return sum(n for _, n in self._chunks())

    def histogram(self, exponents: Mapping[int, Sequence[int]]) -> np.ndarray:
        """Phase histogram for the tuple with local exponents ``exponents[p][k]``."""
        N = self.N
        hist = np.zeros(N, dtype=np.int64)
        for logs, n in self._chunks():
            if n == 0:
                continue
            phase = np.zeros(n, dtype=np.int64)
            for p, per_k in logs.items():
                order = self.mods[p].group_order
                scale = N // order
                loc = np.zeros(n, dtype=np.int64)
                for A, L in zip(exponents[p], per_k):
                    loc = (loc + (A % order) * L) % order
                phase = (phase + loc * scale) % N
            hist += np.bincount(phase, minlength=N)
        return hist

    def tuple_exponents(self, tup: CharacterTuple) -> dict[int, list[int]]:
        if tup.q != self.q or tup.K != len(self.polys):
            raise CharsumError("character tuple does not match modulus / polynomial count")
        return {p: [tup.local[k][p].A for k in range(tup.K)] for p in self.fact}


def complete_sum(q: int, polys: Sequence[IntPolynomial], tup: CharacterTuple,
                 with_unit_restriction: bool) -> CharSumResult:
    kernel = SumKernel(q, polys, with_unit_restriction)
    hist = kernel.histogram(kernel.tuple_exponents(tup))
    value = histogram_value(hist)
    return CharSumResult(
        value=value, abs_value=abs(value), bound=None, bound_name=None, satisfied=None,
        rounding_budget=float(hist.sum()) * ROUNDING_UNIT, status="value_only",
        modulus=q, polys=list(polys), characters=tup.to_json(),
        details={"terms": int(hist.sum())},
    )


def complete_sum_histogram(q: int, polys: Sequence[IntPolynomial], tup: CharacterTuple,
                           with_unit_restriction: bool) -> np.ndarray:
    kernel = SumKernel(q, polys, with_unit_restriction)
    return kernel.histogram(kernel.tuple_exponents(tup))


def local_sum_histograms(polys: Sequence[IntPolynomial], tup: CharacterTuple,
                         with_unit_restriction: bool) -> dict[int, np.ndarray]:
    """Histograms of the local factors sum_{x mod p**e}, one per p | q."""
    out = {}
    for p, e in tup.factorization.items():
        loc = compose_tuple(p**e, [{p: tup.local[k][p]} for k in range(tup.K)])
        out[p] = complete_sum_histogram(p**e, polys, loc, with_unit_restriction)
    return out


def crt_product_histogram(local: Mapping[int, np.ndarray], N: int) -> np.ndarray:
    """Cyclic convolution of local histograms lifted to the common order N."""
    total = np.zeros(N, dtype=object)
    total[0] = 1
    for hist in local.values():
        n = len(hist)
        scale = N // n
        nxt = np.zeros(N, dtype=object)
        for j in np.flatnonzero(hist).tolist():
            nxt += np.roll(total, j * scale) * int(hist[j])
        total = nxt
    return total.astype(np.int64)


def conductor_reduced_histogram(p: int, e: int, polys: Sequence[IntPolynomial],
                                chars: Sequence[DirichletCharacter], f_p: int,
                                with_unit_restriction: bool) -> np.ndarray:
    """Histogram of sum_{x mod f_p} [chi_0(x)] prod_k chi_k(F_k(x)).

    Each chi_k is a character mod p**e of conductor dividing f_p, so the
    summand depends only on x mod f_p; values are read through the mod-p**e
    tables applied to the integers x in [0, f_p).
    """
    mod = PrimePowerModulus(p, e)
    order = mod.group_order
    xs = np.arange(f_p, dtype=np.int64)
    valid = np.ones(f_p, dtype=bool)
    if with_unit_restriction:
        valid &= xs % p != 0
    phase = np.zeros(f_p, dtype=np.int64)
    for F, chi in zip(polys, chars):
        L = mod.log_table[eval_mod_array(F, xs, mod.modulus)]
        valid &= L >= 0
        phase = (phase + chi.A * L) % order
    return np.bincount(phase[valid], minlength=order)


# -- prime and prime-power checks ----------------------------------------------------


def _prime_power_tuple(p: int, m: int, chars: Sequence[DirichletCharacter]) -> CharacterTuple:
    for chi in chars:
        if chi.modulus != PrimePowerModulus(p, m):
            raise CharsumError(f"character {chi.to_json()} is not modulo {p}**{m}")
    return compose_tuple(p**m, [{p: chi} for chi in chars])


def weil_check(p: int, polys: Sequence[IntPolynomial], chars: Sequence[DirichletCharacter]) -> CharSumResult:
    """|sum_{x in F_p} prod chi_k(F_k(x))| against (sum d_k - 1) * sqrt(p).

    The hypothesis is established operationally: every F_k nonzero mod p,
    pairwise coprime mod p, and some F_k squarefree of positive degree mod p
    carrying a nontrivial character (so it cannot be an ord(chi_k)-th power
    times a constant).
    """
    if p == 2 or not is_prime(p):
        raise CharsumError("odd prime required")
    polys = list(polys)
    if len(polys) != len(chars):
        raise CharsumError("need one character per polynomial")
    tup = _prime_power_tuple(p, 1, chars)
    reasons = []
    reduced = [F.reduce_mod(p) for F in polys]
    if any(not R for R in reduced):
        reasons.append("some F_k vanishes mod p")
    if any(R.degree >= p for R in reduced):
        reasons.append("deg F_k >= p")
    if not reasons:
        for i, j in itertools.combinations(range(len(polys)), 2):
            if gcd_mod_p(reduced[i], reduced[j], p).degree > 0:
                reasons.append(f"F_{i + 1} and F_{j + 1} share a factor mod p")
        witness = [
            k for k, (R, chi) in enumerate(zip(reduced, chars))
            if not chi.is_trivial() and R.degree >= 1
            and squarefree_part_degree_mod_p(R, p) == R.degree
        ]
        if not witness:
            reasons.append("no F_k is squarefree of positive degree with a nontrivial character")
    kernel = SumKernel(p, polys, with_unit_restriction=False)
    hist = kernel.histogram(kernel.tuple_exponents(tup))
    common = dict(modulus=p, polys=polys, characters=tup.to_json())
    if reasons:
        value = histogram_value(hist)
        return CharSumResult(value, abs(value), None, "WEIL", None, float(hist.sum()) * ROUNDING_UNIT,
                             HYPOTHESIS_NOT_ESTABLISHED, details={"reasons": reasons}, **common)
    d = [squarefree_part_degree_mod_p(R, p) for R in reduced]
    bound = (sum(d) - 1) * math.sqrt(p)
    value, a, budget, ok = _judge(hist, bound)
    return CharSumResult(value, a, bound, "WEIL", ok, budget, SATISFIED if ok else VIOLATED,
                         details={"d": d}, **common)


@dataclass(frozen=True)
class CochraneData:
    t: int
    F_tilde: IntPolynomial
    A_set: tuple[ModPRoot, ...]
    M: int

    @property
    def nu_sum(self) -> int:
        return sum(r.multiplicity for r in self.A_set)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "F_tilde": self.F_tilde.to_list(),
            "A_set": [[r.residue, r.multiplicity] for r in self.A_set],
            "M": self.M,
        }


def cochrane_params(F: IntPolynomial, p: int, m: int = 1) -> CochraneData:
    if F.degree < 1:
        raise CharsumError("F must be nonconstant")
    dF = derivative(F)
    t = p_content_valuation(dF, p)
    F_tilde = IntPolynomial(c // p**t for c in dF.coeffs).reduce_mod(p)
    F_mod = F.reduce_mod(p)
    roots = roots_mod_p(F_tilde, p)
    A_set = tuple(r for r in roots if not F_mod or F_mod.eval_mod(r.residue, p) != 0)
    M = max((r.multiplicity for r in A_set), default=0)
    return CochraneData(t, F_tilde, A_set, M)


def cochrane_check(F: IntPolynomial, p: int, m: int, chi: DirichletCharacter | None = None) -> CharSumResult:
    """|sum_{x mod p**m} chi(F(x))| against (sum nu) * p**(t/(M+1)) * p**(m(1 - 1/(M+1)))."""
    if p == 2 or not is_prime(p):
        raise CharsumError("odd prime required")
    data = cochrane_params(F, p, m)
    if m < data.t + 2:
        raise CharsumError(f"lemma hypothesis violated: m={m} < t+2={data.t + 2}")
    if chi is None:
        chi = character(p, m, 1)
    tup = _prime_power_tuple(p, m, [chi])
    bound = data.nu_sum * p ** (data.t / (data.M + 1)) * p ** (m * (1 - 1 / (data.M + 1)))
    kernel = SumKernel(p**m, [F], with_unit_restriction=False)
    hist = kernel.histogram(kernel.tuple_exponents(tup))
    value, a, budget, ok = _judge(hist, bound)
    return CharSumResult(value, a, bound, "COCHRANE", ok, budget, SATISFIED if ok else VIOLATED,
                         modulus=p**m, polys=[F], characters=tup.to_json(), details=data.to_json())


def prop1_preconditions(p: int, polys: Sequence[IntPolynomial], disc: int | None = None) -> list[str]:
    """Failed nondivisibility / shape conditions for the combined bound at p."""
    out = []
    if any(F.degree < 1 for F in polys):
        out.append("some F_k is constant")
        return out
    prod_poly = reduce(mul, polys, IntPolynomial((1,)))
    if not is_squarefree_over_Q(prod_poly):
        out.append("product has a multiple root")
    if any(F.lc % p == 0 for F in polys):
        out.append("p divides a leading coefficient")
    if disc is None:
        disc = discriminant(prod_poly) if prod_poly.degree >= 1 else 1
    if disc % p == 0:
        out.append("p divides the discriminant of the product")
    return out


def prop1_bound(p: int, m: int, D: int) -> float:
    return (D - 1) * p ** (m * (1 - 1 / D))


def prop1_check(p: int, m: int, polys: Sequence[IntPolynomial],
                chars: Sequence[DirichletCharacter]) -> CharSumResult:
    """Brute-force |sum_{x mod p**m} prod chi_k(F_k(x))| against (D-1) p**(m(1-1/D)).

    D is the degree sum of exactly the polynomials passed in.
    """
    if p == 2 or not is_prime(p):
        raise CharsumError("odd prime required")
    polys = list(polys)
    tup = _prime_power_tuple(p, m, chars)
    reasons = prop1_preconditions(p, polys)
    if not any(chi.is_primitive() for chi in chars):
        reasons.append("no primitive character")
    D = sum(F.degree for F in polys)
    kernel = SumKernel(p**m, polys, with_unit_restriction=False)
    hist = kernel.histogram(kernel.tuple_exponents(tup))
    common = dict(modulus=p**m, polys=polys, characters=tup.to_json())
    if reasons:
        value = histogram_value(hist)
        return CharSumResult(value, abs(value), None, "PROP1", None, float(hist.sum()) * ROUNDING_UNIT,
                             PRECONDITION_FAILED, details={"reasons": reasons}, **common)
    bound = prop1_bound(p, m, D)
    value, a, budget, ok = _judge(hist, bound)
    return CharSumResult(value, a, bound, "PROP1", ok, budget, SATISFIED if ok else VIOLATED,
                         details={"D": D}, **common)


@dataclass
class AuditSummary:
    p: int
    m: int
    polys: list
    checked: int
    violations: int
    max_ratio: float
    worst: dict | None
    skipped: str | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p, "m": self.m, "polys": [F.to_list() for F in self.polys],
            "checked": self.checked, "violations": self.violations,
            "max_ratio": self.max_ratio, "worst": self.worst, "skipped": self.skipped,
        }


def _primitive_exponents(mod: PrimePowerModulus) -> set[int]:
    return {A for A in range(1, mod.group_order + 1) if DirichletCharacter(mod, A).is_primitive()}


def prop1_audit(p: int, m: int, polys: Sequence[IntPolynomial],
                exponent_tuples: Iterable[Sequence[int]] | None = None) -> AuditSummary:
    """Check the combined bound for many character tuples mod p**m.

    By default every tuple with at least one primitive character is checked.
    """
    polys = list(polys)
    reasons = prop1_preconditions(p, polys)
    if reasons:
        return AuditSummary(p, m, polys, 0, 0, 0.0, None, skipped="; ".join(reasons))
    mod = PrimePowerModulus(p, m)
    prim = _primitive_exponents(mod)
    if exponent_tuples is None:
        exponent_tuples = (
            A for A in itertools.product(range(1, mod.group_order + 1), repeat=len(polys))
            if any(a in prim for a in A)
        )
    D = sum(F.degree for F in polys)
    bound = prop1_bound(p, m, D)
    kernel = SumKernel(p**m, polys, with_unit_restriction=False)
    checked = violations = 0
    max_ratio, worst = 0.0, None
    for A in exponent_tuples:
        A = tuple(int(a) for a in A)
        if not any(a in prim for a in A):
            continue
        hist = kernel.histogram({p: A})
        value, a, budget, ok = _judge(hist, bound)
        checked += 1
        if not ok:
            violations += 1
        ratio = a / bound if bound else (0.0 if ok else math.inf)
        if worst is None or ratio > max_ratio:
            max_ratio = ratio
            worst = {"A": list(A), "abs_value": a, "bound": bound, "satisfied": ok}
    return AuditSummary(p, m, polys, checked, violations, max_ratio, worst)


# -- proof constructions -------------------------------------------------------------------


def g_polynomial(polys: Sequence[IntPolynomial], exponents: Sequence[int]) -> IntPolynomial:
    """sum_k A_k F_k' prod_{j != k} F_j."""
    out = IntPolynomial()
    for k, (F, A) in enumerate(zip(polys, exponents)):
        term = derivative(F) * A
        for j, Fj in enumerate(polys):
            if j != k:
                term = term * Fj
        out = out + term
    return out


def proof_polynomials(polys, exponents: Sequence[int]) -> tuple[IntPolynomial, IntPolynomial]:
    """F = prod F_k**A_k and G with F' = (prod F_k**(A_k - 1)) * G, identity verified."""
    polys = list(getattr(polys, "polys", polys))
    if len(polys) != len(exponents) or any(A < 1 for A in exponents):
        raise CharsumError("need one exponent A_k >= 1 per polynomial")
    F = reduce(mul, (P**A for P, A in zip(polys, exponents)), IntPolynomial((1,)))
    G = g_polynomial(polys, exponents)
    cofactor = reduce(mul, (P ** (A - 1) for P, A in zip(polys, exponents)), IntPolynomial((1,)))
    if derivative(F) != cofactor * G:
        raise AssertionError("F' != prod F_k^(A_k-1) * G")  # would mean broken polynomial arithmetic
    return F, G


@dataclass(frozen=True)
class TZeroResult:
    status: str  # "holds", "fails" or "hypothesis_void"
    t: int | None

    def __bool__(self) -> bool:
        return self.status == "holds"


def t_zero_check(fam, p: int, m: int, exponents: Sequence[int]) -> TZeroResult:
    """Content valuation at p of G is zero whenever some A_k is prime to p."""
    polys = list(getattr(fam, "polys", fam))
    reasons = prop1_preconditions(p, polys)
    if reasons:
        raise CharsumError("; ".join(reasons))
    if all(A % p == 0 for A in exponents):
        return TZeroResult("hypothesis_void", None)
    G = g_polynomial(polys, exponents)
    t = p_content_valuation(G, p)
    return TZeroResult("holds" if t == 0 else "fails", t)


# -- composite moduli ------------------------------------------------------------------------


def bound_polynomials(polys: Sequence[IntPolynomial]) -> tuple[tuple[IntPolynomial, ...], bool]:
    """Polynomial list handed to the combined bound, and whether chi_0 stays in the sum.

    If no F_k is a multiple of T the list is (T, F_1, ..., F_K) and the chi_0
    factor is kept; otherwise chi_0 is redundant and dropped.
    """
    polys = tuple(polys)
    if any(F[0] == 0 for F in polys):
        return polys, False
    return (IntPolynomial((0, 1)),) + polys, True


def composite_bound(tup: CharacterTuple, D: int) -> float:
    t = tup.type
    q1_primes = [p for p in tup.factorization if t[p] > 1]
    return tup.q * (D - 1) ** len(q1_primes) * prod(t[p] ** (-1 / D) for p in q1_primes)


def composite_bound_check(q: int, fam, tup: CharacterTuple) -> CharSumResult:
    """Brute-force |S| over x mod q against q (D-1)**omega(q1) prod f_p**(-1/D).

    ``details`` also records the CRT factorisation of S into local sums and
    the reduction of each local sum to its conductor modulus, both checked
    exactly on phase histograms.
    """
    polys = list(getattr(fam, "polys", fam))
    if tup.all_trivial():
        raise CharsumError("bound vacuous: all characters trivial")
    if tup.q != q:
        raise CharsumError("tuple modulus does not match q")
    bpolys, unit = bound_polynomials(polys)
    D = sum(F.degree for F in bpolys)
    reasons = {p: r for p in tup.factorization if (r := prop1_preconditions(p, bpolys))}
    kernel = SumKernel(q, polys, unit)
    hist = kernel.histogram(kernel.tuple_exponents(tup))
    common = dict(modulus=q, polys=polys, characters=tup.to_json())
    if reasons:
        value = histogram_value(hist)
        return CharSumResult(value, abs(value), None, "COMPOSITE", None, float(hist.sum()) * ROUNDING_UNIT,
                             PRECONDITION_FAILED, details={"reasons": {str(p): r for p, r in reasons.items()}},
                             **common)
    local = local_sum_histograms(polys, tup, unit)
    crt_ok = bool(np.array_equal(crt_product_histogram(local, kernel.N), hist))
    t = tup.type
    reduction = {}
    for p, e in tup.factorization.items():
        if t[p] == 1:
            continue
        chars = [tup.local[k][p] for k in range(tup.K)]
        red = conductor_reduced_histogram(p, e, polys, chars, t[p], unit)
        s = 0
        while p**s < t[p]:
            s += 1
        reduction[str(p)] = {
            "f_p": t[p],
            "local_abs": abs(histogram_value(local[p])),
            "reduced_abs": abs(histogram_value(red)),
            "exact": bool(np.array_equal(local[p], red * (p**e // t[p]))),
            "prop1_bound": prop1_bound(p, s, D),
        }
    bound = composite_bound(tup, D)
    value, a, budget, ok = _judge(hist, bound)
    details = {
        "D": D, "chi0_kept": unit, "type": {str(p): f for p, f in t.items()},
        "q0": tup.q0, "q1": tup.q1, "crt_exact": crt_ok, "conductor_reduction": reduction,
    }
    return CharSumResult(value, a, bound, "COMPOSITE", ok, budget, SATISFIED if ok else VIOLATED,
                         details=details, **common)
