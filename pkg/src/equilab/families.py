"""Nice families, the good-prime predicate and the near-primality measure delta(q)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from operator import mul
from pathlib import Path
from typing import Sequence

from .polynomials import IntPolynomial, discriminant, is_squarefree_over_Q
from .primes import factorize_small, primes_in_range


class FamilyError(ValueError):
    pass


PRESET_POLYS = {
    "id": IntPolynomial((0, 1)),
    "phi": IntPolynomial((-1, 1)),
    "sigma": IntPolynomial((1, 1)),
}


@dataclass(frozen=True)
class NiceFamily:
    """Validated list F_1..F_K of nonconstant polynomials with squarefree product.

    ``degree_sum`` is sum(deg F_k) -- the degree constant used when these
    polynomials are handed directly to the combined character-sum bound.
    ``D_main`` is ``1 + degree_sum`` -- the constant of the main argument, which
    equals the ``degree_sum`` of the augmented list (T, F_1, ..., F_K).
    """

    polys: tuple[IntPolynomial, ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        violations = _violations(self.polys)
        if violations:
            raise FamilyError("; ".join(violations))

    @property
    def K(self) -> int:
        return len(self.polys)

    @property
    def degree_sum(self) -> int:
        return sum(F.degree for F in self.polys)

    @property
    def D_main(self) -> int:
        return 1 + self.degree_sum

    @property
    def product(self) -> IntPolynomial:
        return reduce(mul, self.polys, IntPolynomial((1,)))

    def has_multiple_of_T(self) -> bool:
        return any(F[0] == 0 for F in self.polys)

    def augmented(self) -> tuple[IntPolynomial, ...]:
        return (IntPolynomial((0, 1)),) + self.polys

    def to_json(self) -> list:
        out = []
        for i, F in enumerate(self.polys):
            name = self.names[i] if i < len(self.names) else ""
            out.append(name if name in PRESET_POLYS and PRESET_POLYS[name] == F else F.to_list())
        return out


@dataclass
class FamilyCheck:
    family: NiceFamily | None
    violations: list[str]

    @property
    def nice(self) -> bool:
        return self.family is not None


def _violations(polys: Sequence[IntPolynomial]) -> list[str]:
    if not polys:
        raise FamilyError("empty family")
    out = []
    for i, F in enumerate(polys, start=1):
        if F.degree < 1:
            out.append(f"F_{i} = {F} is constant")
    prod = reduce(mul, polys, IntPolynomial((1,)))
    if prod and prod.degree >= 1 and not is_squarefree_over_Q(prod):
        out.append(f"product {prod} has a multiple root (not squarefree)")
    return out


def check_nice(polys: Sequence[IntPolynomial], names: Sequence[str] = ()) -> FamilyCheck:
    polys = tuple(polys)
    violations = _violations(polys)
    if violations:
        return FamilyCheck(None, violations)
    return FamilyCheck(NiceFamily(polys, tuple(names)), [])


@dataclass(frozen=True)
class GoodPrimeReport:
    p: int
    gt_5: bool
    gt_degree_square: bool
    coprime_to_leading: bool
    coprime_to_discriminant: bool

    @property
    def good(self) -> bool:
        return self.gt_5 and self.gt_degree_square and self.coprime_to_leading and self.coprime_to_discriminant

    def __bool__(self) -> bool:
        return self.good

    def failed(self) -> list[str]:
        names = {
            "a": self.gt_5,
            "b": self.gt_degree_square,
            "c": self.coprime_to_leading,
            "d": self.coprime_to_discriminant,
        }
        return [k for k, ok in names.items() if not ok]


def is_good_prime(fam: NiceFamily, p: int, disc: int | None = None) -> GoodPrimeReport:
    if disc is None:
        disc = discriminant(fam.product)
    return GoodPrimeReport(
        p=p,
        gt_5=p > 5,
        gt_degree_square=p > fam.D_main**2,
        coprime_to_leading=all(F.lc % p for F in fam.polys),
        coprime_to_discriminant=disc % p != 0,
    )


def good_primes_in_range(fam: NiceFamily, lo: int, hi: int) -> list[int]:
    if lo > hi:
        return []
    disc = discriminant(fam.product)
    return [p for p in primes_in_range(lo, hi + 1) if is_good_prime(fam, p, disc)]


def delta(q: int) -> Fraction:
    """Sum of 1/p over the distinct primes p dividing q."""
    if q < 2:
        raise FamilyError("delta(q) needs q >= 2")
    return sum((Fraction(1, p) for p in factorize_small(q)), Fraction(0))


# -- family files -----------------------------------------------------------


def parse_poly_token(token) -> tuple[IntPolynomial, str]:
    if isinstance(token, str):
        key = token.strip()
        if key in PRESET_POLYS:
            return PRESET_POLYS[key], key
        try:
            token = json.loads(key)
        except json.JSONDecodeError:
            raise FamilyError(f"unknown polynomial preset {key!r}") from None
    if isinstance(token, dict):
        token = token.get("poly", token.get("coeffs"))
    if not isinstance(token, list):
        raise FamilyError(f"cannot parse polynomial from {token!r}")
    return IntPolynomial(int(c) for c in token), ""


def split_family_arg(text: str) -> list[str]:
    """Split ``id,phi,[0,-1,0,1]`` at top-level commas."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return [t.strip() for t in out if t.strip()]


def load_family_tokens(arg: str) -> list:
    """Tokens from a comma list or from a JSON family file."""
    path = Path(arg)
    if path.suffix == ".json" and path.exists():
        data = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(data, dict):
            data = data.get("functions", data.get("polys"))
        if not isinstance(data, list):
            raise FamilyError(f"{arg}: expected a list of functions")
        return data
    return split_family_arg(arg)
