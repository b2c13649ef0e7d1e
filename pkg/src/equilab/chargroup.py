"""Dirichlet characters modulo odd prime powers and their CRT composition.

A character mod p**m is stored as an exponent A against the generator
character chi(g**k) = exp(2*pi*i*k / phi(p**m)), g the smallest primitive
root.  Values are exact phases: integers modulo the group order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, isqrt, lcm, prod
from typing import Mapping, Sequence

import numpy as np

from .primes import factorize_small, is_prime


class CharacterError(ValueError):
    pass


def _check_odd_prime_power(p: int, m: int) -> None:
    if p == 2:
        raise CharacterError("odd prime powers only")
    if m < 1 or not is_prime(p):
        raise CharacterError(f"{p}**{m} is not an odd prime power")


def multiplicative_order_is_full(g: int, n: int, order: int, order_primes: Sequence[int]) -> bool:
    return all(pow(g, order // r, n) != 1 for r in order_primes)


@lru_cache(maxsize=None)
def primitive_root(p: int, m: int = 1) -> int:
    """Smallest primitive root modulo p**m (p odd)."""
    _check_odd_prime_power(p, m)
    n = p**m
    if n > 10**9:
        raise CharacterError("modulus too large (p**m <= 1e9)")
    order = p ** (m - 1) * (p - 1)
    rs = list(factorize_small(order))
    for g in range(2, n):
        if g % p and multiplicative_order_is_full(g, n, order, rs):
            return g
    raise CharacterError(f"no primitive root mod {n}")


@dataclass(frozen=True)
class PrimePowerModulus:
    p: int
    m: int

    def __post_init__(self):
        _check_odd_prime_power(self.p, self.m)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    @property
    def group_order(self) -> int:
        return self.p ** (self.m - 1) * (self.p - 1)

    @property
    def g(self) -> int:
        return primitive_root(self.p, self.m)

    @cached_property
    def log_table(self) -> np.ndarray:
        """ind_g(x) for every x mod p**m; -1 marks non-units."""
        return _log_table(self.p, self.m)

    def ind(self, x: int) -> int:
        return ind(self, x)

    def characters(self) -> list["DirichletCharacter"]:
        return [DirichletCharacter(self, A) for A in range(1, self.group_order + 1)]

    def trivial(self) -> "DirichletCharacter":
        return DirichletCharacter(self, self.group_order)


@lru_cache(maxsize=64)
def _log_table(p: int, m: int) -> np.ndarray:
    n = p**m
    order = p ** (m - 1) * (p - 1)
    g = primitive_root(p, m)
    table = np.full(n, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        table[x] = k
        x = x * g % n
    table.setflags(write=False)
    return table


def ind(modulus: PrimePowerModulus, x: int) -> int:
    """Discrete log of x to base g mod p**m by baby-step giant-step."""
    n, p = modulus.modulus, modulus.p
    x %= n
    if x % p == 0:
        raise CharacterError(f"{x} is not a unit mod {n}")
    order = modulus.group_order
    g = modulus.g
    step = isqrt(order) + 1
    baby = {}
    cur = 1
    for j in range(step):
        baby.setdefault(cur, j)
        cur = cur * g % n
    giant = pow(g, -step, n)
    y = x
    for i in range(step + 1):
        j = baby.get(y)
        if j is not None:
            return (i * step + j) % order
        y = y * giant % n
    raise CharacterError(f"no discrete log found for {x} mod {n}")  # unreachable for units


ZERO = None  # zero marker returned by character_value for non-units


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: PrimePowerModulus
    A: int

    def __post_init__(self):
        if not 1 <= self.A <= self.modulus.group_order:
            raise CharacterError(f"exponent A={self.A} outside [1, {self.modulus.group_order}]")

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def order(self) -> int:
        n = self.modulus.group_order
        return n // gcd(self.A % n, n)

    def is_trivial(self) -> bool:
        return self.A == self.modulus.group_order

    def phase(self, x: int) -> int | None:
        return character_value(self, x)

    @property
    def conductor(self) -> int:
        return conductor(self)

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus.modulus

    def phases_array(self) -> np.ndarray:
        """Phase of chi(x) for all x mod p**m; -1 marks non-units."""
        t = self.modulus.log_table
        out = (t * self.A) % self.modulus.group_order
        out[t < 0] = -1
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.modulus.m, "A": self.A}


def character(p: int, m: int, A: int) -> DirichletCharacter:
    return DirichletCharacter(PrimePowerModulus(p, m), A)


def character_value(chi: DirichletCharacter, x: int) -> int | None:
    """Phase numerator k with chi(x) = exp(2*pi*i*k/group_order), or None if p | x."""
    mod = chi.modulus
    x %= mod.modulus
    if x % mod.p == 0:
        return ZERO
    return chi.A * int(mod.log_table[x]) % mod.group_order


def conductor(chi: DirichletCharacter) -> int:
    """Smallest p**s with chi trivial on all units x = 1 mod p**s."""
    mod = chi.modulus
    n, p = mod.modulus, mod.p
    ph = chi.phases_array()
    for s in range(mod.m + 1):
        ps = p**s
        kernel = np.arange(1, n, ps) if s else np.arange(n)
        vals = ph[kernel]
        if np.all(vals[vals >= 0] == 0):
            return ps
    return n


def conductor_by_induction(chi: DirichletCharacter) -> int:
    """Smallest p**s from which chi is induced.

    chi is induced from a character mod p**s exactly when chi(x) depends only
    on x mod p**s for units x; this checks that fibrewise.
    """
    mod = chi.modulus
    n, p = mod.modulus, mod.p
    ph = chi.phases_array()
    units = np.flatnonzero(ph >= 0)
    for s in range(mod.m + 1):
        ps = p**s
        first: dict[int, int] = {}
        ok = True
        for x in units.tolist():
            v = int(ph[x])
            r = x % ps
            if first.setdefault(r, v) != v:
                ok = False
                break
        if ok:
            return ps
    return n


# -- composite moduli ----------------------------------------------------------


@dataclass(frozen=True)
class CharacterTuple:
    """Characters chi_1..chi_K mod q, each a CRT product of local characters.

    ``local[k][p]`` is the component of chi_{k+1} modulo p**e_p.
    """

    q: int
    local: tuple[Mapping[int, DirichletCharacter], ...]
    factorization: Mapping[int, int] = field(compare=False, default=None)

    def __post_init__(self):
        if self.q % 2 == 0:
            raise CharacterError("even q excluded")
        fact = dict(sorted(factorize_small(self.q).items())) if self.q > 1 else {}
        object.__setattr__(self, "factorization", fact)
        for k, loc in enumerate(self.local):
            if set(loc) != set(fact):
                raise CharacterError(f"chi_{k + 1}: local primes {sorted(loc)} do not match q={self.q}")
            for p, chi in loc.items():
                if chi.modulus.p != p or chi.modulus.m != fact[p]:
                    raise CharacterError(f"chi_{k + 1}: local character at {p} has modulus "
                                         f"{chi.modulus.modulus}, expected {p ** fact[p]}")

    @property
    def K(self) -> int:
        return len(self.local)

    @property
    def type(self) -> dict[int, int]:
        """p -> lcm of the local conductors at p."""
        return {p: lcm(*(loc[p].conductor for loc in self.local)) if self.local else 1
                for p in self.factorization}

    @property
    def q1(self) -> int:
        t = self.type
        return prod(p**e for p, e in self.factorization.items() if t[p] > 1)

    @property
    def q0(self) -> int:
        return self.q // self.q1

    def all_trivial(self) -> bool:
        return all(chi.is_trivial() for loc in self.local for chi in loc.values())

    @property
    def exponent(self) -> int:
        """Common phase denominator: lcm of the local group orders."""
        return lcm(*(p ** (e - 1) * (p - 1) for p, e in self.factorization.items())) if self.factorization else 1

    def phase(self, k: int, x: int) -> int | None:
        """Phase of chi_{k+1}(x) over ``exponent``; None when gcd(x, q) > 1."""
        N = self.exponent
        total = 0
        for p, chi in self.local[k].items():
            v = character_value(chi, x)
            if v is None:
                return None
            total += v * (N // chi.modulus.group_order)
        return total % N

    def to_json(self) -> dict:
        return {str(p): [loc[p].to_json() for loc in self.local] for p in self.factorization}


def compose_tuple(q: int, local: Sequence[Mapping[int, DirichletCharacter]]) -> CharacterTuple:
    return CharacterTuple(q, tuple(dict(loc) for loc in local))


def tuple_from_json(q: int, obj: Mapping[str, Sequence[Mapping[str, int]]]) -> CharacterTuple:
    K = len(next(iter(obj.values()))) if obj else 0
    local = [dict() for _ in range(K)]
    for p_str, chars in obj.items():
        for k, c in enumerate(chars):
            local[k][int(p_str)] = character(int(c["p"]), int(c["m"]), int(c["A"]))
    return compose_tuple(q, local)
