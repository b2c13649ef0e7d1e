"""Exact integer polynomials and their reductions modulo primes.

Coefficients are stored in ascending degree order, so ``T**3 - T`` is
``IntPolynomial((0, -1, 0, 1))``.  The zero polynomial has no coefficients.

Resultant sign convention: ``resultant(F, G)`` is the determinant of the
Sylvester matrix whose first ``deg G`` rows carry the coefficients of ``F``
(descending) and whose last ``deg F`` rows carry those of ``G``.  Equivalently
``resultant(F, G) = lc(F)**deg(G) * prod(G(alpha) for alpha root of F)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np


class PolynomialError(ValueError):
    pass


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...] = ()

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (c,))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    # -- basic structure -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "T" if i == 1 else f"T^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        other = _as_poly(other)
        n = max(len(self), len(other))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        return _as_poly(other) - self

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise PolynomialError("negative exponent")
        result = IntPolynomial((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale_exact_div(self, c: int) -> "IntPolynomial":
        if any(a % c for a in self.coeffs):
            raise PolynomialError(f"{self} is not divisible by {c}")
        return IntPolynomial(a // c for a in self.coeffs)

    # -- evaluation -------------------------------------------------------

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, m: int) -> int:
        return eval_mod(self, x, m)

    def derivative(self) -> "IntPolynomial":
        return derivative(self)

    def reduce_mod(self, p: int) -> "IntPolynomial":
        """Coefficients reduced into [0, p)."""
        return IntPolynomial(c % p for c in self.coeffs)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive_part(self) -> "IntPolynomial":
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return IntPolynomial(a // c for a in self.coeffs)


def _as_poly(x: "IntPolynomial | int") -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    return IntPolynomial((int(x),))


T = IntPolynomial((0, 1))


def eval_mod(F: IntPolynomial, x: int, m: int) -> int:
    if m < 1:
        raise PolynomialError("modulus must be >= 1")
    acc = 0
    x %= m
    for c in reversed(F.coeffs):
        acc = (acc * x + c) % m
    return acc


def eval_mod_array(F: IntPolynomial, xs: np.ndarray, m: int) -> np.ndarray:
    """Vectorized Horner evaluation of F at every entry of ``xs`` modulo m."""
    if m < 1:
        raise PolynomialError("modulus must be >= 1")
    if m > 3_000_000_000:
        xs_obj = np.asarray(xs, dtype=object) % m
        acc = np.zeros(len(xs_obj), dtype=object)
        for c in reversed(F.coeffs):
            acc = (acc * xs_obj + c) % m
        return acc
    xs = np.asarray(xs, dtype=np.int64) % m
    acc = np.zeros(xs.shape, dtype=np.int64)
    for c in reversed(F.coeffs):
        acc = (acc * xs + (c % m)) % m
    return acc


def derivative(F: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(i * c for i, c in enumerate(F.coeffs) if i > 0)


def pseudo_remainder(A: IntPolynomial, B: IntPolynomial) -> IntPolynomial:
    """prem(A, B): remainder of lc(B)**(deg A - deg B + 1) * A divided by B."""
    if not B:
        raise PolynomialError("division by zero polynomial")
    r = list(A.coeffs)
    db = B.degree
    lcb = B.lc
    e = A.degree - db + 1
    if e <= 0:
        return A
    while len(r) - 1 >= db and any(r):
        dr = len(r) - 1
        lead = r[-1]
        r = [lcb * c for c in r]
        for i, b in enumerate(B.coeffs):
            r[dr - db + i] -= lead * b
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    return IntPolynomial(c * lcb**e for c in r)


def divmod_monic(A: IntPolynomial, B: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Exact division by a polynomial with leading coefficient +-1."""
    if not B or abs(B.lc) != 1:
        raise PolynomialError("divisor must be monic up to sign")
    r = list(A.coeffs)
    db = B.degree
    q = [0] * max(0, len(r) - db)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        c = r[-1] * B.lc
        q[k] = c
        for i, b in enumerate(B.coeffs):
            r[k + i] -= c * b
        while r and r[-1] == 0:
            r.pop()
    return IntPolynomial(q), IntPolynomial(r)


def resultant(F: IntPolynomial, G: IntPolynomial) -> int:
    """Exact resultant by the subresultant pseudo-remainder sequence."""
    if not F or not G:
        raise PolynomialError("undefined resultant: zero polynomial")
    A, B = F, G
    sign = 1
    if A.degree < B.degree:
        A, B = B, A
        if (A.degree * B.degree) % 2:
            sign = -1
    if B.degree == 0:
        return sign * B.lc ** A.degree
    ca, cb = A.content(), B.content()
    A = A.scale_exact_div(ca)
    B = B.scale_exact_div(cb)
    t = ca**B.degree * cb**A.degree
    g = h = 1
    while True:
        delta = A.degree - B.degree
        if A.degree % 2 and B.degree % 2:
            sign = -sign
        R = pseudo_remainder(A, B)
        A = B
        if not R:
            return 0
        B = R.scale_exact_div(g * h**delta)
        g = A.lc
        if delta > 0:
            h = g**delta // h ** (delta - 1)
        if B.degree == 0:
            da = A.degree
            return sign * t * (B.lc**da // h ** (da - 1))


def discriminant(F: IntPolynomial) -> int:
    n = F.degree
    if n < 1:
        raise PolynomialError("discriminant undefined for constants")
    r = resultant(F, derivative(F))
    q, rem = divmod(r, F.lc)
    if rem:
        raise PolynomialError("internal error: resultant not divisible by lc")
    return -q if (n * (n - 1) // 2) % 2 else q


def gcd_over_q(F: IntPolynomial, G: IntPolynomial) -> IntPolynomial:
    """Primitive gcd of F and G over the rationals (primitive PRS)."""
    A, B = F.primitive_part(), G.primitive_part()
    if not A:
        return B
    if not B:
        return A
    if A.degree < B.degree:
        A, B = B, A
    while B:
        R = pseudo_remainder(A, B)
        A, B = B, R.primitive_part()
    return A.primitive_part()


def is_squarefree_over_Q(F: IntPolynomial) -> bool:
    if not F:
        raise PolynomialError("zero polynomial")
    if F.degree <= 0:
        return True
    return gcd_over_q(F, derivative(F)).degree == 0


def p_content_valuation(F: IntPolynomial, p: int) -> int:
    if not F:
        raise PolynomialError("p-content valuation of the zero polynomial is infinite")
    best = None
    for c in F.coeffs:
        if c == 0:
            continue
        v = 0
        while c % p == 0:
            c //= p
            v += 1
        best = v if best is None else min(best, v)
    return best


# -- polynomials over F_p --------------------------------------------------


@dataclass(frozen=True)
class ModPRoot:
    residue: int
    multiplicity: int


def _synthetic_div_mod(coeffs: list[int], a: int, p: int) -> tuple[list[int], int]:
    """Divide (ascending coeffs) by (T - a) over F_p; return quotient, remainder."""
    n = len(coeffs) - 1
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = (acc * a + coeffs[i]) % p
        q[i - 1] = acc
    rem = (acc * a + coeffs[0]) % p
    return q, rem


def roots_mod_p(F: IntPolynomial, p: int) -> list[ModPRoot]:
    Fp = F.reduce_mod(p)
    if not Fp:
        raise PolynomialError("zero polynomial mod p")
    if Fp.degree == 0:
        return []
    xs = np.arange(p, dtype=np.int64)
    hits = np.flatnonzero(eval_mod_array(Fp, xs, p) == 0)
    roots = []
    for a in hits.tolist():
        coeffs = list(Fp.coeffs)
        mult = 0
        while len(coeffs) > 1:
            quot, rem = _synthetic_div_mod(coeffs, a, p)
            if rem:
                break
            mult += 1
            coeffs = quot
        roots.append(ModPRoot(int(a), mult))
    return roots


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def gcd_mod_p(F: IntPolynomial, G: IntPolynomial, p: int) -> IntPolynomial:
    """Monic gcd over F_p (zero if both reduce to zero)."""
    a = _trim([c % p for c in F.coeffs])
    b = _trim([c % p for c in G.coeffs])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            k = len(a) - len(b)
            c = a[-1] * inv % p
            for i, bc in enumerate(b):
                a[k + i] = (a[k + i] - c * bc) % p
            _trim(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return IntPolynomial()
    inv = pow(a[-1], -1, p)
    return IntPolynomial(c * inv % p for c in a)


def squarefree_part_degree_mod_p(F: IntPolynomial, p: int) -> int:
    """Degree of the largest squarefree divisor of F mod p.

    Uses deg F - deg gcd(F, F'), which counts distinct roots correctly as long
    as no root multiplicity is divisible by p (always true for deg F < p).
    """
    Fp = F.reduce_mod(p)
    if not Fp:
        raise PolynomialError("zero polynomial mod p")
    if Fp.degree >= p:
        raise PolynomialError("squarefree-part degree mod p requires deg F < p")
    return Fp.degree - gcd_mod_p(Fp, derivative(Fp), p).degree


def from_json(obj: Sequence[int]) -> IntPolynomial:
    return IntPolynomial(int(c) for c in obj)
