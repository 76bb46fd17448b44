"""The real or imaginary quadratic field Q(sqrt(D)) for a fundamental
discriminant D: elements of the maximal order, fractional ideals in
two-generator normal form, prime splitting, and the fundamental unit.

An ideal is stored as q * (a*Z + ((b + sqrt(D))/2) * Z) with q a positive
rational, a >= 1, b^2 = D (mod 4a), and b normalized into (-a, a].
Internally most lattice work happens in the integral basis (1, delta) with
delta = (D + sqrt(D))/2, so everything stays in plain integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import factorize, is_prime, kronecker, sqrt_mod


class NotFundamental(ValueError):
    pass


class PerfectSquare(ValueError):
    pass


@dataclass(frozen=True)
class Discriminant:
    """A fundamental discriminant with its count t of prime divisors."""

    D: int
    t: int


def _squarefree(n: int) -> bool:
    return all(pp.e == 1 for pp in factorize(n))


def make_discriminant(D: int) -> Discriminant:
    if D == 0 or (D > 0 and isqrt(D) ** 2 == D):
        raise PerfectSquare(f"{D} is a perfect square (or zero)")
    r = D % 4
    if r == 1:
        if not _squarefree(D):
            raise NotFundamental(f"{D} = 1 (mod 4) but is not squarefree")
    elif r == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            raise NotFundamental(
                f"{D}/4 = {m} = {m % 4} (mod 4); need 2 or 3 (mod 4)")
        if not _squarefree(m):
            raise NotFundamental(f"{D}/4 = {m} is not squarefree")
    else:
        raise NotFundamental(f"{D} = {r} (mod 4); discriminants are 0 or 1 (mod 4)")
    return Discriminant(D, len(factorize(D)))


def as_discriminant(D) -> Discriminant:
    return D if isinstance(D, Discriminant) else make_discriminant(D)


@dataclass(frozen=True)
class QuadElement:
    """a + b*delta with delta = (D + sqrt(D))/2, coordinates rational."""

    D: int
    a: Fraction
    b: Fraction

    def __add__(self, other: "QuadElement") -> "QuadElement":
        return QuadElement(self.D, self.a + other.a, self.b + other.b)

    def __mul__(self, other: "QuadElement") -> "QuadElement":
        # delta^2 = D*delta - (D^2 - D)/4
        D = self.D
        s = Fraction(D * D - D, 4)
        a = self.a * other.a - self.b * other.b * s
        b = self.a * other.b + self.b * other.a + self.b * other.b * D
        return QuadElement(D, a, b)

    def conjugate(self) -> "QuadElement":
        # conj(delta) = D - delta
        return QuadElement(self.D, self.a + self.b * self.D, -self.b)

    def norm(self) -> Fraction:
        D = self.D
        return self.a * self.a + D * self.a * self.b + Fraction(D * D - D, 4) * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.D * self.b

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1


def norm(x: QuadElement) -> Fraction:
    return x.norm()


@dataclass(frozen=True)
class FractionalIdeal:
    """q * (a*Z + ((b + sqrt(D))/2) * Z), normalized."""

    D: int
    q: Fraction
    a: int
    b: int


def make_ideal(D, q, a: int, b: int) -> FractionalIdeal:
    disc = as_discriminant(D)
    q = Fraction(q)
    if q <= 0 or a < 1:
        raise ValueError("need q > 0 and a >= 1")
    if (b * b - disc.D) % (4 * a) != 0:
        raise ValueError(f"b^2 = {b*b} is not {disc.D} (mod {4*a})")
    b = b % (2 * a)
    if b > a:
        b -= 2 * a
    return FractionalIdeal(disc.D, q, a, b)


def unit_ideal(D) -> FractionalIdeal:
    disc = as_discriminant(D)
    return make_ideal(disc, 1, 1, disc.D % 2)


def ideal_norm(x: FractionalIdeal) -> Fraction:
    return x.q * x.q * x.a


def ideal_conjugate(x: FractionalIdeal) -> FractionalIdeal:
    return make_ideal(x.D, x.q, x.a, -x.b)


def ideal_inverse(x: FractionalIdeal) -> FractionalIdeal:
    return make_ideal(x.D, 1 / (x.q * x.a), x.a, -x.b)


def _hnf2(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form of the lattice spanned by integer rows (u, v).

    Returns (A, B, C) with the lattice equal to Z*(A, 0) + Z*(B, C),
    A, C > 0 and 0 <= B < A. Requires a full-rank lattice.
    """
    B, C = 0, 0
    for u, v in rows:
        if v == 0:
            continue
        if C == 0:
            B, C = u, v
        else:
            g, s, t = _xgcd(C, v)
            B, C = s * B + t * u, g
    if C < 0:
        B, C = -B, -C
    if C == 0:
        raise ValueError("rank-deficient lattice")
    A = 0
    for u, v in rows:
        A = gcd(A, u - (v // C) * B)
    A = abs(A)
    if A == 0:
        raise ValueError("rank-deficient lattice")
    B %= A
    return A, B, C


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qu = old_r // r
        old_r, r = r, old_r - qu * r
        old_s, s = s, old_s - qu * s
        old_t, t = t, old_t - qu * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _gens_1delta(x: FractionalIdeal) -> list[tuple[int, int]]:
    # Z-basis of the primitive (q = 1) part, coordinates in (1, delta).
    return [(x.a, 0), ((x.b - x.D) // 2, 1)]


def _mul_1delta(g1, g2, D: int) -> tuple[int, int]:
    u1, v1 = g1
    u2, v2 = g2
    s = (D * D - D) // 4
    return (u1 * u2 - v1 * v2 * s, u1 * v2 + u2 * v1 + v1 * v2 * D)


def ideal_mul(x: FractionalIdeal, y: FractionalIdeal) -> FractionalIdeal:
    if x.D != y.D:
        raise ValueError("ideals live in different fields")
    D = x.D
    gx, gy = _gens_1delta(x), _gens_1delta(y)
    rows = [_mul_1delta(g1, g2, D) for g1 in gx for g2 in gy]
    A, B, C = _hnf2(rows)
    if A % C or B % C:
        raise ValueError("product lattice is not an ideal")
    return make_ideal(D, x.q * y.q * C, A // C, 2 * (B // C) + D)


@dataclass(frozen=True)
class SplittingType:
    kind: str  # "split" | "inert" | "ramified"
    primes: tuple[FractionalIdeal, ...]


def splitting_type(D, p: int) -> SplittingType:
    disc = as_discriminant(D)
    D = disc.D
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker(D, p)
    if k == -1:
        return SplittingType("inert", ())
    if k == 1:
        if p == 2:
            b = 1  # D = 1 (mod 8) here
        else:
            r = sqrt_mod(D, p)
            b = r if (r - D) % 2 == 0 else r + p
        P = make_ideal(disc, 1, p, b)
        return SplittingType("split", (P, ideal_conjugate(P)))
    if p == 2:
        b = 2 if (D // 4) % 2 else 0
    else:
        b = p if D % 2 else 0
    return SplittingType("ramified", (make_ideal(disc, 1, p, b),))


def fundamental_unit(D) -> tuple[QuadElement, int]:
    """Fundamental unit of the maximal order (D > 0) and its norm sign.

    Uses the purely periodic continued fraction of the reduced generator
    beta = (b0 + sqrt(D))/2 with b0 the largest integer of D's parity
    below sqrt(D); the unit is q_{l-1}*beta + q_{l-2} with norm (-1)^l.
    """
    disc = as_discriminant(D)
    D = disc.D
    if D <= 0:
        raise ValueError("fundamental unit needs D > 0")
    s = isqrt(D)
    b0 = s if (s - D) % 2 == 0 else s - 1
    P, Q = b0, 2
    q_prev, q_cur = 1, 0  # q_{-2}, q_{-1}
    ell = 0
    while True:
        a = (P + s) // Q
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        P = a * Q - P
        Q = (D - P * P) // Q
        ell += 1
        if (P, Q) == (b0, 2):
            break
        if ell > 10 * D:
            raise RuntimeError("continued fraction failed to cycle")
    # unit = q_cur * beta + q_prev, rewritten in the (1, delta) basis
    u = q_prev + q_cur * (b0 - D) // 2
    return QuadElement(D, Fraction(u), Fraction(q_cur)), (-1) ** ell


def ideal_to_form(x: FractionalIdeal):
    """The oriented norm form a*x^2 + b*x*y + ((b^2-D)/(4a))*y^2."""
    from . import bqf

    a, b, D = x.a, x.b, x.D
    c = (b * b - D) // (4 * a)
    assert gcd(gcd(a, b), c) == 1, "imprimitive form from a fundamental discriminant"
    return bqf.Form(a, b, c)


def form_to_ideal(f) -> tuple[FractionalIdeal, int]:
    """An ideal in the narrow class of the form, plus a sign s = +-1.

    Negating an indefinite form inverts its narrow class, so for D > 0 a
    form with negative leading coefficient is replaced by the properly
    equivalent sign-flipped neighbour in its reduction cycle and s stays
    +1. For D < 0 a negative-definite form is negated with s = -1.
    """
    D = f.disc
    as_discriminant(D)
    if f.a == 0:
        raise ValueError("form has a = 0")
    if f.a < 0:
        if D < 0:
            return make_ideal(D, 1, -f.a, -f.b), -1
        from math import isqrt

        from . import bqf

        g, _ = bqf.reduce(f)
        if g.a < 0:
            g = bqf._rho(g, isqrt(D))
        return make_ideal(D, 1, g.a, g.b), 1
    return make_ideal(D, 1, f.a, f.b), 1


def is_narrowly_principal(x: FractionalIdeal) -> bool:
    """Whether x = (alpha) with N(alpha) > 0."""
    from . import bqf

    return bqf.is_equivalent(ideal_to_form(x), bqf.principal_form(x.D))
