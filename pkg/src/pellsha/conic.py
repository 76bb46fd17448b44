"""The Pell conic x^2 - D y^2 = 4 with its group law
(a,b) + (c,d) = ((ac + D bd)/2, (ad + bc)/2), identity (2, 0).

Points live over Z, Q, or Z/n (pass modulus n). The division by 2 in the
group law is exact division: when 2 is a zero divisor the half may not
exist, or may not be unique even after insisting the result lands on the
curve; both conditions raise HalvingFailure. Over Z/n the law is total
when 4 does not divide n.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .qfield import as_discriminant, fundamental_unit


class HalvingFailure(ArithmeticError):
    pass


class ConicPoint(NamedTuple):
    x: object
    y: object


class NormOneElement(NamedTuple):
    """u + v*delta of norm one: u^2 + D u v + ((D^2 - D)/4) v^2 = 1."""

    u: object
    v: object


def identity(D, n: int | None = None) -> ConicPoint:
    return ConicPoint(2 % n, 0) if n is not None else ConicPoint(2, 0)


def on_curve(D, P: ConicPoint, n: int | None = None) -> bool:
    D = as_discriminant(D).D
    val = P.x * P.x - D * P.y * P.y - 4
    return val % n == 0 if n is not None else val == 0


def neg(D, P: ConicPoint, n: int | None = None) -> ConicPoint:
    return ConicPoint(P.x, -P.y % n if n is not None else -P.y)


def _halve_exact(w):
    if isinstance(w, Fraction):
        return w / 2
    if w % 2:
        raise HalvingFailure(f"{w} is not exactly divisible by 2")
    return w // 2


def _halve_candidates(w: int, n: int) -> list[int]:
    """All z (mod n) with 2z = w (mod n)."""
    if n % 2:
        return [w * pow(2, -1, n) % n]
    if w % 2:
        return []
    half = n // 2
    z = (w // 2) % half
    return [z, z + half]


def add(D, P: ConicPoint, Q: ConicPoint, n: int | None = None) -> ConicPoint:
    D = as_discriminant(D).D
    s = P.x * Q.x + D * P.y * Q.y
    t = P.x * Q.y + P.y * Q.x
    if n is None:
        return ConicPoint(_halve_exact(s), _halve_exact(t))
    s, t = s % n, t % n
    good = []
    for x in _halve_candidates(s, n):
        for y in _halve_candidates(t, n):
            if (x * x - D * y * y - 4) % n == 0:
                good.append(ConicPoint(x, y))
    if not good:
        raise HalvingFailure(f"no exact half of ({s}, {t}) mod {n} lies on the curve")
    if len(good) > 1:
        raise HalvingFailure(f"ambiguous halving of ({s}, {t}) mod {n}")
    return good[0]


def scalar_mul(D, k: int, P: ConicPoint, n: int | None = None) -> ConicPoint:
    D = as_discriminant(D).D
    if k < 0:
        return scalar_mul(D, -k, neg(D, P, n), n)
    result = identity(D, n)
    base = P
    while k:
        if k & 1:
            result = add(D, result, base, n)
        base = add(D, base, base, n)
        k >>= 1
    return result


def to_norm_one(D, P: ConicPoint, n: int | None = None) -> NormOneElement:
    """(x, y) -> ((x - D y)/2, y), an isomorphism onto the norm-one group."""
    D = as_discriminant(D).D
    w = P.x - D * P.y
    if n is None:
        return NormOneElement(_halve_exact(w), P.y)
    good = []
    for u in _halve_candidates(w % n, n):
        e = NormOneElement(u, P.y % n)
        if _norm_one_value(D, e, n) == 0:
            good.append(e)
    if not good:
        raise HalvingFailure(f"no exact half of {w} mod {n} has norm one")
    if len(good) > 1:
        raise HalvingFailure(f"ambiguous halving of {w} mod {n}")
    return good[0]


def _norm_one_value(D: int, e: NormOneElement, n: int | None):
    val = e.u * e.u + D * e.u * e.v + (D * D - D) // 4 * e.v * e.v - 1
    return val % n if n is not None else val


def from_norm_one(D, e: NormOneElement, n: int | None = None) -> ConicPoint:
    """(u, v) -> (2u + D v, v); no division needed."""
    D = as_discriminant(D).D
    x, y = 2 * e.u + D * e.v, e.v
    if n is not None:
        x, y = x % n, y % n
    return ConicPoint(x, y)


def norm_one_mul(D, e1: NormOneElement, e2: NormOneElement,
                 n: int | None = None) -> NormOneElement:
    D = as_discriminant(D).D
    s = (D * D - D) // 4
    u = e1.u * e2.u - s * e1.v * e2.v
    v = e1.u * e2.v + e1.v * e2.u + D * e1.v * e2.v
    if n is not None:
        u, v = u % n, v % n
    return NormOneElement(u, v)


def torsion_points(D) -> list[ConicPoint]:
    """All integral points for D < 0 (the whole finite group)."""
    D = as_discriminant(D).D
    if D >= 0:
        raise ValueError("torsion enumeration needs D < 0")
    pts = []
    y = 0
    while -D * y * y <= 4:
        rhs = 4 + D * y * y
        x = _isqrt_exact(rhs)
        if x is not None:
            for px in {x, -x}:
                for py in {y, -y}:
                    pts.append(ConicPoint(px, py))
        y += 1
    return sorted(set(pts))


def _isqrt_exact(m: int) -> int | None:
    if m < 0:
        return None
    from math import isqrt

    r = isqrt(m)
    return r if r * r == m else None


def fundamental_point(D) -> ConicPoint:
    """Generator of the infinite part of C(Z), D > 0: the point coming
    from the smallest totally norm-one unit > 1."""
    disc = as_discriminant(D)
    eps, sign = fundamental_unit(disc)
    if sign == -1:
        eps = eps * eps
    u, v = int(eps.a), int(eps.b)
    P = ConicPoint(2 * u + disc.D * v, v)
    assert on_curve(disc, P) and P.x > 2 and P.y > 0
    return P
