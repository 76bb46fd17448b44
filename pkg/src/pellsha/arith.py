"""Exact integer primitives: factoring, quadratic symbols, modular square
roots, Hilbert symbols, and periodic continued fractions of square roots.

Everything is exact; no floats anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_TRIAL_BOUND = 10_000

# Deterministic Miller-Rabin bases, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int


@dataclass(frozen=True)
class LocalPlace:
    """A place of Q: a finite prime, or the real place (p is None)."""

    p: int | None

    @classmethod
    def finite(cls, p: int) -> "LocalPlace":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls(p)

    @classmethod
    def real(cls) -> "LocalPlace":
        return cls(None)

    @property
    def is_real(self) -> bool:
        return self.p is None


REAL = LocalPlace(None)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond anything we factor)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of odd composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 2
    while True:
        y, c, m = seed % n, (seed * 2 + 1) % n, 128
        if c == 0:
            c = 1
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> list[PrimePower]:
    """Factor |n| into prime powers, sorted by prime.

    Trial division up to 10**4, then Brent-Pollard rho with Miller-Rabin
    primality certificates on the cofactors.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    exps: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            exps[p] = exps.get(p, 0) + 1
            n //= p
    p = 5
    while p <= _TRIAL_BOUND and p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                exps[q] = exps.get(q, 0) + 1
                n //= q
        p += 6
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            exps[m] = exps.get(m, 0) + 1
            continue
        d = _brent_rho(m)
        stack.append(d)
        stack.append(m // d)
    return [PrimePower(p, e) for p, e in sorted(exps.items())]


def prime_divisors(n: int) -> list[int]:
    return [pp.p for pp in factorize(n)]


def kronecker(a: int, m: int) -> int:
    """Kronecker symbol (a|m), fully multiplicative extension of Jacobi."""
    if m == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if m < 0:
        m = -m
        if a < 0:
            t = -t
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    if v > 0:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            t = -t
    a %= m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                t = -t
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            t = -t
        a %= m
    return t if m == 1 else 0


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of a mod an odd prime p (Tonelli-Shanks), or None.

    Returns the smaller of the two roots.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c = s, pow(z, q, p)
    t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    if isinstance(x, Fraction):
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _unit_part(x: Fraction, p: int) -> Fraction:
    v = valuation(x, p)
    return x / Fraction(p) ** v


def _legendre_of_unit(u: Fraction, p: int) -> int:
    # (u|p) for a p-adic unit u in Q: denominator squares away.
    return kronecker(u.numerator * u.denominator, p)


def hilbert_symbol(a, b, v) -> int:
    """Hilbert symbol (a, b)_v in {+1, -1} for nonzero rationals a, b.

    v is a LocalPlace or a prime integer.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    place = v if isinstance(v, LocalPlace) else LocalPlace.finite(v)
    if place.is_real:
        return -1 if (a < 0 and b < 0) else 1
    p = place.p
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = _unit_part(a, p), _unit_part(b, p)
    if p != 2:
        sign = 1
        if alpha % 2 and beta % 2 and p % 4 == 3:
            sign = -sign
        if beta % 2:
            sign *= _legendre_of_unit(u, p)
        if alpha % 2:
            sign *= _legendre_of_unit(w, p)
        return sign
    u8 = (u.numerator * u.denominator) % 8
    w8 = (w.numerator * w.denominator) % 8
    eps_u, eps_w = (u8 % 4 == 3), (w8 % 4 == 3)
    om_u, om_w = (u8 in (3, 5)), (w8 in (3, 5))
    exp = (eps_u and eps_w) + alpha * om_w + beta * om_u
    return -1 if exp % 2 else 1


@dataclass(frozen=True)
class CFExpansion:
    """Periodic continued fraction of sqrt(d): [a0; period repeating]."""

    d: int
    a0: int
    period: tuple[int, ...]

    def convergent(self, k: int) -> tuple[int, int]:
        """(p, q) of the k-th convergent, k=0 meaning just a0."""
        terms = [self.a0]
        while len(terms) <= k:
            terms.append(self.period[(len(terms) - 1) % len(self.period)])
        p_prev, p_cur = 1, terms[0]
        q_prev, q_cur = 0, 1
        for a in terms[1:]:
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
        return p_cur, q_cur


def cf_sqrt(d: int) -> CFExpansion:
    """Continued fraction of sqrt(d) for nonsquare d > 1."""
    if d <= 1:
        raise ValueError("need d > 1")
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise ValueError(f"{d} is a perfect square")
    period = []
    m, q, a = 0, 1, a0
    while True:
        m = q * a - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period.append(a)
        if a == 2 * a0:
            break
    return CFExpansion(d, a0, tuple(period))
