"""Independent brute-force oracles used to pin down the main algorithms:
matrix-enumeration equivalence testing, raw p-adic searches with no
Hensel shortcuts, composition-free class counting, and the finite-ring
cyclicity test behind the ideal/form dictionary.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

from .arith import is_prime
from .bqf import Form, _conic_solutions_mod_p, _rho
from .qfield import FractionalIdeal, _hnf2


class ModulusTooLarge(ValueError):
    pass


@lru_cache(maxsize=8)
def _sl2_matrices(height: int) -> tuple[tuple[int, int, int, int], ...]:
    """All of SL2(Z) with entries bounded by height."""
    mats = []
    rng = range(-height, height + 1)
    for p in rng:
        for q in rng:
            for r in rng:
                num = 1 + q * r
                if p == 0:
                    if num == 0:
                        for s in rng:
                            mats.append((0, q, r, s))
                    continue
                if num % p == 0 and abs(num // p) <= height:
                    mats.append((p, q, r, num // p))
    return tuple(mats)


def brute_equivalent(f: Form, g: Form, height: int) -> bool:
    """Proper equivalence by trying every SL2 matrix with entries <= height."""
    gt = g.tuple()
    for M in _sl2_matrices(height):
        if f.transform(M).tuple() == gt:
            return True
    return False


def brute_local(f: Form, n: int, p: int, k: int) -> bool:
    """True iff f(x, y) = n (mod p^k) has a solution. Raw search: no
    Hensel filtering, organized as a depth-first lift of residues."""
    if not is_prime(p) or k < 1:
        raise ValueError("need prime p and k >= 1")
    if p ** (2 * k) <= 4_000_000:
        pk = p ** k
        return any((f(x, y) - n) % pk == 0 for x in range(pk) for y in range(pk))
    a, b, c = f.a, f.b, f.c

    def dfs(x: int, y: int, j: int, pj: int) -> bool:
        if j == k:
            return True
        fxp, fyp = (2 * a * x + b * y) % p, (b * x + 2 * c * y) % p
        r = ((f(x, y) - n) // pj) % p
        if fxp or fyp:
            if fxp:
                inv = pow(fxp, -1, p)
                for beta in range(p):
                    alpha = (-(r + fyp * beta) * inv) % p
                    if dfs(x + alpha * pj, y + beta * pj, j + 1, pj * p):
                        return True
            else:
                inv = pow(fyp, -1, p)
                for alpha in range(p):
                    beta = (-(r + fxp * alpha) * inv) % p
                    if dfs(x + alpha * pj, y + beta * pj, j + 1, pj * p):
                        return True
            return False
        if r != 0:
            return False
        for alpha in range(p):
            for beta in range(p):
                if dfs(x + alpha * pj, y + beta * pj, j + 1, pj * p):
                    return True
        return False

    return any(dfs(x, y, 1, p) for x, y in _conic_solutions_mod_p(f, n, p))


def naive_class_count(D: int) -> int:
    """Class number by scanning the reduction windows; no composition."""
    if D < 0:
        count = 0
        for a in range(1, isqrt(-D // 3) + 1):
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (b < 0 and a == c):
                    continue
                if gcd(gcd(a, b), c) == 1:
                    count += 1
        return count
    s = isqrt(D)
    forms = set()
    for b in range(1, s + 1):
        if (D - b * b) % 4:
            continue
        P = (D - b * b) // 4
        d = 1
        while d * d <= P:
            if P % d == 0:
                for aa in {d, P // d}:
                    if (2 * aa + b) ** 2 <= D:
                        continue
                    if 2 * aa > b and (2 * aa - b) ** 2 >= D:
                        continue
                    cc = P // aa
                    if gcd(gcd(aa, b), cc) == 1:
                        forms.add((aa, b, -cc))
                        forms.add((-aa, b, cc))
            d += 1
    count = 0
    remaining = set(forms)
    while remaining:
        start = Form(*remaining.pop())
        cur = _rho(start, s)
        while cur != start:
            remaining.discard(cur.tuple())
            cur = _rho(cur, s)
        count += 1
    return count


def cyclic_module_test(x: FractionalIdeal, n: int) -> bool:
    """Whether the ideal x, reduced mod n, is cyclic over O_K/n.

    The module is abstractly (Z/n)^2 on the normal-form basis, with delta
    acting through an integer matrix; cyclicity is decided by the full
    orbit search: some element m with span{m, delta*m} everything.
    """
    if not (2 <= n <= 60):
        raise ModulusTooLarge(f"modulus {n} outside [2, 60]")
    if x.q.denominator != 1:
        raise ValueError("scale the ideal to integer q first")
    a, b, D = x.a, x.b, x.D
    c = (b * b - D) // (4 * a)
    # delta * alpha = ((D-b)/2) alpha + a beta;  delta * beta = -c alpha + ((D+b)/2) beta
    t11, t12 = (D - b) // 2, -c
    t21, t22 = a, (D + b) // 2
    for u in range(n):
        for v in range(n):
            w1 = (t11 * u + t12 * v) % n
            w2 = (t21 * u + t22 * v) % n
            A, B, C = _hnf2([(u, v), (w1, w2), (n, 0), (0, n)])
            if A == 1 and C == 1:
                return True
    return False
