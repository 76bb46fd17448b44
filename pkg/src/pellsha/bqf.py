"""Integral binary quadratic forms of fundamental discriminant D:
reduction, proper (SL2) equivalence, composition through the ideal
correspondence, the narrow class group, and local/global representation
of integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, isqrt

from .arith import factorize, is_prime, kronecker, sqrt_mod, valuation, hilbert_symbol, LocalPlace
from .qfield import as_discriminant

Matrix = tuple[int, int, int, int]  # (p, q, r, s) row-major

IDENTITY: Matrix = (1, 0, 0, 1)


class DiscriminantMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def transform(self, M: Matrix) -> "Form":
        """The form f(px + qy, rx + sy) for M = (p, q, r, s)."""
        p, q, r, s = M
        a = self(p, r)
        b = 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s
        c = self(q, s)
        return Form(a, b, c)

    def neg(self) -> "Form":
        return Form(-self.a, -self.b, -self.c)

    def tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def mat_mul(M: Matrix, N: Matrix) -> Matrix:
    p, q, r, s = M
    t, u, v, w = N
    return (p * t + q * v, p * u + q * w, r * t + s * v, r * u + s * w)


def principal_form(D) -> Form:
    D = as_discriminant(D).D
    if D % 4 == 0:
        return Form(1, 0, -D // 4)
    return Form(1, 1, (1 - D) // 4)


def is_reduced(f: Form) -> bool:
    D = f.disc
    if D < 0:
        a, b, c = f.a, f.b, f.c
        if a <= 0:
            return False
        if not (-a < b <= a <= c):
            return False
        return b >= 0 or (abs(b) < a and a < c)
    s = isqrt(D)
    a2, b = 2 * abs(f.a), f.b
    if not (1 <= b <= s):
        return False
    if (a2 + b) ** 2 <= D:
        return False
    return a2 <= b or (a2 - b) ** 2 < D


def reduce(f: Form) -> tuple[Form, Matrix]:
    """Reduce f, returning (g, M) with g = f.transform(M) and det M = 1."""
    D = f.disc
    if D == 0 or (D > 0 and isqrt(D) ** 2 == D):
        raise ValueError("degenerate discriminant")
    if D < 0:
        return _reduce_definite(f)
    return _reduce_indefinite(f)


def _reduce_definite(f: Form) -> tuple[Form, Matrix]:
    if f.a < 0:
        raise ValueError("negative definite form")
    a, b, c = f.a, f.b, f.c
    M = IDENTITY
    while True:
        if not (-a < b <= a):
            m = (a - b) // (2 * a)
            M = mat_mul(M, (1, m, 0, 1))
            b, c = b + 2 * a * m, a * m * m + b * m + c
        elif a > c:
            M = mat_mul(M, (0, -1, 1, 0))
            a, b, c = c, -b, a
        elif a == c and b < 0:
            M = mat_mul(M, (0, -1, 1, 0))
            b = -b
        else:
            return Form(a, b, c), M


def _reduce_indefinite(f: Form) -> tuple[Form, Matrix]:
    D = f.disc
    s = isqrt(D)
    a, b, c = f.a, f.b, f.c
    M = IDENTITY
    guard = 0
    while not is_reduced(Form(a, b, c)):
        ac = abs(c)
        if ac > s:
            b1 = (-b) % (2 * ac)
            if b1 > ac:
                b1 -= 2 * ac
        else:
            b1 = s - ((s + b) % (2 * ac))
        m = (b + b1) // (2 * c)
        M = mat_mul(M, (0, -1, 1, m))
        a, b, c = c, b1, c * m * m - b * m + a
        guard += 1
        if guard > 10000:
            raise RuntimeError("reduction failed to terminate")
    return Form(a, b, c), M


def _rho(f: Form, s: int) -> Form:
    """Cycle step on a reduced indefinite form (s = isqrt(D))."""
    ac = abs(f.c)
    b1 = s - ((s + f.b) % (2 * ac))
    c1 = (b1 * b1 - f.disc) // (4 * f.c)
    return Form(f.c, b1, c1)


def reduction_cycle(f: Form) -> list[Form]:
    """The full rho-cycle of reduced forms equivalent to f (D > 0)."""
    D = f.disc
    if D <= 0:
        raise ValueError("cycles need D > 0")
    s = isqrt(D)
    g = reduce(f)[0]
    cycle = [g]
    cur = _rho(g, s)
    while cur != g:
        cycle.append(cur)
        cur = _rho(cur, s)
    return cycle


def is_equivalent(f: Form, g: Form) -> bool:
    """Proper (SL2(Z)) equivalence."""
    if f.disc != g.disc:
        raise DiscriminantMismatch(f"{f.disc} != {g.disc}")
    D = f.disc
    if D < 0:
        if (f.a > 0) != (g.a > 0):
            return False
        if f.a < 0:
            f, g = f.neg(), g.neg()
        return reduce(f)[0] == reduce(g)[0]
    return reduce(g)[0] in reduction_cycle(f)


@dataclass(frozen=True, order=True)
class FormClass:
    """A proper equivalence class, named by its canonical representative.

    For D < 0 the representative is the reduced form; for D > 0 it is the
    lexicographically least member of the reduction cycle.
    """

    D: int
    rep: Form


def form_class(f: Form) -> FormClass:
    D = f.disc
    if D < 0:
        if f.a < 0:
            raise ValueError("negative definite forms carry no class")
        return FormClass(D, reduce(f)[0])
    return FormClass(D, min(reduction_cycle(f)))


def compose(f: FormClass | Form, g: FormClass | Form) -> FormClass:
    """Gauss composition, transported through the ideal correspondence."""
    from . import qfield

    rf = f.rep if isinstance(f, FormClass) else f
    rg = g.rep if isinstance(g, FormClass) else g
    if rf.disc != rg.disc:
        raise DiscriminantMismatch(f"{rf.disc} != {rg.disc}")
    If, sf = qfield.form_to_ideal(rf)
    Ig, sg = qfield.form_to_ideal(rg)
    h = qfield.ideal_to_form(qfield.ideal_mul(If, Ig))
    if sf * sg < 0:
        h = h.neg()
    return form_class(h)


def inverse_class(f: FormClass) -> FormClass:
    return form_class(Form(f.rep.a, -f.rep.b, f.rep.c))


def _reduced_forms_neg(D: int) -> list[Form]:
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(Form(a, b, c))
    return out


def _divisors(n: int) -> list[int]:
    ds = [1]
    for pp in factorize(n):
        ds = [d * pp.p ** e for d in ds for e in range(pp.e + 1)]
    return sorted(ds)


def _reduced_forms_pos(D: int) -> list[Form]:
    s = isqrt(D)
    out = []
    start = 1 if D % 2 else 2
    for b in range(start, s + 1, 2):
        P = (D - b * b) // 4
        if P == 0:
            continue
        for d in _divisors(P):
            a2 = 2 * d
            if (a2 + b) ** 2 <= D:
                continue
            if a2 > b and (a2 - b) ** 2 >= D:
                continue
            c = P // d
            if gcd(gcd(d, b), c) != 1:
                continue
            out.append(Form(d, b, -c))
            out.append(Form(-d, b, c))
    return out


@dataclass
class ClassGroup:
    disc: object  # Discriminant
    elements: list[FormClass]
    identity_index: int
    _index: dict[tuple[int, int, int], int] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> FormClass:
        return self.elements[self.identity_index]

    def class_index(self, f: Form) -> int:
        g = reduce(f if f.a > 0 or f.disc > 0 else f.neg())[0]
        return self._index[g.tuple()]

    def compose_index(self, i: int, j: int) -> int:
        from . import qfield

        rf, rg = self.elements[i].rep, self.elements[j].rep
        If, sf = qfield.form_to_ideal(rf)
        Ig, sg = qfield.form_to_ideal(rg)
        h = qfield.ideal_to_form(qfield.ideal_mul(If, Ig))
        if sf * sg < 0:
            h = h.neg()
        return self.class_index(h)

    def power_index(self, i: int, k: int) -> int:
        result = self.identity_index
        base = i
        while k:
            if k & 1:
                result = self.compose_index(result, base)
            base = self.compose_index(base, base)
            k >>= 1
        return result

    def element_order(self, i: int) -> int:
        h = self.order
        if self.power_index(i, h) != self.identity_index:
            raise RuntimeError("class group is not closed: Lagrange violated")
        ord_ = h
        for pp in factorize(h):
            while ord_ % pp.p == 0 and self.power_index(i, ord_ // pp.p) == self.identity_index:
                ord_ //= pp.p
        return ord_

    @cached_property
    def structure(self) -> list[int]:
        """Elementary divisors d1 | d2 | ... with product the class number."""
        h = self.order
        if h == 1:
            return []
        per_prime: dict[int, list[int]] = {}
        orders = [self.element_order(i) for i in range(h)]
        for pp in factorize(h):
            p = pp.p
            # n_j = number of elements killed by p^j
            counts = [1]
            j = 1
            while True:
                nj = sum(1 for o in orders if p ** j % o == 0)
                counts.append(nj)
                if nj == p ** valuation(h, p) or counts[-1] == counts[-2]:
                    break
                j += 1
            exps = []
            for jj in range(1, len(counts)):
                r = valuation(counts[jj] // counts[jj - 1], p) if counts[jj] > counts[jj - 1] else 0
                exps.append(r)
            # exps[j-1] = number of cyclic factors with exponent >= j
            factors = []
            for jj, r in enumerate(exps, start=1):
                while len(factors) < r:
                    factors.append(0)
                for idx in range(r):
                    factors[idx] = jj
            per_prime[p] = sorted(factors, reverse=True)
        width = max(len(v) for v in per_prime.values())
        divisors = []
        for k in range(width):
            d = 1
            for p, exps in per_prime.items():
                if k < len(exps):
                    d *= p ** exps[k]
            divisors.append(d)
        divisors.sort()
        assert len(divisors) == width
        return divisors


def class_group(D) -> ClassGroup:
    disc = as_discriminant(D)
    D = disc.D
    index: dict[tuple[int, int, int], int] = {}
    classes: list[FormClass] = []
    if D < 0:
        for f in sorted(_reduced_forms_neg(D)):
            index[f.tuple()] = len(classes)
            classes.append(FormClass(D, f))
    else:
        s = isqrt(D)
        seen: set[tuple[int, int, int]] = set()
        forms = sorted(set(_reduced_forms_pos(D)))
        for f in forms:
            if f.tuple() in seen:
                continue
            cycle = [f]
            cur = _rho(f, s)
            while cur != f:
                cycle.append(cur)
                cur = _rho(cur, s)
            rep = min(cycle)
            idx = len(classes)
            classes.append(FormClass(D, rep))
            for g in cycle:
                seen.add(g.tuple())
                index[g.tuple()] = idx
    group = ClassGroup(disc, classes, 0, index)
    p0 = reduce(principal_form(D))[0]
    group.identity_index = index[p0.tuple()]
    return group


def squared_subgroup(G: ClassGroup) -> list[FormClass]:
    seen = sorted({G.compose_index(i, i) for i in range(G.order)})
    return [G.elements[i] for i in seen]


def represents_globally(f: Form, n: int, bound: int) -> tuple[int, int] | None:
    """Search |x|, |y| <= bound for f(x, y) = n; complete within the box."""
    D = f.disc
    if D < 0:
        if f.a < 0:
            return represents_globally(f.neg(), -n, bound)
        if n < 0:
            return None
        if n == 0:
            return (0, 0)
        # 4*a*f = (2ax + by)^2 + |D| y^2, so y^2 <= 4an/|D|
        ymax = min(bound, isqrt(4 * f.a * n // -D) + 1)
        for y in _spiral(ymax):
            # a x^2 + (b y) x + (c y^2 - n) = 0
            sol = _int_quadratic(f.a, f.b * y, f.c * y * y - n)
            for x in sol:
                if abs(x) <= bound:
                    return (x, y)
        return None
    for x in _spiral(bound):
        if f.c != 0:
            sol = _int_quadratic(f.c, f.b * x, f.a * x * x - n)
            for y in sol:
                if abs(y) <= bound:
                    return (x, y)
        else:
            rem = n - f.a * x * x
            if f.b * x != 0 and rem % (f.b * x) == 0:
                y = rem // (f.b * x)
                if abs(y) <= bound:
                    return (x, y)
            elif f.b * x == 0 and rem == 0:
                return (x, 0)
    return None


def _spiral(bound: int):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def _int_quadratic(a: int, b: int, c: int) -> list[int]:
    """Integer roots of a t^2 + b t + c = 0 (a != 0), positive root first."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    out = []
    for sign in (1, -1):
        num = -b + sign * r
        if num % (2 * a) == 0:
            t = num // (2 * a)
            if t not in out:
                out.append(t)
    out.sort(reverse=True)
    return out


def represents_over_qp(f: Form, n, v) -> bool:
    """Whether f represents n over Q_p (or over R for the real place)."""
    if n == 0:
        raise ValueError("n must be nonzero")
    place = v if isinstance(v, LocalPlace) else LocalPlace.finite(v)
    D = f.disc
    if place.is_real:
        if D > 0:
            return True
        return (n > 0) == (f.a > 0)
    return hilbert_symbol(n * f.a, D, place) == 1


def represents_over_zp(f: Form, n: int, p: int) -> bool:
    """Whether f represents n over Z_p.

    Decided by closed-form unit criteria where they apply, else by a
    certified lifting search modulo p^k with k = v_p(4D) + 3: a solution
    is accepted only with a partial derivative of valuation e, 2e < level.
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    D = f.disc
    if n % p != 0:
        if p != 2:
            if D % p != 0:
                return True
            a = f.a if f.a % p else f.c  # not both divisible when p | D
            return kronecker(a * n, p) == 1
        if D % 2:
            return True
        m = D // 4
        a = f.a if f.a % 2 else f.c  # one of them is odd
        w = (n * a) % 8
        if m % 4 == 3:
            return w % 4 == 1
        if m % 8 == 2:
            return w in (1, 7)
        return w in (1, 3)  # m = 6 (mod 8)
    k = valuation(4 * D, p) + 3
    return _certified_search(f, n, p, k)


def _conic_solutions_mod_p(f: Form, n: int, p: int) -> list[tuple[int, int]]:
    """All solutions of f(x, y) = n (mod p)."""
    a, b, c = f.a % p, f.b % p, f.c % p
    if p == 2 or (a == 0 and c == 0):
        return [(x, y) for x in range(p) for y in range(p) if (f(x, y) - n) % p == 0]
    sols = []
    if a != 0:
        for y in range(p):
            for x in _quadratic_mod_p(a, b * y, c * y * y - n, p):
                sols.append((x, y))
    else:
        for x in range(p):
            for y in _quadratic_mod_p(c, b * x, a * x * x - n, p):
                sols.append((x, y))
    return sols


def _quadratic_mod_p(a: int, b: int, c: int, p: int) -> list[int]:
    """Roots of a t^2 + b t + c (mod p), odd p, p not dividing a."""
    disc = (b * b - 4 * a * c) % p
    r = sqrt_mod(disc, p)
    if r is None:
        return []
    inv = pow(2 * a, -1, p)
    roots = {(-b + r) * inv % p, (-b - r) * inv % p}
    return sorted(roots)


def _certified_search(f: Form, n: int, p: int, kmax: int) -> bool:
    a, b, c = f.a, f.b, f.c
    sols = _conic_solutions_mod_p(f, n, p)
    pj = p
    for j in range(1, kmax + 1):
        lifted: list[tuple[int, int]] = []
        for x, y in sols:
            fx, fy = 2 * a * x + b * y, b * x + 2 * c * y
            e = min(_vcap(fx, p, j), _vcap(fy, p, j))
            if 2 * e < j:
                return True
            if j == kmax:
                continue
            r = ((f(x, y) - n) // pj) % p
            fxp, fyp = fx % p, fy % p
            if fxp or fyp:
                if fxp:
                    inv = pow(fxp, -1, p)
                    for beta in range(p):
                        alpha = (-(r + fyp * beta) * inv) % p
                        lifted.append((x + alpha * pj, y + beta * pj))
                else:
                    inv = pow(fyp, -1, p)
                    for alpha in range(p):
                        beta = (-(r + fxp * alpha) * inv) % p
                        lifted.append((x + alpha * pj, y + beta * pj))
            elif r == 0:
                for alpha in range(p):
                    for beta in range(p):
                        lifted.append((x + alpha * pj, y + beta * pj))
        sols = lifted
        pj *= p
    return False


def _vcap(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v
