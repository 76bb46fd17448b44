"""Acceptance gate: end-to-end checks of every headline guarantee.

Each test prints an ``ACCEPTANCE n: PASS`` line on success so a verbose
run doubles as a checklist.
"""

import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from pellsha.arith import is_prime, prime_divisors, valuation
from pellsha.bqf import (class_group, form_class, is_equivalent, reduce,
                         represents_globally, represents_over_qp,
                         represents_over_zp, squared_subgroup, Form)
from pellsha.conic import (add, fundamental_point, identity, neg, on_curve,
                           to_norm_one, from_norm_one, norm_one_mul,
                           ConicPoint, HalvingFailure)
from pellsha.oracle import brute_equivalent, brute_local, cyclic_module_test
from pellsha.qfield import as_discriminant, make_ideal
from pellsha.sha import (fundamental_discriminants, hasse_failures, scan,
                         sha_order)
from pellsha.arith import REAL


def test_acceptance_1_main_theorem_scan():
    reports = scan(-10000, 10000, jobs=4)
    assert len(reports) > 6000
    bad = [r for r in reports if not r.ok]
    assert bad == []
    for r in reports:
        assert r.sha_order == r.squared_order
        assert r.sha_order * r.genus_index == r.h_plus
        assert {c.rep.tuple() for c in r.sha_classes} == \
            {c.rep.tuple() for c in squared_subgroup(class_group(as_discriminant(r.D)))}
    print("ACCEPTANCE 1: PASS")


def test_acceptance_2_spot_values():
    expected = {-15: 1, -23: 3, -47: 5, -84: 1, 40: 1, 60: 1, 316: 3}
    for D, order in expected.items():
        assert sha_order(as_discriminant(D)) == order, D
    print("ACCEPTANCE 2: PASS")


def _unit_representable(ideal, n):
    """Does the form of the ideal represent a unit of Z/n? Exhaustive."""
    from math import gcd

    from pellsha.qfield import ideal_to_form

    f = ideal_to_form(ideal)
    for x in range(n):
        for y in range(n):
            if gcd(f(x, y) % n, n) == 1:
                return True
    return False


def test_acceptance_3_finite_ring_equivalence():
    rng = random.Random(20240301)
    discs = [d.D for d in fundamental_discriminants(-300, 300)]
    checked = 0
    while checked < 200:
        D = rng.choice(discs)
        a = rng.randrange(1, 40)
        bs = [b for b in range(-a + 1, a + 1) if (b * b - D) % (4 * a) == 0]
        if not bs:
            continue
        ideal = make_ideal(D, 1, a, rng.choice(bs))
        n = rng.randrange(2, 61)
        assert cyclic_module_test(ideal, n) == _unit_representable(ideal, n), \
            (D, ideal, n)
        checked += 1
    print("ACCEPTANCE 3: PASS")


def _random_point(rng, disc, bound=40):
    while True:
        y = rng.randrange(-bound, bound + 1)
        x2 = disc.D * y * y + 4
        if x2 < 0:
            continue
        from math import isqrt
        x = isqrt(x2)
        if x * x == x2:
            return ConicPoint(rng.choice([x, -x]) if x else 0, y)


def test_acceptance_4_conic_axioms():
    # Over Z: sampled triples built from multiples of known points.
    from pellsha.conic import scalar_mul, torsion_points
    rng = random.Random(7)
    checked = 0
    for D in (5, 8, 316, -3, -4):
        disc = as_discriminant(D)
        if D > 0:
            base = fundamental_point(disc)
            pool = [scalar_mul(disc, k, base) for k in range(-4, 5)]
        else:
            pool = torsion_points(disc)
        while checked % 200 != 199:
            P, Q, R = (rng.choice(pool) for _ in range(3))
            assert add(disc, add(disc, P, Q), R) == add(disc, P, add(disc, Q, R))
            assert add(disc, P, identity(disc)) == P
            assert add(disc, P, neg(disc, P)) == identity(disc)
            u, v = to_norm_one(disc, P), to_norm_one(disc, Q)
            assert to_norm_one(disc, add(disc, P, Q)) == norm_one_mul(disc, u, v)
            assert from_norm_one(disc, u) == P
            checked += 1
        checked += 1
    assert checked == 1000

    # Over Z/n, exhaustively, wherever the operation is defined.
    for D in (5, -23, 316):
        for n in range(2, 31):
            disc = as_discriminant(D)
            pts = [ConicPoint(x, y) for x in range(n) for y in range(n)
                   if (x * x - D * y * y - 4) % n == 0]
            table = {}
            for P in pts:
                for Q in pts:
                    try:
                        table[(P, Q)] = add(disc, P, Q, n)
                    except HalvingFailure:
                        if n % 2 == 1:
                            raise AssertionError(
                                f"group law not total mod odd {n}")
            for (P, Q), S in table.items():
                assert on_curve(disc, S, n)
                assert table[(Q, P)] == S
                for R in pts:
                    left = table.get((S, R))
                    inner = table.get((Q, R))
                    right = table.get((P, inner)) if inner is not None else None
                    if left is not None and right is not None:
                        assert left == right
            e = identity(disc)
            for P in pts:
                got = table.get((P, e))
                if n % 2 == 1:
                    assert got == P
                elif got is not None:
                    assert got == P
    print("ACCEPTANCE 4: PASS")


def _is_minimal_solution(D, P):
    """Certify that P is the smallest solution of x^2 - D y^2 = 4 with
    x, y > 0, by box search up to a sound cap.

    Solutions with x, y > 0 are the powers of the minimal one, so if P
    were a proper power of some Q then (x_Q + y_Q sqrt D)/2 would be at
    most sqrt((x_P + y_P sqrt D)/2); a search up to that height decides
    minimality without walking all the way to y_P.
    """
    from math import isqrt

    if P.x * P.x - D * P.y * P.y != 4 or P.x <= 0 or P.y <= 0:
        return False
    s = isqrt(D)
    ycap = min(P.y - 1, 2 * isqrt(2 * (P.x + P.y * (s + 1))) // s + 2)
    for y in range(1, ycap + 1):
        x2 = D * y * y + 4
        x = isqrt(x2)
        if x * x == x2:
            return False
    return True


def test_acceptance_5_fundamental_points():
    for disc in fundamental_discriminants(1, 200):
        assert _is_minimal_solution(disc.D, fundamental_point(disc)), disc.D
    print("ACCEPTANCE 5: PASS")


def test_acceptance_6_local_decision_soundness():
    for disc in fundamental_discriminants(-300, 300):
        D = disc.D
        for cls in class_group(disc).elements:
            f = cls.rep
            for p in prime_divisors(2 * D):
                k = valuation(4 * D, p) + 3
                want = represents_over_zp(f, 1, p)
                for extra in range(5):
                    assert brute_local(f, 1, p, k + extra) == want, \
                        (D, f.tuple(), p, k + extra)
    print("ACCEPTANCE 6: PASS")


def test_acceptance_7_hasse_failure_witnesses():
    rng = random.Random(46)
    extra_primes = []
    q = 3
    while len(extra_primes) < 40:
        if is_prime(q):
            extra_primes.append(q)
        q += 2

    assert Form(2, 1, 3)(Fraction(1, 2), Fraction(1, 3)) == 1

    for disc in fundamental_discriminants(-500, 500):
        D = disc.D
        failures = hasse_failures(disc, bound=1000, certify=True)
        for cls in failures:
            f = cls.rep
            test_primes = prime_divisors(2 * D) + \
                [p for p in rng.sample(extra_primes, 20) if D % p != 0]
            for p in test_primes:
                assert represents_over_zp(f, 1, p), (D, f.tuple(), p)
            assert represents_over_qp(f, 1, REAL)
            assert represents_globally(f, 1, 1000) is None
        if D == -23:
            assert any(c.rep.tuple() in ((2, 1, 3), (2, -1, 3))
                       for c in failures)
    print("ACCEPTANCE 7: PASS")


def test_acceptance_8_equivalence_oracle():
    rng = random.Random(8128)
    discs = [d.D for d in fundamental_discriminants(-150, 150)]
    GENS = [(1, 1, 0, 1), (1, -1, 0, 1), (0, -1, 1, 0)]

    def forms_of(D):
        return [c.rep for c in class_group(as_discriminant(D)).elements]

    checked = 0
    while checked < 500:
        D = rng.choice(discs)
        pool = forms_of(D)
        f = rng.choice(pool)
        if checked % 2 == 0:
            # transform f by a short word in SL2 generators, keep height small
            g = f
            for _ in range(rng.randrange(1, 4)):
                gen = rng.choice(GENS)
                cand = g.transform(gen)
                if max(abs(cand.a), abs(cand.b), abs(cand.c)) <= 120:
                    g = cand
        else:
            g = rng.choice(pool)
        assert is_equivalent(f, g) == brute_equivalent(f, g, 12), \
            (D, f.tuple(), g.tuple())
        checked += 1
    print("ACCEPTANCE 8: PASS")


def test_acceptance_9_cli_contract():
    base = [sys.executable, "-m", "pellsha.cli"]
    ok = subprocess.run(base + ["sha", "-23"], capture_output=True)
    assert ok.returncode == 0
    bad = subprocess.run(base + ["sha", "20"], capture_output=True)
    assert bad.returncode == 2

    cmd = base + ["verify", "--min", "-500", "--max", "500", "--format", "json"]
    outs = [subprocess.run(cmd + ["--jobs", str(j)],
                           capture_output=True, text=True)
            for j in (1, 2, 4)]
    assert all(r.returncode == 0 for r in outs)
    assert outs[0].stdout == outs[1].stdout == outs[2].stdout
    data = json.loads(outs[0].stdout)
    assert all(row["ok"] is True for row in data)
    assert all(isinstance(row["D"], str) for row in data)
    print("ACCEPTANCE 9: PASS")
