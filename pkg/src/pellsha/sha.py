"""The Tate-Shafarevich group of the Pell conic x^2 - D y^2 = 4 over Z,
realized as the form classes of discriminant D that represent 1 over
every Z_p (and over R), and its verification against the square classes
of the narrow class group and the counting formula h+ / 2^(t-1).
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

from .arith import is_prime, kronecker, prime_divisors
from .bqf import (ClassGroup, FormClass, class_group, compose, form_class,
                  is_equivalent, principal_form, represents_globally,
                  represents_over_zp, squared_subgroup)
from .qfield import (FractionalIdeal, as_discriminant, ideal_conjugate,
                     ideal_inverse, ideal_mul, ideal_norm, ideal_to_form,
                     splitting_type, unit_ideal)


class NoSplitGenerators(RuntimeError):
    pass


@dataclass
class ShaReport:
    D: int
    h_plus: int
    t: int
    sha_order: int
    squared_order: int
    genus_index: int
    sha_classes: list[FormClass]
    hasse_failures: list[FormClass]
    ok: bool


def _local_primes(D: int) -> list[int]:
    ps = prime_divisors(2 * D)
    return ps


def sha_classes(D, group: ClassGroup | None = None) -> list[FormClass]:
    """Classes whose forms represent 1 over R and over Z_p for all p | 2D.

    (For p not dividing 2D every form of discriminant D represents every
    p-adic unit, so these are all the local conditions.)
    """
    disc = as_discriminant(D)
    G = group if group is not None else class_group(disc)
    ps = _local_primes(disc.D)
    out = []
    for cls in G.elements:
        f = cls.rep
        if disc.D < 0 and f.a < 0:
            continue  # fails at the real place
        if all(represents_over_zp(f, 1, p) for p in ps):
            out.append(cls)
    return out


def sha_order(D) -> int:
    return len(sha_classes(D))


def verify_main_theorem(D) -> ShaReport:
    """Compute #Sha three ways and check they agree.

    Route 1: local solvability tests class by class.
    Route 2: the subgroup of squares in the narrow class group.
    Route 3: the counting formula h+ / 2^(t-1).
    """
    disc = as_discriminant(D)
    G = class_group(disc)
    sha = sha_classes(disc, G)
    squares = squared_subgroup(G)
    genus_index = 2 ** (disc.t - 1)
    counted = G.order // genus_index
    principal = G.identity
    sha_set = {c.rep.tuple() for c in sha}
    sq_set = {c.rep.tuple() for c in squares}
    ok = (
        len(sha) == len(squares) == counted
        and G.order % genus_index == 0
        and sha_set == sq_set
        and principal.rep.tuple() in sha_set
    )
    failures = [c for c in sha if c != principal]
    return ShaReport(
        D=disc.D,
        h_plus=G.order,
        t=disc.t,
        sha_order=len(sha),
        squared_order=len(squares),
        genus_index=genus_index,
        sha_classes=sha,
        hasse_failures=failures,
        ok=ok,
    )


def hasse_failures(D, bound: int = 1000, certify: bool = True) -> list[FormClass]:
    """Nonprincipal classes that are everywhere locally solvable for 1.

    With certify=True each class is additionally checked to have no
    global representation of 1 with |x|, |y| <= bound.
    """
    disc = as_discriminant(D)
    G = class_group(disc)
    out = [c for c in sha_classes(disc, G) if c != G.identity]
    if certify:
        for c in out:
            witness = represents_globally(c.rep, 1, bound)
            assert witness is None, (
                f"{c.rep} globally represents 1 at {witness}; not a Hasse failure")
    return out


def norm_one_representative(c: FormClass, bound: int = 1000) -> FractionalIdeal:
    """A norm-one ideal p1 * conj(p1)^-1 whose class is c (c must be a
    square, i.e. lie in Sha); searches split primes p < bound."""
    D = c.D
    disc = as_discriminant(D)
    principal = form_class(principal_form(disc))
    if c == principal:
        return unit_ideal(disc)
    p = 2
    while p < bound:
        if is_prime(p) and kronecker(disc.D, p) == 1:
            P = splitting_type(disc, p).primes[0]
            for cand in (P, ideal_conjugate(P)):
                g = form_class(ideal_to_form(cand))
                if compose(g, g) == c:
                    rep = ideal_mul(cand, ideal_inverse(ideal_conjugate(cand)))
                    assert ideal_norm(rep) == 1
                    assert form_class(ideal_to_form(rep)) == c
                    return rep
        p += 1
    raise NoSplitGenerators(
        f"no split prime below {bound} squares to the class of {c.rep}")


def fundamental_discriminants(dmin: int, dmax: int):
    """Fundamental discriminants D with dmin <= D <= dmax, ascending."""
    for D in range(dmin, dmax + 1):
        try:
            yield as_discriminant(D)
        except ValueError:
            continue


def scan(dmin: int, dmax: int, jobs: int = 1) -> list[ShaReport]:
    """verify_main_theorem over every fundamental D in [dmin, dmax]."""
    Ds = [d.D for d in fundamental_discriminants(dmin, dmax)]
    if jobs <= 1:
        return [verify_main_theorem(D) for D in Ds]
    chunk = max(1, len(Ds) // (jobs * 16))
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(verify_main_theorem, Ds, chunksize=chunk))
