import random
from fractions import Fraction

import pytest

from pellsha.bqf import Form, class_group, form_class, principal_form
from pellsha.qfield import ideal_norm, ideal_to_form, unit_ideal
from pellsha.sha import (NoSplitGenerators, fundamental_discriminants,
                         hasse_failures, norm_one_representative, scan,
                         sha_classes, sha_order, verify_main_theorem)

random.seed(5)


def test_sha_spot_values():
    expected = {-15: 1, -23: 3, -47: 5, -84: 1, 40: 1, 60: 1, 316: 3}
    for D, order in expected.items():
        assert sha_order(D) == order, D


def test_report_fields():
    r = verify_main_theorem(-23)
    assert r.ok and (r.h_plus, r.t, r.sha_order, r.squared_order) == (3, 1, 3, 3)
    assert r.genus_index == 1
    assert len(r.hasse_failures) == 2
    assert {c.rep for c in r.sha_classes} == {Form(1, 1, 6), Form(2, 1, 3), Form(2, -1, 3)}
    r = verify_main_theorem(-84)
    assert r.ok and r.genus_index == 4 and r.h_plus == 4 and r.sha_order == 1


def test_scan_small_range():
    reports = scan(-300, 300)
    assert all(r.ok for r in reports)
    assert all(r.h_plus == r.sha_order * r.genus_index for r in reports)
    # hasse_failures is sha minus the principal class
    for r in reports:
        assert len(r.hasse_failures) == r.sha_order - 1


def test_hasse_failures_certified():
    failures = hasse_failures(-23, bound=1000, certify=True)
    assert {c.rep for c in failures} == {Form(2, 1, 3), Form(2, -1, 3)}
    assert hasse_failures(-15) == []
    assert hasse_failures(60) == []
    assert len(hasse_failures(316)) == 2


def test_hasse_witness_is_rational_not_integral():
    # the classic witness: f = 2x^2 + xy + 3y^2 takes the value 1 at (1/2, 1/3)
    f = Form(2, 1, 3)
    x, y = Fraction(1, 2), Fraction(1, 3)
    assert f.a * x * x + f.b * x * y + f.c * y * y == 1


def test_sha_closed_under_composition():
    from pellsha.bqf import compose

    for D in (-23, -47, 316, -420, 229):
        classes = sha_classes(D)
        reps = {c.rep.tuple() for c in classes}
        assert principal_form(D).a == 1
        assert form_class(principal_form(D)).rep.tuple() in reps
        for x in classes:
            for y in classes:
                assert compose(x, y).rep.tuple() in reps


def test_real_place_never_decides():
    # every enumerated class rep is positive definite or indefinite, so
    # dropping the real-place condition cannot change the count
    for disc in fundamental_discriminants(-500, 500):
        G = class_group(disc)
        assert all(c.rep.a > 0 or disc.D > 0 for c in G.elements)


def test_norm_one_representative():
    for D in (-23, 316, -47):
        G = class_group(D)
        for cls in sha_classes(D, G):
            rep = norm_one_representative(cls)
            assert ideal_norm(rep) == 1
            assert form_class(ideal_to_form(rep)) == cls
    assert norm_one_representative(form_class(principal_form(-23))) == unit_ideal(-23)


def test_norm_one_representative_bound():
    cls = [c for c in sha_classes(-23) if c.rep != principal_form(-23)][0]
    with pytest.raises(NoSplitGenerators):
        norm_one_representative(cls, bound=2)
