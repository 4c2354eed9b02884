from __future__ import annotations

import numpy as np
import pytest

from pary.errors import FieldTooLarge, HypothesisViolated
from pary.families import end_to_end, family_new, materialize, predict_classes
from pary.func import image_star
from pary.walsh import walsh_fast


def test_p46_small():
    s = family_new("p46", 3, 1, r=5)
    assert (s.q, s.exponent, s.image, s.class_count) == (81, 16, (1, 2), 2)
    f = materialize(s)
    assert sorted(image_star(f)) == [1, 2]
    rep = end_to_end(s)
    assert rep.is_scheme and rep.class_count == 2 and rep.intersection_numbers is not None


def test_p48_examples():
    s = family_new("p48", 19, 1, r=5)
    assert (s.q, s.exponent, s.image, s.class_count) == (361, 72, (2, 4, 14), 3)
    rep = end_to_end(s)
    assert rep.class_count == 3 and rep.intersection_numbers is not None
    b = family_new("p48", 2, 1, r=17)
    assert (b.q, b.exponent, b.image) == (256, 15, (0, 1))
    assert materialize(b).provenance == "Tr(x^15)"
    assert end_to_end(b).class_count == 2


def test_p410_binary():
    s = family_new("p410", 2, 1, p1=3, p2=11, n=1)
    assert (s.N, s.q, s.exponent, s.image, s.class_count) == (33, 1024, 31, (0, 1), 2)
    rep = end_to_end(s)
    assert rep.is_scheme and rep.intersection_numbers is not None


def test_large_predictions():
    assert predict_classes(family_new("p46", 3, 2, r=7)) == (2, (0, 2))
    s = family_new("p46", 3, 2, r=5)
    assert predict_classes(s) == (3, (0, 1, 2))
    assert not s.materializable and s.q_text == "3^20"
    assert predict_classes(family_new("p410", 101, 1, p1=3, p2=11, n=1)) == (5, (10, 15, 87, 96, 100))
    assert family_new("p48", 19, 2, r=5).class_count == 4
    assert family_new("p410", 101, 2, p1=3, p2=11, n=2).class_count == 6


def test_not_materializable():
    s = family_new("p46", 3, 2, r=7)
    assert s.q_text == "3^42"
    with pytest.raises(FieldTooLarge):
        materialize(s)
    assert s.to_json()["materializable"] is False


@pytest.mark.parametrize("kind,kw,clause", [
    ("p46", dict(p=2, r=7, m=1), "p primitive root mod r^m"),
    ("p46", dict(p=4, r=5, m=1), "p prime"),
    ("p46", dict(p=3, r=9, m=1), "r odd prime"),
    ("p48", dict(p=3, r=7, m=1), "r = 1 mod 4"),
    ("p48", dict(p=2, r=5, m=1), "ord_{r^m}(p) = phi(r^m)/2"),
    ("p410", dict(p=101, p1=3, p2=5, m=1, n=1), "p1 = p2 = 3 mod 4"),
    ("p410", dict(p=101, p1=3, p2=7, m=1, n=1), "gcd(p1(p1-1), p2(p2-1)) = 2"),
    ("p410", dict(p=3, p1=3, p2=11, m=1, n=1), "p >= 7"),
])
def test_hypothesis_violations(kind, kw, clause):
    with pytest.raises(HypothesisViolated) as exc:
        family_new(kind, **kw)
    assert exc.value.clause == clause


def test_binary_p46_refused():
    # 2 is a primitive root mod 3, so the p >= 3 clause is what rejects this one
    with pytest.raises(HypothesisViolated) as exc:
        family_new("p46", 2, 1, r=3)
    assert exc.value.clause == "p >= 3"


def test_three_is_primitive_mod_seven():
    assert family_new("p46", 3, 1, r=7).class_count == 2


@pytest.mark.parametrize("kind,kw", [
    ("p46", dict(p=3, m=1, r=5)), ("p46", dict(p=3, m=1, r=7)), ("p46", dict(p=5, m=1, r=3)),
    ("p46", dict(p=5, m=2, r=3)), ("p46", dict(p=7, m=1, r=5)),
    ("p48", dict(p=19, m=1, r=5)), ("p48", dict(p=2, m=1, r=17)), ("p48", dict(p=29, m=1, r=5)),
    ("p410", dict(p=2, m=1, p1=3, p2=11, n=1)),
])
def test_materializable_instances(kind, kw):
    s = family_new(kind, **kw)
    if not s.materializable:
        pytest.skip("outside the field cap")
    f = materialize(s)
    values = walsh_fast(f).value_set(nonzero_only=True)
    assert len(values) == s.class_count
    rep = end_to_end(s, verify=s.q <= 4096)
    assert rep.class_count == s.class_count
    if s.level_sizes is not None:
        for i, size in s.level_sizes:
            assert int(np.count_nonzero(f.values[1:] == i)) == size


def test_family_json():
    obj = family_new("p46", 3, 2, r=7).to_json()
    assert obj["q"] == "3^42" and obj["class_count"] == 2 and obj["image"] == [0, 2]
    assert isinstance(obj["exponent"], str)
