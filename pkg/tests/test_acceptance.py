"""Acceptance criteria, one test each, at their stated tolerances and time limits.

Run ``pytest tests/test_acceptance.py`` to get the PASS/FAIL summary lines.
"""

from __future__ import annotations

import time
import numpy as np
import pytest

from pary.bent import analyze_bent, dual_level_sums, is_bent, is_surjective
from pary.codes import check_weights, level_code, table_check
from pary.cyclo import Cyc
from pary.errors import BudgetExceeded
from pary.families import end_to_end, family_new, predict_classes
from pary.func import from_expr, image_star, is_fp_star_invariant, level_set, load_table
from pary.func import scaled_level_sets_invariant
from pary.gf import field_new
from pary.scheme import (analyze, criterion_check, level_partition, reflexivity_check,
                         verify_scheme_bruteforce)
from pary.walsh import (char_sum_level_formula, count_nij, count_nij_direct, inverse_check,
                        walsh_fast, walsh_naive, walsh_vector)

from conftest import DATA, invariant_func, random_func

WITNESS = DATA / "bent_not_weakly_regular_3_6.txt"


class Clock:
    def __init__(self, limit: float):
        self.limit = limit
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.2f} s, limit {self.limit} s"


def F27():
    return field_new(3, 3, [2, 2, 0, 1])


def random_trace_poly(F, rng):
    k = int(rng.integers(1, 4))
    exps = rng.choice(np.arange(1, F.q - 1), size=k, replace=False)
    return from_expr("Tr(" + " + ".join(f"{int(rng.integers(1, F.p))}*x^{int(e)}" for e in exps) + ")", F)


@pytest.mark.criterion(1, "worked ternary example: value set {0, 9, -9}, V-set of size 5, no scheme")
def test_c1_worked_example():
    clock = Clock(1.0)
    F = F27()
    f = from_expr("Tr(2*x - x^5)", F)
    spec = walsh_fast(f)
    assert spec.value_set(nonzero_only=True) == {Cyc.from_int(3, v) for v in (0, 9, -9)}
    vset = {tuple(v.as_integer() for v in walsh_vector(spec, b)) for b in range(1, F.q)}
    assert vset == {(-9, 0), (0, -9), (0, 0), (0, 9), (9, 0)}
    rep = criterion_check(f, spec)
    assert sorted(image_star(f)) == [0, 1, 2] and rep.image_size == 3
    assert rep.vset_size == 5 and not rep.is_scheme
    clock.check()


@pytest.mark.criterion(2, "F_81, Tr(x^16): image {1, 2}, 2-class, brute force confirms")
def test_c2_f81():
    clock = Clock(1.0)
    f = from_expr("Tr(x^16)", field_new(3, 4))
    assert sorted(image_star(f)) == [1, 2]
    rep = criterion_check(f, walsh_fast(f))
    assert rep.is_scheme and rep.class_count == 2
    brute = verify_scheme_bruteforce(level_partition(f))
    assert brute.is_scheme and len(brute.intersection_numbers) == 3
    clock.check()


@pytest.mark.criterion(3, "r = 1 mod 4 family: F_256 Tr(x^15) 2-class; F_361 exponent 72 image {2,4,14} 3-class")
def test_c3_half_order_family():
    clock = Clock(5.0)
    f = from_expr("Tr(x^15)", field_new(2, 8))
    rep = analyze(f, walsh_fast(f), verify=True)
    assert rep.is_scheme and rep.class_count == 2 and rep.intersection_numbers is not None
    spec = family_new("p48", 19, 1, r=5)
    assert spec.q == 361 and spec.exponent == 72
    g = from_expr("Tr(x^72)", field_new(19, 2))
    assert sorted(image_star(g)) == [2, 4, 14]
    rep = analyze(g, walsh_fast(g), verify=True)
    assert rep.is_scheme and rep.class_count == 3 and rep.intersection_numbers is not None
    assert end_to_end(spec).class_count == 3
    clock.check()


@pytest.mark.criterion(4, "two-prime family: F_1024 Tr(x^31) 2-class, verified")
def test_c4_two_prime_family():
    clock = Clock(10.0)
    spec = family_new("p410", 2, 1, p1=3, p2=11, n=1)
    assert (spec.q, spec.exponent) == (1024, 31)
    f = from_expr("Tr(x^31)", field_new(2, 10))
    rep = analyze(f, walsh_fast(f), verify=True)
    assert rep.is_scheme and rep.class_count == 2 and rep.intersection_numbers is not None
    clock.check()


@pytest.mark.criterion(5, "weight tables at q = 81: [64,4] {42:64, 48:16} and [16,4] {6:16, 12:64}")
def test_c5_code_tables():
    clock = Clock(1.0)
    f = from_expr("Tr(x^16)", field_new(3, 4))
    c2 = level_code(f, 2)
    assert (c2.length, c2.dimension) == (64, 4)
    assert c2.weight_distribution == {0: 1, 42: 64, 48: 16}
    c1 = level_code(f, 1)
    assert (c1.length, c1.dimension) == (16, 4)
    assert c1.weight_distribution == {0: 1, 6: 16, 12: 64}
    assert table_check(f, 5, 1, 1)["match"] and table_check(f, 5, 1, 2)["match"]
    clock.check()


@pytest.mark.criterion(6, "bent sweep: scheme verdict equals weak-regularity flag on every bent function")
def test_c6_bent_sweep():
    clock = Clock(60.0)
    disagreements = []
    bent_count = 0

    def visit(f):
        nonlocal bent_count
        spec = walsh_fast(f)
        if f(0) != 0 or not is_bent(spec):
            return
        bent_count += 1
        wr = bool(analyze_bent(f, spec).weakly_regular)
        scheme = criterion_check(f, spec).is_scheme
        if wr != scheme:
            disagreements.append((f.field.spec, f.provenance, wr, scheme))

    for F in (field_new(3, 2), F27()):
        for c in range(1, F.q):
            visit(from_expr(f"Tr(g^{F.log(c)}*x^2)", F))
    rng = np.random.default_rng(20240601)
    F = F27()
    for _ in range(500):
        visit(random_trace_poly(F, rng))

    w = load_table(WITNESS)
    wspec = walsh_fast(w)
    assert is_bent(wspec) and not analyze_bent(w, wspec).weakly_regular
    assert not criterion_check(w, wspec).is_scheme
    clock.check()
    assert bent_count > 0
    assert not disagreements, (
        f"{len(disagreements)} of {bent_count} bent functions disagree, e.g. {disagreements[:3]}")


@pytest.mark.criterion(7, "oracle equivalences: fast = naive, N_ij closed form = count, weight routes agree")
def test_c7_oracles():
    clock = Clock(120.0)
    rng = np.random.default_rng(7)
    for p, m in [(2, 3), (3, 2), (3, 3), (3, 4), (3, 5), (2, 8)]:
        F = field_new(p, m)
        for _ in range(50):
            f = random_func(F, rng, zero_at_origin=False)
            assert np.array_equal(walsh_fast(f).coeffs, walsh_naive(f).coeffs)
    checked = 0
    for p, m in [(3, 3), (5, 2), (3, 2), (2, 4)]:
        F = field_new(p, m)
        for _ in range(10):
            f = random_func(F, rng, zero_at_origin=False)
            spec = walsh_fast(f)
            for _ in range(25):
                i, j, beta = int(rng.integers(p)), int(rng.integers(p)), int(rng.integers(F.q))
                assert count_nij(f, i, j, beta, spec) == count_nij_direct(f, i, j, beta)
                checked += 1
    assert checked >= 1000
    codes_built = 0
    for F in (field_new(3, 4), F27(), field_new(5, 2), field_new(2, 8)):
        fs = [invariant_func(F, rng) for _ in range(4)]
        if F.q == 81:
            fs.append(from_expr("Tr(x^16)", F))
        for f in fs:
            spec = walsh_fast(f)
            for i in range(F.p):
                d = level_set(f, i)
                if (d != 0).any():
                    res = check_weights(level_code(f, i), f, i, spec)
                    assert res["routes"] == ["char_sum", "direct", "walsh"]
                    codes_built += 1
    assert codes_built > 20
    clock.check()


@pytest.mark.criterion(8, "invariants: Parseval, inversion, invariance equivalences, bent identities, triangle")
def test_c8_invariants():
    clock = Clock(120.0)
    rng = np.random.default_rng(8)
    F = F27()
    for t in range(100):
        pm = [(3, 3), (5, 2), (3, 4)][t % 3]
        G = field_new(*pm)
        f = invariant_func(G, rng) if t % 2 else random_func(G, rng, zero_at_origin=False)
        spec = walsh_fast(f)
        assert spec.parseval_ok() and inverse_check(spec, f)
        inv = is_fp_star_invariant(f)
        spectral = all(np.array_equal(spec.coeffs[G.mul_vec(a, np.arange(G.q))], spec.coeffs)
                       for a in range(2, G.p))
        rational = all(char_sum_level_formula(spec, f, i, b).as_integer() is not None
                       for i in range(G.p) for b in range(G.q))
        assert inv == spectral == rational == scaled_level_sets_invariant(f)
        if t % 2:
            assert inv

    bents = [from_expr(f"Tr(g^{k}*x^2)", G) for G in (field_new(3, 2), F, field_new(5, 2), field_new(7, 2))
             for k in range(3)]
    bents.append(load_table(WITNESS))
    for f in bents:
        prof = analyze_bent(f)
        assert is_surjective(f)
        assert all(row["holds"] for row in dual_level_sums(prof))

    examples = [("Tr(x^16)", field_new(3, 4)), ("Tr(2*x - x^5)", F), ("Tr(x^15)", field_new(2, 8)),
                ("Tr(x^72)", field_new(19, 2)), ("Tr(x^31)", field_new(2, 10)), ("Tr(x^2)", F),
                ("Tr(x^2)", field_new(3, 2))]
    funcs = [from_expr(t, G) for t, G in examples]
    funcs += [random_func(F, rng) for _ in range(200)]
    for f in funcs:
        part = level_partition(f)
        c = criterion_check(f, walsh_fast(f)).is_scheme
        assert c == reflexivity_check(part) == verify_scheme_bruteforce(part).is_scheme
    clock.check()


@pytest.mark.criterion(9, "fast transform over F_3^10 under 10 s; naive refused by budget")
def test_c9_performance():
    F = field_new(3, 10)
    f = random_func(F, np.random.default_rng(9))
    start = time.perf_counter()
    spec = walsh_fast(f)
    elapsed = time.perf_counter() - start
    assert spec.coeffs.shape == (59049, 2)
    assert elapsed < 10.0, f"{elapsed:.2f} s"
    with pytest.raises(BudgetExceeded):
        walsh_naive(f)


STATED_SETS = [
    # (kind, params, stated class count, stated image set)
    ("p46", dict(p=3, m=2, r=7), 2, {0, 2}),
    ("p46", dict(p=3, m=2, r=5), 3, {0, 1, 2}),
    ("p48", dict(p=19, m=2, r=5), 4, {0, 1, 6, 14}),
    ("p410", dict(p=101, m=1, p1=3, p2=11, n=1), 5, {10, 15, 87, 96, 100}),
    ("p410", dict(p=101, m=2, p1=3, p2=11, n=2), 6, {0, 27, 35, 37, 45, 91}),
]


@pytest.mark.criterion(10, "large-family predictions: class counts and stated image sets verbatim")
def test_c10_large_predictions():
    clock = Clock(1.0)
    count_errors, set_errors = [], []
    for kind, kw, count, image in STATED_SETS:
        spec = family_new(kind, **kw)
        assert not spec.materializable
        got_count, got_image = predict_classes(spec)
        if got_count != count:
            count_errors.append((kind, kw, got_count, count))
        if set(got_image) != image:
            set_errors.append((kind, kw, sorted(got_image), sorted(image)))
    clock.check()
    assert not count_errors, f"class counts differ: {count_errors}"
    assert not set_errors, f"predicted image sets differ from the stated ones: {set_errors}"
