"""Trace codes C_D = {(Tr(beta a))_{a in D} : beta in F_q} and their weight distributions.

Weights are computed three ways that must agree: direct Hamming counts,
the character-sum identity wt = |D| - (1/p) sum_a sum_{alpha} zeta^{a Tr(alpha beta)},
and (for level sets of an F_p^*-invariant f) straight from the Walsh spectrum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (DuplicateElements, EmptyDefiningSet, FieldTooLarge, InternalMismatch,
                     TableNotApplicable)
from .func import PFunc, is_fp_star_invariant, level_set
from .gf import FieldCtx, rank_mod_p
from .numth import euler_phi
from .walsh import WalshSpectrum, group_ring_transform, walsh_fast

DIRECT_BUDGET = 1 << 26  # q * n trace evaluations for the enumeration oracle
ENUM_MAX_Q = 1 << 20


@dataclass(frozen=True, eq=False)
class TraceCode:
    field: FieldCtx
    defining_set: np.ndarray
    dimension: int

    @property
    def length(self) -> int:
        return int(self.defining_set.size)

    def codeword(self, beta: int) -> np.ndarray:
        return self.field.trace_table[self.field.mul_vec(beta, self.defining_set)]

    @cached_property
    def trace_counts(self) -> np.ndarray:
        """counts[beta, e] = |{alpha in D : Tr(beta alpha) = e}| via the additive transform."""
        fld = self.field
        arr = np.zeros((fld.q, fld.p), dtype=np.int64)
        arr[self.defining_set, 0] = 1
        return group_ring_transform(fld, arr, +1)

    @property
    def kernel_size(self) -> int:
        return self.field.p ** (self.field.m - self.dimension)

    @cached_property
    def weights(self) -> np.ndarray:
        """wt(c_D(beta)) for every beta, by the character-sum identity."""
        return weights_char_sum(self)

    @cached_property
    def weight_distribution(self) -> dict[int, int]:
        """A_w over distinct codewords (each codeword arises from p^{m-k} values of beta)."""
        hist = Counter(self.weights.tolist())
        out = {}
        for w, c in sorted(hist.items()):
            a, rem = divmod(c, self.kernel_size)
            if rem:
                raise InternalMismatch(f"weight {w} count {c} not divisible by {self.kernel_size}")
            out[int(w)] = a
        return out

    def to_json(self) -> dict:
        return {
            "field": self.field.spec,
            "n": self.length,
            "k": self.dimension,
            "weights": {str(w): a for w, a in self.weight_distribution.items()},
            "two_weight": two_weight_flag(self),
        }


def build_code(field: FieldCtx, defining_set) -> TraceCode:
    d = np.asarray(defining_set, dtype=np.int64).reshape(-1)
    if d.size == 0:
        raise EmptyDefiningSet("defining set is empty")
    if np.any(d <= 0) or np.any(d >= field.q):
        raise ValueError("defining set must lie in F_q^*")
    if np.unique(d).size != d.size:
        raise DuplicateElements("defining set has repeated elements")
    if field.q > ENUM_MAX_Q:
        raise FieldTooLarge(f"code enumeration limited to q <= {ENUM_MAX_Q}")
    k = rank_mod_p(np.unique(field.digits_matrix(d), axis=0).tolist(), field.p)
    return TraceCode(field, np.sort(d), k)


def level_code(f: PFunc, level: int, star: bool = True) -> TraceCode:
    """C_D for D = D*_{f,level} (or D_{f,level}, which must then avoid 0)."""
    d = level_set(f, level)
    if star:
        d = d[d != 0]
    elif d.size and d[0] == 0:
        raise ValueError("D_{f,level} contains 0; use the starred level set")
    return build_code(f.field, d)


# -- weight routes -----------------------------------------------------------

def weights_direct(code: TraceCode, budget: int = DIRECT_BUDGET) -> np.ndarray:
    """Hamming weights by evaluating every codeword coordinate."""
    fld = code.field
    if fld.q * code.length > budget:
        raise FieldTooLarge(f"direct enumeration limited to q*n <= {budget}")
    out = np.empty(fld.q, dtype=np.int64)
    chunk = max(1, (1 << 22) // code.length)
    for s in range(0, fld.q, chunk):
        betas = np.arange(s, min(s + chunk, fld.q), dtype=np.int64)
        tr = fld.trace_table[fld.mul_vec(betas[:, None], code.defining_set[None, :])]
        out[s:s + betas.size] = np.count_nonzero(tr, axis=1)
    return out


def weights_char_sum(code: TraceCode) -> np.ndarray:
    """(1 - 1/p)|D| - (1/p) sum_{a != 0} sigma_a(chi_beta(D)), exactly."""
    p = code.field.p
    counts = code.trace_counts
    n = code.length
    # sum over a in F_p^* of sigma_a(sum_e c_e zeta^e) = (p-1) c_0 - (n - c_0) = p c_0 - n
    galois_sum = p * counts[:, 0] - n
    num = (p - 1) * n - galois_sum
    if np.any(num % p):
        raise InternalMismatch("character-sum weight is not an integer")
    return num // p


def weights_walsh(f: PFunc, level: int, spec: WalshSpectrum | None = None) -> np.ndarray:
    """Weights of C_{D*_{f,level}} from W_f, valid when f(a x) = f(x) for a in F_p^*.

    wt = (p-1)/p |D_{f,i}| - (p-1)/p^2 sum_y sigma_y(zeta^{-i} W_f(beta)) for beta != 0.
    The level set here includes 0 when i = 0: dropping the origin changes
    chi_beta(D) by exactly 1 and the weight not at all.
    """
    if not is_fp_star_invariant(f):
        raise ValueError("Walsh weight formula needs an F_p^*-invariant function")
    fld = f.field
    p = fld.p
    spec = spec if spec is not None else walsh_fast(f)
    g = spec.group_ring()
    traced = p * g[:, level % p] - g.sum(axis=1)
    size = len(level_set(f, level))
    num = (p - 1) * p * size - (p - 1) * traced
    if np.any(num[1:] % (p * p)):
        raise InternalMismatch("Walsh weight formula is not an integer")
    out = num // (p * p)
    out[0] = 0
    return out


def check_weights(code: TraceCode, f: PFunc | None = None, level: int | None = None,
                  spec: WalshSpectrum | None = None) -> dict:
    """Run every applicable route and require exact agreement."""
    routes = {"char_sum": code.weights}
    fld = code.field
    if fld.q * code.length <= DIRECT_BUDGET:
        routes["direct"] = weights_direct(code)
    if f is not None and level is not None and is_fp_star_invariant(f):
        routes["walsh"] = weights_walsh(f, level, spec)
    ref = routes["char_sum"]
    for name, w in routes.items():
        if not np.array_equal(w, ref):
            bad = int(np.flatnonzero(w != ref)[0])
            raise InternalMismatch(f"{name} weight at beta={bad}: {int(w[bad])} != {int(ref[bad])}")
    return {"routes": sorted(routes), "agree": True}


def weight_of(code: TraceCode, beta: int, f: PFunc | None = None, level: int | None = None,
              spec: WalshSpectrum | None = None) -> int:
    """wt(c_D(beta)) by direct count, checked against the character-sum and Walsh routes."""
    direct = int(np.count_nonzero(code.codeword(beta)))
    routes = {"char_sum": int(code.weights[beta])}
    if f is not None and level is not None and is_fp_star_invariant(f):
        routes["walsh"] = int(weights_walsh(f, level, spec)[beta])
    for name, w in routes.items():
        if w != direct:
            raise InternalMismatch(f"{name} weight {w} != direct count {direct} at beta={beta}")
    return direct


def two_weight_flag(code: TraceCode) -> bool:
    return len([w for w in code.weight_distribution if w]) == 2


def generator_matrix(code: TraceCode) -> np.ndarray:
    """k x n matrix whose rows c_D(beta) for independent beta span the code."""
    fld = code.field
    rows: list[list[int]] = []
    for i in range(fld.m):
        row = code.codeword(fld.p ** i).tolist()
        if rank_mod_p(rows + [row], fld.p) > len(rows):
            rows.append(row)
        if len(rows) == code.dimension:
            break
    return np.array(rows, dtype=np.int64)


def dump_generator_matrix(code: TraceCode) -> str:
    g = generator_matrix(code)
    lines = [f"{g.shape[0]} {g.shape[1]} {code.field.p}"]
    sep = "" if code.field.p <= 10 else " "
    lines += [sep.join(map(str, row)) for row in g.tolist()]
    return "\n".join(lines) + "\n"


# -- closed-form tables for the r^m monomial family ---------------------------

@dataclass(frozen=True)
class TablePrediction:
    which: int
    level: int
    star: bool
    n: Fraction
    k: int
    weights: dict  # Fraction weight -> Fraction frequency


def table_prediction(p: int, r: int, m: int, which: int, variant: str = "stated") -> TablePrediction:
    """Closed-form [n, k] and weight distribution for f = Tr(x^{(q-1)/r^m}), q = p^{phi(r^m)}.

    ``variant="corrected"`` shifts both weights of tables 3 and 4 by (p-1)/p: those
    weights come from the Walsh weight formula evaluated with |D*_{f,0}| where
    |D_{f,0}| = |D*_{f,0}| + 1 belongs.
    """
    if which not in (1, 2, 3, 4):
        raise ValueError("table must be 1, 2, 3 or 4")
    if variant not in ("stated", "corrected"):
        raise ValueError("variant must be 'stated' or 'corrected'")
    k = euler_phi(r ** m)
    q = p ** k
    s = p ** (k // 2)  # sqrt(q); phi(r^m) is even for odd r
    F = Fraction
    rm, rm1 = r ** m, r ** (m - 1)
    if which == 1:
        big = F((p - 1) * (q + s) * (r - 1), p * rm)
        w = {big: F(q - 1) - F(q - 1, rm1) + F(q - 1, rm),
             big - F((p - 1) * s, p): F(q - 1, rm1) - F(q - 1, rm)}
        return TablePrediction(1, (-rm1) % p, False, F(q - 1, rm1) - F(q - 1, rm), k, w)
    if which == 2:
        if r % p == 1:
            raise TableNotApplicable("table 2 needs r != 1 mod p")
        big = F((p - 1) * (q + s), p * rm)
        w = {big: F(q - 1) - F(q - 1, rm), big - F((p - 1) * s, p): F(q - 1, rm)}
        return TablePrediction(2, euler_phi(rm) % p, False, F(q - 1, rm), k, w)
    if m == 1:
        raise TableNotApplicable(
            "tables 3 and 4 describe C_{D*_{f,0}}; at m = 1 that set has size "
            "q - 1 - (q - 1)/r^0 = 0, so the code is empty")
    base = F(p - 1, p) * (F(q - 1) - F(q + s, rm1))
    shifted = F(p - 1, p) * (F(q + s - 1) - F(q + s, rm1))
    if variant == "corrected":
        base += F(p - 1, p)
        shifted += F(p - 1, p)
    if which == 3:
        if r % p != 1:
            raise TableNotApplicable("table 3 needs r = 1 mod p")
        extra = F((p - 1) * (q - 1), p * rm)
        w = {extra + base: F(q - 1) - F(q - 1, rm1) + F(q - 1, rm),
             extra + shifted: F(q - 1, rm1) - F(q - 1, rm)}
        return TablePrediction(3, 0, True, F(q - 1) - F(q - 1, rm1) + F(q - 1, rm), k, w)
    if r % p == 1:
        raise TableNotApplicable("table 4 needs r != 1 mod p")
    w = {base: F(q - 1) - F(q - 1, rm1), shifted: F(q - 1, rm1)}
    return TablePrediction(4, 0, True, F(q - 1) - F(q - 1, rm1), k, w)


def _fmt(x: Fraction) -> str | int:
    return int(x) if x.denominator == 1 else str(x)


def table_check(f: PFunc, r: int, m: int, which: int,
                spec: WalshSpectrum | None = None, variant: str = "stated") -> dict:
    """Build the code the table describes and compare every cell exactly."""
    fld = f.field
    p = fld.p
    if fld.q != p ** euler_phi(r ** m):
        raise ValueError(f"field {fld.spec} is not F_{p}^phi({r}^{m})")
    pred = table_prediction(p, r, m, which, variant)
    code = level_code(f, pred.level, star=pred.star)
    check_weights(code, f, pred.level, spec)
    actual = {w: a for w, a in code.weight_distribution.items() if w}
    cells = [
        {"cell": "n", "predicted": _fmt(pred.n), "actual": code.length, "match": pred.n == code.length},
        {"cell": "k", "predicted": pred.k, "actual": code.dimension, "match": pred.k == code.dimension},
        {"cell": "A_0", "predicted": 1, "actual": code.weight_distribution.get(0, 0),
         "match": code.weight_distribution.get(0, 0) == 1},
    ]
    for w, a in sorted(pred.weights.items()):
        got = actual.get(int(w)) if w.denominator == 1 else None
        cells.append({"cell": f"A_{_fmt(w)}", "predicted": _fmt(a), "actual": got,
                      "match": got is not None and got == a})
    predicted_weights = {w for w in pred.weights}
    for w in sorted(set(actual) - {int(x) for x in predicted_weights if x.denominator == 1}):
        cells.append({"cell": f"A_{w}", "predicted": 0, "actual": actual[w], "match": False})
    return {
        "table": which,
        "variant": variant,
        "level": pred.level,
        "star": pred.star,
        "cells": cells,
        "match": all(c["match"] for c in cells),
        "code": code.to_json(),
    }
