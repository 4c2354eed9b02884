"""Exact Walsh-Hadamard spectra W_f(beta) = sum_x zeta^{f(x) - Tr(beta x)}.

Two routes: ``walsh_naive`` evaluates the defining sum for every beta using
field multiplication and the trace table; ``walsh_fast`` treats zeta^{f(x)} as an
m-dimensional p x ... x p array over Z[C_p] and applies the size-p Fourier kernel
along each axis, then reads the result at beta's dual-basis coordinates.
Everything is integer arithmetic; multiplying by zeta^k is a cyclic shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclo import Cyc, canonicalize_array
from .errors import BudgetExceeded, InternalMismatch
from .func import PFunc, level_set
from .gf import FieldCtx

NAIVE_BUDGET = 1 << 14


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    field: FieldCtx
    coeffs: np.ndarray  # shape (q, p-1), canonical Z[zeta_p] coordinates
    f_hash: str

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != (self.field.q, self.field.p - 1):
            raise ValueError("spectrum has wrong shape")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return self.field.q

    def __getitem__(self, beta: int) -> Cyc:
        return Cyc(self.field.p, self.coeffs[beta])

    def __eq__(self, other) -> bool:
        return (isinstance(other, WalshSpectrum) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def values(self) -> list[Cyc]:
        p = self.field.p
        return [Cyc(p, row) for row in self.coeffs.tolist()]

    def value_set(self, nonzero_only: bool = True) -> set[Cyc]:
        rows = np.unique(self.coeffs[1:] if nonzero_only else self.coeffs, axis=0)
        return {Cyc(self.field.p, r) for r in rows.tolist()}

    def value_multiset(self, nonzero_only: bool = True) -> dict[Cyc, int]:
        rows, counts = np.unique(self.coeffs[1:] if nonzero_only else self.coeffs,
                                 axis=0, return_counts=True)
        return {Cyc(self.field.p, r): int(c) for r, c in zip(rows.tolist(), counts.tolist())}

    def group_ring(self) -> np.ndarray:
        q, p = self.field.q, self.field.p
        out = np.zeros((q, p), dtype=object if self.coeffs.dtype == object else np.int64)
        out[:, 1:] = self.coeffs
        return out

    def parseval_sum(self) -> Cyc:
        p = self.field.p
        total = Cyc.zero(p)
        for w in self.values():
            total = total + w.norm_sq()
        return total

    def parseval_ok(self) -> bool:
        return self.parseval_sum() == self.field.q ** 2

    def to_json(self) -> dict:
        return {
            "field": self.field.spec,
            "f_hash": self.f_hash,
            "values": [w.to_json() for w in self.values()],
        }


def group_ring_transform(field: FieldCtx, arr: np.ndarray, sign: int) -> np.ndarray:
    """out[beta] = sum_x arr[x] * zeta^(sign * Tr(beta x)) for group-ring rows arr[x].

    ``arr`` has shape (q, p); column e holds the coefficient of zeta^e.
    """
    p, m, q = field.p, field.m, field.q
    a = np.asarray(arr).reshape((p,) * m + (p,))
    for axis in range(m):
        a = np.moveaxis(a, axis, 0)
        out = np.zeros_like(a)
        for c in range(p):
            acc = out[c]
            for x in range(p):
                s = (sign * x * c) % p
                acc += np.roll(a[x], s, axis=-1) if s else a[x]
        a = np.moveaxis(out, 0, axis)
    flat = np.ascontiguousarray(a).reshape(q, p)
    return flat[field.trace_coordinates]


def _fwht_binary(field: FieldCtx, f: PFunc) -> np.ndarray:
    m, q = field.m, field.q
    a = (1 - 2 * f.values).astype(np.int64).reshape((2,) * m)
    for axis in range(m):
        a = np.moveaxis(a, axis, 0)
        a = np.stack([a[0] + a[1], a[0] - a[1]])
        a = np.moveaxis(a, 0, axis)
    w = np.ascontiguousarray(a).reshape(q)[field.trace_coordinates]
    return -w[:, None]  # integer n is stored as coefficient -n of zeta_2


def walsh_fast(f: PFunc) -> WalshSpectrum:
    fld = f.field
    if fld.p == 2:
        return WalshSpectrum(fld, _fwht_binary(fld, f), f.digest)
    arr = np.zeros((fld.q, fld.p), dtype=np.int64)
    arr[np.arange(fld.q), f.values] = 1
    full = group_ring_transform(fld, arr, -1)
    return WalshSpectrum(fld, canonicalize_array(full), f.digest)


def walsh_naive(f: PFunc, budget: int = NAIVE_BUDGET) -> WalshSpectrum:
    """Direct double sum, vectorised over x; O(q^2)."""
    fld = f.field
    q, p = fld.q, fld.p
    if q > budget:
        raise BudgetExceeded(f"naive transform limited to q <= {budget}, got {q}")
    x = np.arange(q, dtype=np.int64)
    out = np.zeros((q, p), dtype=np.int64)
    chunk = max(1, (1 << 22) // q)
    for start in range(0, q, chunk):
        betas = np.arange(start, min(start + chunk, q), dtype=np.int64)
        tr = fld.trace_table[fld.mul_vec(betas[:, None], x[None, :])]
        expo = (f.values[None, :] - tr) % p
        for e in range(p):
            out[start:start + len(betas), e] = (expo == e).sum(axis=1)
    return WalshSpectrum(fld, canonicalize_array(out), f.digest)


def walsh_vector(spec: WalshSpectrum, beta: int) -> tuple[Cyc, ...]:
    """(W(beta), W(2 beta), ..., W((p-1) beta))."""
    fld = spec.field
    return tuple(spec[fld.mul(z, beta)] for z in range(1, fld.p))


def walsh_vector_rows(spec: WalshSpectrum) -> np.ndarray:
    """All Walsh vectors at once: row beta is the concatenation of W(z beta), z = 1..p-1."""
    fld = spec.field
    beta = np.arange(fld.q, dtype=np.int64)
    parts = [spec.coeffs[fld.mul_vec(z, beta)] for z in range(1, fld.p)]
    return np.concatenate(parts, axis=1)


def _trace_fiber(fld: FieldCtx, beta: int, j: int) -> int:
    # |{x : Tr(beta x) = j}|
    if beta == 0:
        return fld.q if j == 0 else 0
    return fld.q // fld.p


def _walsh_mix(spec: WalshSpectrum, i: int, j: int, beta: int) -> int:
    """sum_y sigma_y( zeta^{-i} sum_{z != 0} zeta^{jz} W(z beta) ), a rational integer."""
    fld = spec.field
    p = fld.p
    inner = Cyc.zero(p)
    for z in range(1, p):
        inner = inner + spec[fld.mul(z, beta)].times_root(j * z)
    return inner.times_root(-i).rational_trace()


def count_nij_direct(f: PFunc, i: int, j: int, beta: int) -> int:
    fld = f.field
    tr = fld.trace_table[fld.mul_vec(beta, np.arange(fld.q))]
    return int(np.count_nonzero((f.values == i) & (tr == j)))


def count_nij_formula(spec: WalshSpectrum, f: PFunc, i: int, j: int, beta: int) -> int:
    fld = spec.field
    p, q = fld.p, fld.q
    total = (-q + p * len(level_set(f, i)) + p * _trace_fiber(fld, beta, j)
             + _walsh_mix(spec, i, j, beta))
    n, rem = divmod(total, p * p)
    if rem:
        raise InternalMismatch(f"p^2 does not divide {total} for N({i},{j},{beta})")
    return n


def count_nij(f: PFunc, i: int, j: int, beta: int, spec: WalshSpectrum | None = None) -> int:
    """|{x : f(x) = i, Tr(beta x) = j}| by direct count and by the Walsh formula."""
    if not (0 <= i < f.field.p and 0 <= j < f.field.p):
        raise ValueError("i and j must lie in F_p")
    spec = spec if spec is not None else walsh_fast(f)
    direct = count_nij_direct(f, i, j, beta)
    formula = count_nij_formula(spec, f, i, j, beta)
    if direct != formula:
        raise InternalMismatch(f"N({i},{j},{beta}): direct {direct} != formula {formula}")
    return direct


def char_sum_direct(field: FieldCtx, block: np.ndarray, beta: int) -> Cyc:
    tr = field.trace_table[field.mul_vec(beta, np.asarray(block, dtype=np.int64))]
    return Cyc.from_exponents(field.p, tr.tolist())


def char_sum_level_formula(spec: WalshSpectrum, f: PFunc, i: int, beta: int) -> Cyc:
    """chi_beta(D_{f,i}) from the spectrum: (1/p^2) sum_j zeta^j (T_j + p |Tr fiber_j|).

    T_j is the Galois-traced Walsh mixture; the fiber term is constant in j (and
    so drops out) except at beta = 0, where it contributes q/p.
    """
    fld = spec.field
    p = fld.p
    ring = [_walsh_mix(spec, i, j, beta) + p * _trace_fiber(fld, beta, j) for j in range(p)]
    coeffs = []
    for c in (r - ring[0] for r in ring[1:]):
        v, rem = divmod(c, p * p)
        if rem:
            raise InternalMismatch(f"division by p^2 not exact for chi_{beta}(D_{i})")
        coeffs.append(v)
    return Cyc(p, coeffs)


def char_sum_level(spec: WalshSpectrum, f: PFunc, i: int, beta: int) -> Cyc:
    direct = char_sum_direct(f.field, level_set(f, i), beta)
    formula = char_sum_level_formula(spec, f, i, beta)
    if direct != formula:
        raise InternalMismatch(f"chi_{beta}(D_{i}): direct {direct} != formula {formula}")
    return direct


def inverse_check(spec: WalshSpectrum, f: PFunc) -> bool:
    """sum_x W(x) zeta^{Tr(beta x)} == q zeta^{f(beta)} at every beta."""
    fld = spec.field
    if fld != f.field:
        return False
    q, p = fld.q, fld.p
    back = canonicalize_array(group_ring_transform(fld, spec.group_ring(), +1))
    expected = np.zeros((q, p), dtype=np.int64)
    expected[np.arange(q), f.values] = q
    return bool(np.array_equal(back, canonicalize_array(expected)))


def spectrum_from_values(field: FieldCtx, values, f_hash: str = "") -> WalshSpectrum:
    """Build a spectrum from a list of Cyc values (e.g. a parsed artifact)."""
    coeffs = np.array([list(v.coeffs) for v in values], dtype=np.int64)
    return WalshSpectrum(field, coeffs.reshape(field.q, field.p - 1), f_hash)
