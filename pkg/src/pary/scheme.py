"""Translation association schemes on (F_q, +) from partitions of F_q.

Three independent verdicts are available for a partition P = {{0}, P_1, ..., P_d}:

* ``criterion_check`` -- count distinct Walsh vectors against |f(F_q^*)|;
* ``reflexivity_check`` -- compare |P| with the size of its dual partition;
* ``verify_scheme_bruteforce`` -- count a + b = delta over P_i x P_j and check
  the count is constant on every block (the intersection numbers p^k_ij).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from .cyclo import Cyc, canonicalize_array
from .errors import InternalMismatch, NonzeroAtOrigin
from .func import PFunc, image_star, is_fp_star_invariant, level_set
from .gf import FieldCtx
from .walsh import WalshSpectrum, group_ring_transform, walsh_vector_rows

BRUTEFORCE_MAX_Q = 4096
ORIGIN = "origin"


@dataclass(frozen=True, eq=False)
class Partition:
    field: FieldCtx
    blocks: tuple[np.ndarray, ...]
    labels: tuple[Any, ...]

    def __post_init__(self):
        q = self.field.q
        blocks = tuple(np.sort(np.asarray(b, dtype=np.int64)) for b in self.blocks)
        if len(blocks) != len(self.labels):
            raise ValueError("one label per block")
        if any(b.size == 0 for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        seen = np.zeros(q, dtype=np.int64)
        for b in blocks:
            seen[b] += 1
        if not np.all(seen == 1):
            raise ValueError("blocks must be disjoint and cover F_q")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def scheme_shaped(self) -> bool:
        return self.blocks[0].tolist() == [0]

    def block_index(self) -> np.ndarray:
        idx = np.empty(self.field.q, dtype=np.int64)
        for k, b in enumerate(self.blocks):
            idx[b] = k
        return idx

    def same_as(self, other: "Partition") -> bool:
        """Identical up to block order."""
        mine = sorted(tuple(b.tolist()) for b in self.blocks)
        theirs = sorted(tuple(b.tolist()) for b in other.blocks)
        return mine == theirs

    def to_json(self) -> dict:
        return {
            "field": self.field.spec,
            "blocks": [{"label": lab, "elements": b.tolist()} for lab, b in zip(self.labels, self.blocks)],
        }


@dataclass(frozen=True, eq=False)
class DualPartition:
    partition: Partition
    fingerprints: tuple[tuple[Cyc, ...], ...]

    @property
    def blocks(self) -> tuple[np.ndarray, ...]:
        return self.partition.blocks

    def __len__(self) -> int:
        return len(self.partition)


@dataclass
class SchemeReport:
    class_count: int
    is_scheme: bool
    labels: list = dc_field(default_factory=list)
    image_size: int | None = None
    vset_size: int | None = None
    method: str = ""
    intersection_numbers: list | None = None
    symmetry_ok: bool | None = None
    violation: dict | None = None
    partition_size: int | None = None
    dual_size: int | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def level_partition(f: PFunc) -> Partition:
    """{0} followed by D*_{f,i} for each i in f(F_q^*), in increasing i."""
    if f(0) != 0:
        raise NonzeroAtOrigin(f"f(0) = {f(0)}")
    blocks = [np.array([0], dtype=np.int64)]
    labels: list[Any] = [ORIGIN]
    for i in sorted(image_star(f)):
        d = level_set(f, i)
        blocks.append(d[d != 0])
        labels.append(i)
    return Partition(f.field, tuple(blocks), tuple(labels))


def block_char_sums(part: Partition) -> np.ndarray:
    """Canonical coefficients of chi_beta(P_k), shape (d+1, q, p-1)."""
    fld = part.field
    out = []
    for b in part.blocks:
        arr = np.zeros((fld.q, fld.p), dtype=np.int64)
        arr[b, 0] = 1
        out.append(canonicalize_array(group_ring_transform(fld, arr, +1)))
    return np.stack(out)


def dual_partition(part: Partition) -> DualPartition:
    """Group beta by the fingerprint (chi_beta(P_0), ..., chi_beta(P_d))."""
    fld = part.field
    sums = block_char_sums(part)
    rows = np.concatenate(list(sums), axis=1)
    _, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # np.unique sorts fingerprints; reorder groups by their least element
    order = np.argsort(first)
    blocks, prints = [], []
    for g in order:
        members = np.flatnonzero(inverse == g)
        blocks.append(members)
        beta = int(members[0])
        prints.append(tuple(Cyc(fld.p, sums[k, beta]) for k in range(len(part))))
    labels = tuple(range(len(blocks)))
    return DualPartition(Partition(fld, tuple(blocks), labels), tuple(prints))


def reflexivity_check(part: Partition) -> bool:
    return len(part) == len(dual_partition(part))


def criterion_check(f: PFunc, spec: WalshSpectrum) -> SchemeReport:
    """Scheme iff |f(F_q^*)| equals the number of distinct Walsh vectors over F_q^*."""
    if f(0) != 0:
        raise NonzeroAtOrigin(f"f(0) = {f(0)}")
    image = sorted(image_star(f))
    if is_fp_star_invariant(f):
        method = "scalar"
        rows = spec.coeffs[1:]
    else:
        method = "vector"
        rows = walsh_vector_rows(spec)[1:]
    vset = len(np.unique(rows, axis=0))
    return SchemeReport(
        class_count=len(image),
        is_scheme=len(image) == vset,
        labels=image,
        image_size=len(image),
        vset_size=vset,
        method=method,
    )


def _pair_counts(fld: FieldCtx, bi: np.ndarray, bj: np.ndarray) -> np.ndarray:
    """counts[delta] = |{(a, b) in bi x bj : a + b = delta}|."""
    counts = np.zeros(fld.q, dtype=np.int64)
    chunk = max(1, (1 << 20) // max(1, bj.size))
    for s in range(0, bi.size, chunk):
        sums = fld.add_vec(bi[s:s + chunk, None], bj[None, :])
        counts += np.bincount(sums.ravel(), minlength=fld.q)
    return counts


def verify_scheme_bruteforce(part: Partition, max_q: int = BRUTEFORCE_MAX_Q) -> SchemeReport:
    """Check the association-scheme axioms directly on the translation relations."""
    fld = part.field
    if fld.q > max_q:
        raise ValueError(f"brute-force verification limited to q <= {max_q}")
    if not part.scheme_shaped:
        raise ValueError("partition must start with the block {0}")
    d = len(part) - 1
    labels = list(part.labels)

    symmetry_ok = True
    for k, b in enumerate(part.blocks):
        if not np.array_equal(np.sort(fld.neg_vec(b)), b):
            return SchemeReport(class_count=d, is_scheme=False, labels=labels, method="bruteforce",
                                symmetry_ok=False, partition_size=d + 1,
                                violation={"kind": "asymmetric", "block": k})

    table = [[[0] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            counts = _pair_counts(fld, part.blocks[i], part.blocks[j])
            for k, bk in enumerate(part.blocks):
                vals = counts[bk]
                bad = np.flatnonzero(vals != vals[0])
                if bad.size:
                    return SchemeReport(
                        class_count=d, is_scheme=False, labels=labels, method="bruteforce",
                        symmetry_ok=symmetry_ok, partition_size=d + 1,
                        violation={"kind": "nonconstant", "i": i, "j": j,
                                   "delta": int(bk[0]), "delta_prime": int(bk[bad[0]]),
                                   "counts": [int(vals[0]), int(vals[bad[0]])]},
                    )
                table[k][i][j] = table[k][j][i] = int(vals[0])
    return SchemeReport(class_count=d, is_scheme=True, labels=labels, method="bruteforce",
                        intersection_numbers=table, symmetry_ok=symmetry_ok, partition_size=d + 1)


def analyze(f: PFunc, spec: WalshSpectrum, verify: bool = True,
            max_q: int = BRUTEFORCE_MAX_Q) -> SchemeReport:
    """Criterion verdict, cross-checked against reflexivity and (small q) brute force."""
    report = criterion_check(f, spec)
    part = level_partition(f)
    dual = dual_partition(part)
    report.partition_size = len(part)
    report.dual_size = len(dual)
    if (len(part) == len(dual)) != report.is_scheme:
        raise InternalMismatch("Walsh criterion and dual-partition size disagree")
    if verify and f.field.q <= max_q:
        brute = verify_scheme_bruteforce(part, max_q=max_q)
        if brute.is_scheme != report.is_scheme:
            raise InternalMismatch("Walsh criterion and brute-force verification disagree")
        report.intersection_numbers = brute.intersection_numbers
        report.symmetry_ok = brute.symmetry_ok
        report.violation = brute.violation
    return report
