"""The three monomial families f(x) = Tr(x^{(q-1)/N}) and their predicted class counts.

kind "p46": N = r^m, p a primitive root mod r^m, q = p^{phi(r^m)}.
kind "p48": N = r^m, r = 1 mod 4, ord_{r^m}(p) = phi(r^m)/2, q = p^{phi(r^m)/2}.
kind "p410": N = p1^m p2^n, p a common primitive root mod p1^m and p2^n, q = p^{phi(N)/2}.

Predictions reduce the known image values mod p and work for any q; materialising
the function (and checking the prediction) needs q within the field cap.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import gcd

import numpy as np

from .errors import FieldTooLarge, HypothesisViolated, PredictionMismatch
from .func import PFunc, evaluate, image_star, is_fp_star_invariant, TraceExpr
from .gf import MAX_Q, field_new
from .numth import euler_phi, is_common_primitive_root, is_prime, is_primitive_root, mult_order, sqrt_mod
from .scheme import SchemeReport, analyze
from .walsh import walsh_fast

KINDS = ("p46", "p48", "p410")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    p: int
    m: int
    r: int | None = None
    p1: int | None = None
    p2: int | None = None
    n: int | None = None
    N: int = 0
    degree: int = 0  # q = p^degree
    image: tuple[int, ...] = ()
    class_count: int = 0
    level_sizes: tuple[tuple[int, int], ...] | None = None
    max_q: int = MAX_Q

    @property
    def q(self) -> int:
        return self.p ** self.degree

    @property
    def exponent(self) -> int:
        return (self.q - 1) // self.N

    @property
    def materializable(self) -> bool:
        # compare degrees first so astronomical q is never built
        return self.degree * self.p.bit_length() <= self.max_q.bit_length() + 64 and self.q <= self.max_q

    @property
    def q_text(self) -> str:
        return f"{self.p}^{self.degree}"

    def to_json(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None and k != "max_q"}
        out["level_sizes"] = ({str(i): s for i, s in self.level_sizes}
                              if self.level_sizes is not None else None)
        out["image"] = list(self.image)
        out["q"] = self.q_text
        out["exponent"] = str(self.exponent) if not self.materializable else self.exponent
        out["materializable"] = self.materializable
        return out


def _need(cond: bool, clause: str, detail: str = ""):
    if not cond:
        raise HypothesisViolated(clause, detail)


def _inv(a: int, p: int) -> int:
    return pow(a % p, -1, p)


def _reduce_levels(values, sizes, p):
    """Merge (value, size) pairs mod p; sizes may be None."""
    merged: dict[int, int | None] = {}
    for v, s in zip(values, sizes):
        key = v % p
        if s is None or merged.get(key, 0) is None:
            merged[key] = None
        else:
            merged[key] = merged.get(key, 0) + s
    return merged


def _predict_p46(p, r, m):
    rm, rm1 = r ** m, r ** (m - 1)
    phi = euler_phi(rm)
    q = p ** phi
    values = [phi, -rm1]
    sizes = [(q - 1) // rm, (q - 1) // rm1 - (q - 1) // rm]
    if m > 1:
        values.append(0)
        sizes.append(q - 1 - (q - 1) // rm1)
    merged = _reduce_levels(values, sizes, p)
    return phi, merged


def _predict_p48(p, r, m):
    rm, rm1 = r ** m, r ** (m - 1)
    phi = euler_phi(rm)
    if p == 2:
        return phi // 2, {0: None, 1: None}
    s = sqrt_mod(r, p)
    _need(s is not None, "r is a square mod p", f"{r} has no square root mod {p}")
    half = _inv(2, p)
    values = [phi // 2, (s - 1) * rm1 * half, (-s - 1) * rm1 * half]
    if m > 1:
        values.append(0)
    return phi // 2, _reduce_levels(values, [None] * len(values), p)


def _predict_p410(p, p1, p2, m, n):
    N = p1 ** m * p2 ** n
    phi = euler_phi(N)
    if p == 2:
        return phi // 2, {0: None, 1: None}
    s = sqrt_mod(p1 * p2, p)
    _need(s is not None, "p1 p2 is a square mod p", f"{p1 * p2} has no square root mod {p}")
    half = _inv(2, p)
    cof = N // (p1 * p2)
    values = [phi // 2, -phi // (2 * (p1 - 1)), -phi // (2 * (p2 - 1)),
              (1 - s) * cof * half, (1 + s) * cof * half]
    if m > 1 or n > 1:
        values.append(0)
    return phi // 2, _reduce_levels(values, [None] * len(values), p)


def _stated_class_count(kind, p, r, m, image_size) -> int:
    """The class count each family's stated case analysis gives, independent of the image sets."""
    if kind == "p46":
        return 2 if (m == 1 or r % p == 1) else 3
    if kind == "p48":
        if p == 2 or r % p == 1:
            return 2
        return 3 if m == 1 else 4
    return image_size


def family_new(kind: str, p: int, m: int = 1, r: int | None = None, p1: int | None = None,
               p2: int | None = None, n: int | None = None, max_q: int = MAX_Q) -> FamilySpec:
    kind = kind.lower()
    if kind not in KINDS:
        raise ValueError(f"unknown family {kind!r}; expected one of {KINDS}")
    _need(is_prime(p), "p prime", f"{p} is not prime")
    _need(m >= 1, "m >= 1")
    if kind == "p46":
        _need(r is not None and is_prime(r) and r % 2 == 1, "r odd prime", f"r = {r}")
        _need(r != p and is_primitive_root(p, r ** m), "p primitive root mod r^m",
              f"{p} is not a primitive root mod {r}^{m}")
        _need(p >= 3, "p >= 3", f"p = {p}")
        degree, levels = _predict_p46(p, r, m)
        N = r ** m
    elif kind == "p48":
        _need(r is not None and is_prime(r), "r prime", f"r = {r}")
        _need(r % 4 == 1, "r = 1 mod 4", f"r = {r}")
        phi = euler_phi(r ** m)
        _need(r != p and mult_order(p, r ** m) == phi // 2, "ord_{r^m}(p) = phi(r^m)/2",
              f"order of {p} mod {r}^{m} is not {phi // 2}")
        degree, levels = _predict_p48(p, r, m)
        N = r ** m
    else:
        n = 1 if n is None else n
        _need(n >= 1, "n >= 1")
        _need(p1 is not None and p2 is not None and p1 != p2 and is_prime(p1) and is_prime(p2),
              "p1, p2 distinct primes", f"p1 = {p1}, p2 = {p2}")
        _need(p1 % 4 == 3 and p2 % 4 == 3, "p1 = p2 = 3 mod 4")
        _need(gcd(p1 * (p1 - 1), p2 * (p2 - 1)) == 2, "gcd(p1(p1-1), p2(p2-1)) = 2")
        # p = 2 is admitted because the binary case has its own image {0, 1}
        _need(p >= 7 or p == 2, "p >= 7", f"p = {p}")
        _need(p not in (p1, p2) and is_common_primitive_root(p, p1 ** m, p2 ** n),
              "p common primitive root mod p1^m and p2^n")
        degree, levels = _predict_p410(p, p1, p2, m, n)
        N = p1 ** m * p2 ** n
    image = tuple(sorted(levels))
    sizes = None
    if all(v is not None for v in levels.values()):
        sizes = tuple(sorted(levels.items()))
    spec = FamilySpec(kind=kind, p=p, m=m, r=r, p1=p1, p2=p2, n=n, N=N, degree=degree,
                      image=image, class_count=len(image), level_sizes=sizes, max_q=max_q)
    stated = _stated_class_count(kind, p, r, m, len(image))
    if stated != len(image):
        raise PredictionMismatch(f"image {image} disagrees with the stated {stated}-class case")
    return spec


def predict_classes(spec: FamilySpec) -> tuple[int, tuple[int, ...]]:
    return spec.class_count, spec.image


def materialize(spec: FamilySpec) -> PFunc:
    if not spec.materializable:
        raise FieldTooLarge(f"q = {spec.q_text} exceeds the cap {spec.max_q}")
    fld = field_new(spec.p, spec.degree, max_q=spec.max_q)
    f = evaluate(TraceExpr(((1, spec.exponent),), source=f"Tr(x^{spec.exponent})"), fld)
    if not is_fp_star_invariant(f):
        raise PredictionMismatch("monomial is not F_p^*-invariant")
    observed = tuple(sorted(image_star(f)))
    if observed != spec.image:
        raise PredictionMismatch(f"observed image {observed} != predicted {spec.image}")
    if spec.level_sizes is not None:
        for i, size in spec.level_sizes:
            got = int(np.count_nonzero(f.values[1:] == i))
            if got != size:
                raise PredictionMismatch(f"|D*_{i}| = {got}, predicted {size}")
    return f


def end_to_end(spec: FamilySpec, verify: bool = True) -> SchemeReport:
    f = materialize(spec)
    report = analyze(f, walsh_fast(f), verify=verify)
    if not report.is_scheme or report.class_count != spec.class_count:
        raise PredictionMismatch(
            f"observed {report.class_count}-class (scheme={report.is_scheme}), "
            f"predicted {spec.class_count}-class")
    return report
