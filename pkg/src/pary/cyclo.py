"""Exact arithmetic in Z[zeta_p].

A value sum_{i=1}^{p-1} a_i zeta^i is stored by its coefficients in the basis
{zeta, ..., zeta^{p-1}}; the constant term is always rewritten with
1 = -(zeta + ... + zeta^{p-1}).  Because that set is a Q-basis, two values are
equal exactly when their coefficient tuples are.  For p = 2 the ring is Z and
zeta = -1, so the integer n is stored as (-n,).
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .errors import EvenCharacteristic, InvalidUnit, OrderMismatch

IntLike = Union[int, np.integer]


def canonical_from_group_ring(vec) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_{p-1}) of powers zeta^0..zeta^{p-1} -> canonical tuple."""
    c0 = int(vec[0])
    return tuple(int(c) - c0 for c in vec[1:])


def canonicalize_array(arr: np.ndarray) -> np.ndarray:
    """Vectorised canonicalisation of group-ring rows, shape (..., p) -> (..., p-1)."""
    return arr[..., 1:] - arr[..., :1]


class Cyc:
    """Immutable element of Z[zeta_p]."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[IntLike]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != p - 1 or p < 2:
            raise ValueError(f"expected {p - 1} coefficients for p = {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyc is immutable")

    # constructors
    @classmethod
    def zero(cls, p: int) -> "Cyc":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_int(cls, p: int, n: int) -> "Cyc":
        return cls(p, (-int(n),) * (p - 1))

    @classmethod
    def root(cls, p: int, k: int = 1) -> "Cyc":
        k %= p
        if k == 0:
            return cls.from_int(p, 1)
        v = [0] * (p - 1)
        v[k - 1] = 1
        return cls(p, v)

    @classmethod
    def from_group_ring(cls, p: int, vec) -> "Cyc":
        return cls(p, canonical_from_group_ring(vec))

    @classmethod
    def from_exponents(cls, p: int, exps: Iterable[int]) -> "Cyc":
        """sum of zeta^e over the given exponents."""
        counts = [0] * p
        for e in exps:
            counts[int(e) % p] += 1
        return cls.from_group_ring(p, counts)

    def group_ring(self) -> list[int]:
        return [0, *self.coeffs]

    # ring operations
    def _coerce(self, other) -> "Cyc":
        if isinstance(other, Cyc):
            if other.p != self.p:
                raise OrderMismatch(f"zeta_{self.p} vs zeta_{other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return Cyc.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyc(self.p, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.p, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyc(self.p, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, n: int) -> "Cyc":
        return Cyc(self.p, (int(n) * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs, start=1):
            if a:
                for j, b in enumerate(other.coeffs, start=1):
                    if b:
                        out[(i + j) % p] += a * b
        return Cyc.from_group_ring(p, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            return self.coeffs == (-int(other),) * (self.p - 1)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def times_root(self, k: int) -> "Cyc":
        """self * zeta^k, a cyclic shift of exponents."""
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs, start=1):
            out[(i + k) % p] += a
        return Cyc.from_group_ring(p, out)

    # Galois action and friends
    def galois(self, y: int) -> "Cyc":
        """sigma_y: zeta -> zeta^y for a unit y mod p."""
        p = self.p
        if not 1 <= y <= p - 1:
            raise InvalidUnit(f"{y} is not a unit representative mod {p}")
        out = [0] * p
        for i, a in enumerate(self.coeffs, start=1):
            out[i * y % p] += a
        return Cyc.from_group_ring(p, out)

    def conj(self) -> "Cyc":
        return self.galois(self.p - 1)

    def norm_sq(self) -> "Cyc":
        """|a|^2 = a * sigma_{-1}(a)."""
        return self * self.conj()

    def rational_trace(self) -> int:
        """sum_y sigma_y(a), always a rational integer: -sum(a_i)."""
        return -sum(self.coeffs)

    def as_integer(self) -> int | None:
        c = self.coeffs
        if all(v == c[0] for v in c):
            return -c[0]
        return None

    def is_integer_times_root(self, c: int) -> int | None:
        """j with self == c * zeta^j, else None."""
        for j in range(self.p):
            if self == Cyc.root(self.p, j).scale(c):
                return j
        return None

    def to_json(self) -> dict:
        out: dict = {"p": self.p, "coeffs": list(self.coeffs)}
        n = self.as_integer()
        if n is not None:
            out["int"] = n
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Cyc":
        return cls(obj["p"], obj["coeffs"])

    def to_text(self) -> str:
        """Plain rendering: an integer when possible, else a sum of a*z^i terms."""
        n = self.as_integer()
        if n is not None:
            return str(n)
        out = ""
        for i, a in enumerate(self.coeffs, start=1):
            if not a:
                continue
            mono = "z" if i == 1 else f"z^{i}"
            body = mono if abs(a) == 1 else f"{abs(a)}*{mono}"
            if not out:
                out = ("-" if a < 0 else "") + body
            else:
                out += (" - " if a < 0 else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"Cyc({self.p}: {self.to_text()})"


def cyc_root(p: int, k: int) -> Cyc:
    return Cyc.root(p, k)


def gauss_sum(p: int) -> Cyc:
    """sum_{i in F_p} zeta^{i^2}; its square is p* = (-1)^((p-1)/2) p."""
    if p == 2:
        raise EvenCharacteristic("quadratic Gauss sum needs odd p")
    return Cyc.from_exponents(p, (i * i for i in range(p)))


def p_star(p: int) -> int:
    return (-1) ** ((p - 1) // 2) * p
