"""p-ary functions F_q -> F_p as dense value tables, plus a small trace-polynomial language.

Grammar (whitespace ignored, ``-`` may also be the unicode minus)::

    expr  := "Tr(" [sign] term (sign term)* ")"
    term  := [coef "*"] "x" ["^" int]
    coef  := int | "g^" int

Integer coefficients live in the prime subfield; ``g^k`` is the k-th power of the
field's fixed generator.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .errors import ExponentOverflow, ExprSyntaxError
from .gf import FieldCtx, field_new

MAX_EXPONENT = (1 << 63) - 1


@dataclass(frozen=True, eq=False)
class PFunc:
    field: FieldCtx
    values: np.ndarray
    provenance: str = "table"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.shape != (self.field.q,):
            raise ValueError(f"value table must have length {self.field.q}")
        if vals.size and (vals.min() < 0 or vals.max() >= self.field.p):
            raise ValueError("function values must lie in [0, p)")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __eq__(self, other) -> bool:
        return isinstance(other, PFunc) and self.field == other.field and np.array_equal(
            self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.digest)

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.field.spec.encode())
        h.update(self.values.astype("<i8").tobytes())
        return h.hexdigest()

    def digit_string(self) -> str:
        if self.field.p <= 10:
            return "".join(map(str, self.values.tolist()))
        return " ".join(map(str, self.values.tolist()))


@dataclass(frozen=True)
class TraceExpr:
    """Tr(sum c_i x^{d_i}); ``terms`` holds (coefficient encoding, exponent) pairs."""

    terms: tuple[tuple[int, int], ...]
    source: str = dc_field(default="", compare=False)

    def to_text(self, field: FieldCtx) -> str:
        parts = []
        for k, (c, d) in enumerate(self.terms):
            if c < field.p:
                coef = str(c)
            else:
                coef = f"g^{field.log(c)}"
            mono = "x" if d == 1 else f"x^{d}"
            body = mono if coef == "1" else f"{coef}*{mono}"
            parts.append(body if k == 0 else f"+ {body}")
        return "Tr(" + " ".join(parts) + ")"


class _Parser:
    def __init__(self, text: str):
        self.text = text.replace("−", "-")
        self.pos = 0

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, tok: str):
        self.skip()
        if not self.text.startswith(tok, self.pos):
            self.error(f"expected {tok!r}")
        self.pos += len(tok)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        value = int(self.text[start:self.pos])
        if value > MAX_EXPONENT:
            raise ExponentOverflow(f"integer {value} at position {start} is too large")
        return value

    def term(self):
        """Returns (coef, exponent); coef is ('int', n) or ('gen', k)."""
        ch = self.peek()
        coef = ("int", 1)
        if ch.isdigit():
            coef = ("int", self.integer())
            self.expect("*")
        elif ch == "g":
            self.pos += 1
            self.expect("^")
            coef = ("gen", self.integer())
            self.expect("*")
        self.skip()
        if self.peek() != "x":
            self.error("expected 'x'")
        self.pos += 1
        exp = 1
        if self.peek() == "^":
            self.pos += 1
            at = self.pos
            exp = self.integer()
            if exp < 1:
                self.pos = at
                self.error("exponent must be >= 1")
        return coef, exp

    def parse(self):
        self.expect("Tr")
        self.expect("(")
        terms = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        if self.peek() == ")":
            self.error("empty trace body")
        while True:
            coef, exp = self.term()
            terms.append((sign, coef, exp))
            ch = self.peek()
            if ch in ("+", "-") and ch:
                sign = -1 if ch == "-" else 1
                self.pos += 1
                continue
            break
        self.expect(")")
        self.skip()
        if self.pos != len(self.text):
            self.error("trailing input")
        return terms


def parse_expr(text: str, field: FieldCtx) -> TraceExpr:
    raw = _Parser(text).parse()
    terms = []
    for sign, (kind, n), exp in raw:
        if kind == "int":
            c = (sign * n) % field.p
        else:
            c = field.exp(n)
            if sign < 0:
                c = field.neg(c)
        terms.append((c, exp))
    return TraceExpr(tuple(terms), source=text)


def evaluate(expr: TraceExpr, field: FieldCtx) -> PFunc:
    x = np.arange(field.q, dtype=np.int64)
    total = np.zeros(field.q, dtype=np.int64)
    for c, d in expr.terms:
        if c == 0:
            continue
        total += field.trace_table[field.mul_vec(c, field.pow_vec(x, d))]
    return PFunc(field, total % field.p, provenance=expr.source or expr.to_text(field))


def from_expr(text: str, field: FieldCtx) -> PFunc:
    return evaluate(parse_expr(text, field), field)


def level_set(f: PFunc, i: int) -> np.ndarray:
    if not 0 <= i < f.field.p:
        raise ValueError(f"level {i} outside F_{f.field.p}")
    return np.flatnonzero(f.values == i)


def image_star(f: PFunc) -> set[int]:
    return set(np.unique(f.values[1:]).tolist())


def is_fp_star_invariant(f: PFunc) -> bool:
    """f(a x) == f(x) for every a in F_p^*, checked over the whole table."""
    fld = f.field
    x = np.arange(fld.q, dtype=np.int64)
    for a in range(2, fld.p):
        if not np.array_equal(f.values[fld.mul_vec(a, x)], f.values):
            return False
    return True


def scaled_level_sets_invariant(f: PFunc) -> bool:
    """a * D_{f,i} == D_{f,i} for all a in F_p^*, i in F_p (set-level check)."""
    fld = f.field
    for i in range(fld.p):
        d = level_set(f, i)
        for a in range(2, fld.p):
            if not np.array_equal(np.sort(fld.mul_vec(a, d)), d):
                return False
    return True


# -- value-table files ---------------------------------------------------------

def dump_table(f: PFunc) -> str:
    fld = f.field
    header = f"{fld.p} {fld.m} {fld.q} [{','.join(map(str, fld.modulus))}]"
    body = " ".join(map(str, f.values.tolist()))
    return header + "\n" + body + "\n"


def save_table(f: PFunc, path) -> None:
    Path(path).write_text(dump_table(f))


def parse_table(text: str, field: FieldCtx | None = None) -> PFunc:
    """Read "p m q [modulus]" followed by q whitespace-separated digits.

    The bracketed modulus is optional; without it the caller's field (or the
    default modulus) decides the encoding.
    """
    lines = text.strip().splitlines()
    if not lines:
        raise ValueError("empty table file")
    head = lines[0].split()
    if len(head) < 3:
        raise ValueError("header must be 'p m q'")
    p, m, q = (int(v) for v in head[:3])
    if p**m != q:
        raise ValueError(f"header inconsistent: {p}^{m} != {q}")
    modulus = None
    if len(head) > 3:
        modulus = [int(c) for c in "".join(head[3:]).strip("[]").split(",")]
    if field is None:
        field = field_new(p, m, modulus)
    elif (field.p, field.m) != (p, m) or (modulus is not None and list(field.modulus) != modulus):
        raise ValueError(f"table is for {p}^{m} {modulus or ''}, not {field.spec}")
    digits = " ".join(lines[1:]).split()
    if len(digits) != q:
        raise ValueError(f"expected {q} values, found {len(digits)}")
    return PFunc(field, np.array([int(d) for d in digits], dtype=np.int64), provenance="table")


def load_table(path, field: FieldCtx | None = None) -> PFunc:
    return parse_table(Path(path).read_text(), field)
