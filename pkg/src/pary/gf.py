"""Finite fields F_{p^m} in a polynomial basis.

Elements are plain ints: the coefficient vector (c_0, ..., c_{m-1}) of
c_0 + c_1 x + ... + c_{m-1} x^{m-1} is packed as sum(c_i * p**i).  The prime
subfield is therefore {0, 1, ..., p-1} with its usual integer labels.

Scalar operations work on ints; the ``*_vec`` variants take numpy arrays and
are what the spectrum and scheme code uses to sweep the whole field.
"""

from __future__ import annotations

import re
from functools import cached_property

import numpy as np

from .errors import DivisionByZero, FieldTooLarge, NonPrime, ReducibleModulus
from .numth import factorize, is_prime

MAX_Q = 1 << 26

Poly = list  # ascending coefficients over F_p, trimmed


# -- polynomials over F_p ---------------------------------------------------

def _trim(a: Poly) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_divmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    quot = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            quot[k - db] = c
            for j, bj in enumerate(b):
                a[k - db + j] = (a[k - db + j] - c * bj) % p
    return _trim(quot), _trim(a[:db])


def _poly_mod(a: Poly, b: Poly, p: int) -> Poly:
    return _poly_divmod(a, b, p)[1]


def _poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: Poly, b: Poly, p: int) -> Poly:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _poly_powmod(base: Poly, e: int, mod: Poly, p: int) -> Poly:
    result: Poly = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(poly: Poly, p: int) -> bool:
    """Ben-Or test: gcd(f, x^(p^i) - x) = 1 for i <= deg/2."""
    f = _trim(list(poly))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = _poly_powmod(h, p, f, p)
        if len(_poly_gcd(f, _poly_sub(h, x, p), p)) > 1:
            return False
    return True


def least_irreducible(p: int, m: int) -> list[int]:
    """Monic irreducible of degree m with the smallest sum(c_i p^i), i < m."""
    for low in range(p**m):
        coeffs = [(low // p**i) % p for i in range(m)] + [1]
        if is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- matrices over F_p ------------------------------------------------------

def rank_mod_p(rows, p: int) -> int:
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] % p), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] % p:
                c = mat[r][col]
                mat[r] = [(v - c * w) % p for v, w in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def inverse_mod_p(matrix, p: int) -> list[list[int]]:
    n = len(matrix)
    aug = [[int(v) % p for v in row] + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular mod p")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = pow(aug[col][col], p - 2, p)
        aug[col] = [v * inv % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(v - c * w) % p for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# -- the field ---------------------------------------------------------------

class FieldCtx:
    """F_q with q = p^m, immutable after construction.

    Lookup tables (exp/log, trace) are built lazily on first use.
    """

    def __init__(self, p: int, m: int, modulus: list[int], generator: int):
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.q = p**m
        self.generator = generator

    # identity
    @property
    def spec(self) -> str:
        return f"{self.p}^{self.m}/[{','.join(map(str, self.modulus))}]"

    def __repr__(self) -> str:
        return f"FieldCtx({self.spec})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    # element <-> coefficients
    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.m)]

    def from_digits(self, ds) -> int:
        return sum((int(d) % self.p) * self.p**i for i, d in enumerate(ds))

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of F_{self.q}")
        return a

    def elements(self):
        return range(self.q)

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, pw = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * pw
            a //= p
            b //= p
            pw *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out, pw = 0, 1
        while a:
            out += (-(a % p) % p) * pw
            a //= p
            pw *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(self.digits(a)), _trim(self.digits(b)), self.p)
        return self.from_digits(_poly_mod(prod, list(self.modulus), self.p))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b])) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.exp_table[(-int(self.log_table[a])) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, d: int) -> int:
        """Square-and-multiply power; negative d needs a != 0."""
        if d < 0:
            a = self.inv(a)
            d = -d
        result, base = 1, a
        while d:
            if d & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            d >>= 1
        return result

    def exp(self, k: int) -> int:
        return int(self.exp_table[k % (self.q - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("log of zero")
        return int(self.log_table[a])

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        return int(self.trace_table[a])

    # tables
    @cached_property
    def exp_table(self) -> np.ndarray:
        """exp_table[k] = g^k for 0 <= k < q-1."""
        q, m, p = self.q, self.m, self.p
        n = q - 1
        block = max(1, int(np.ceil(np.sqrt(n))))
        small = [1]
        for _ in range(min(block, n) - 1):
            small.append(self._mul_poly(small[-1], self.generator))
        small_digits = np.array([self.digits(v) for v in small], dtype=np.int64)
        weights = self.p ** np.arange(m, dtype=np.int64)
        out = np.empty(n, dtype=np.int64)
        step = self._mul_poly(small[-1], self.generator) if len(small) < n else 1
        c = 1
        for start in range(0, n, len(small)):
            # multiplication by the constant c as an m x m matrix over F_p
            mat = np.array([self.digits(self._mul_poly(c, p**k)) for k in range(m)], dtype=np.int64)
            chunk = (small_digits @ mat) % p @ weights
            stop = min(start + len(small), n)
            out[start:stop] = chunk[: stop - start]
            c = self._mul_poly(c, step)
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.q - 1, dtype=np.int64)
        return log

    def _basis_trace(self, a: int) -> int:
        # a + a^p + ... + a^(p^(m-1)) by polynomial powering
        total, cur = 0, a
        for _ in range(self.m):
            total = self.add(total, cur)
            cur = self._pow_poly(cur, self.p)
        if total >= self.p:
            raise AssertionError("trace left the prime subfield")
        return total

    def _pow_poly(self, a: int, d: int) -> int:
        return self.from_digits(_poly_powmod(_trim(self.digits(a)), d, list(self.modulus), self.p))

    @cached_property
    def basis_traces(self) -> tuple[int, ...]:
        return tuple(self._basis_trace(self.p**i) for i in range(self.m))

    @cached_property
    def trace_table(self) -> np.ndarray:
        p = self.p
        tr = np.zeros(self.q, dtype=np.int64)
        for j, t in enumerate(self.basis_traces):
            size = p**j
            for s in range(1, p):
                tr[s * size:(s + 1) * size] = (tr[:size] + s * t) % p
        return tr

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        """Gram[i][j] = Tr(x^i x^j)."""
        xs = [self.p**i for i in range(self.m)]
        return tuple(tuple(self._basis_trace(self._mul_poly(a, b)) for b in xs) for a in xs)

    @cached_property
    def dual_basis(self) -> tuple[int, ...]:
        """Elements d_j with Tr(x^i d_j) = [i == j]."""
        inv = inverse_mod_p(self.gram, self.p)
        return tuple(self.from_digits(row) for row in inv)

    @cached_property
    def trace_coordinates(self) -> np.ndarray:
        """Encoding of (Tr(beta), Tr(beta x), ..., Tr(beta x^{m-1})) for every beta.

        Since beta = sum_i Tr(beta x^i) d_i, this is beta written in the dual basis.
        """
        images = [self.from_digits(row) for row in self.gram]
        return self.linear_table(images)

    def linear_table(self, images) -> np.ndarray:
        """Table of the F_p-linear map F_q -> F_q sending x^j to images[j]."""
        p = self.p
        out = np.zeros(self.q, dtype=np.int64)
        for j, img in enumerate(images):
            size = p**j
            for s in range(1, p):
                scaled = np.full(size, self.scalar_mul(s, img), dtype=np.int64)
                out[s * size:(s + 1) * size] = self.add_vec(out[:size], scaled)
        return out

    def scalar_mul(self, s: int, a: int) -> int:
        """Multiply by a prime-field scalar (no tables needed)."""
        return self.from_digits([s * d for d in self.digits(a)])

    # vectorised arithmetic
    def add_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.m):
            out += ((a // pw % p + b // pw % p) % p) * pw
            pw *= p
        return out

    def neg_vec(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        p = self.p
        out = np.zeros_like(a)
        pw = 1
        for _ in range(self.m):
            out += (-(a // pw % p) % p) * pw
            pw *= p
        return out

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        zero = (a == 0) | (b == 0)
        la = self.log_table[np.where(zero, 1, a)]
        lb = self.log_table[np.where(zero, 1, b)]
        out = self.exp_table[(la + lb) % (self.q - 1)]
        return np.where(zero, 0, out)

    def pow_vec(self, a, d: int) -> np.ndarray:
        """a^d elementwise for d >= 1 (0^d = 0)."""
        if d < 1:
            raise ValueError("exponent must be positive")
        a = np.asarray(a, dtype=np.int64)
        zero = a == 0
        la = self.log_table[np.where(zero, 1, a)]
        out = self.exp_table[(la * (d % (self.q - 1))) % (self.q - 1)]
        return np.where(zero, 0, out)

    def digits_matrix(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        pw = self.p ** np.arange(self.m, dtype=np.int64)
        return (a[..., None] // pw) % self.p


def _least_generator(ctx: FieldCtx) -> int:
    q = ctx.q
    if q == 2:
        return 1
    primes = list(factorize(q - 1))
    for a in range(2, q):
        if all(ctx._pow_poly(a, (q - 1) // ell) != 1 for ell in primes):
            return a
    raise AssertionError("no primitive element")  # pragma: no cover


def field_new(p: int, m: int, modulus: list[int] | None = None, max_q: int = MAX_Q) -> FieldCtx:
    """Build F_{p^m}; the modulus defaults to the least monic irreducible."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if p**m > max_q:
        raise FieldTooLarge(f"q = {p}^{m} exceeds the cap {max_q}")
    if modulus is None:
        modulus = least_irreducible(p, m)
    else:
        modulus = [int(c) for c in modulus]
        if len(modulus) != m + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
            raise ValueError(f"modulus must be monic of degree {m} with coefficients in [0, {p})")
        if not is_irreducible(modulus, p):
            raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
    ctx = FieldCtx(p, m, modulus, generator=0)
    ctx.generator = _least_generator(ctx)
    return ctx


_SPEC_RE = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*(?:/\s*\[([\d,\s]*)\])?\s*$")


def parse_field_spec(text: str, max_q: int = MAX_Q) -> FieldCtx:
    """Parse "p^m" or "p^m/[c0,c1,...,cm]"."""
    mt = _SPEC_RE.match(text)
    if not mt:
        raise ValueError(f"bad field spec {text!r}; expected p^m or p^m/[c0,...,cm]")
    p, m = int(mt.group(1)), int(mt.group(2))
    modulus = None
    if mt.group(3) is not None:
        modulus = [int(c) for c in mt.group(3).split(",") if c.strip()]
    return field_new(p, m, modulus, max_q=max_q)
