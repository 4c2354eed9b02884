"""Elementary number theory for the monomial family constructions.

Everything here works on small moduli, so trial division and exhaustive
residue scans are used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotCoprime


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (fine for n <= 1e12)."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def euler_phi(n: int) -> int:
    result = n
    for prime in factorize(n):
        result -= result // prime
    return result


def mult_order(a: int, n: int) -> int:
    """Least t > 0 with a^t = 1 (mod n)."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if gcd(a, n) != 1:
        raise NotCoprime(f"gcd({a}, {n}) != 1")
    if n == 1:
        return 1
    t = euler_phi(n)
    # shrink t by each prime factor while a^(t/ell) is still 1
    for ell, e in factorize(t).items():
        for _ in range(e):
            if pow(a, t // ell, n) == 1:
                t //= ell
            else:
                break
    return t


def is_primitive_root(a: int, n: int) -> bool:
    return mult_order(a, n) == euler_phi(n)


def is_common_primitive_root(a: int, n1: int, n2: int) -> bool:
    return is_primitive_root(a, n1) and is_primitive_root(a, n2)


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of ``a`` modulo odd prime ``p``, representative in [0, (p-1)/2].

    Returns None when ``a`` is a non-residue.
    """
    a %= p
    if a == 0:
        return 0
    for s in range(1, (p - 1) // 2 + 1):
        if s * s % p == a:
            return s
    return None


def legendre(a: int, p: int) -> int:
    """eta(a) = a^((p-1)/2) as -1, 0 or 1."""
    v = pow(a % p, (p - 1) // 2, p)
    return -1 if v == p - 1 else v


@dataclass(frozen=True)
class ResidueTags:
    """Nonzero squares and non-squares of F_p."""

    p: int
    squares: frozenset[int]
    nonsquares: frozenset[int]

    def eta(self, a: int) -> int:
        a %= self.p
        if a == 0:
            return 0
        return 1 if a in self.squares else -1


def residue_tags(p: int) -> ResidueTags:
    if p == 2 or not is_prime(p):
        raise ValueError("residue tags need an odd prime")
    sq = frozenset(x * x % p for x in range(1, p))
    ns = frozenset(range(1, p)) - sq
    return ResidueTags(p, sq, ns)
