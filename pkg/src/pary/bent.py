"""Bentness, the decomposition W_f(beta) = mu(beta) (p*)^{m/2} zeta^{g(beta)}, and weak regularity.

For odd m the half-integer power is written (p*)^{(m-1)/2} * G with G the
quadratic Gauss sum, so every candidate value is an exact element of Z[zeta_p].
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cyclo import Cyc, gauss_sum, p_star
from .errors import EvenCharacteristic, NoCandidateMatch, NonzeroAtOrigin, NotBent
from .func import PFunc, level_set
from .numth import legendre
from .scheme import criterion_check
from .walsh import WalshSpectrum, walsh_fast


def norm_sq_rows(spec: WalshSpectrum) -> np.ndarray:
    """Canonical coefficients of |W_f(beta)|^2 for every beta, shape (q, p-1)."""
    p = spec.field.p
    a = spec.group_ring()
    out = np.zeros_like(a)
    for s in range(p):
        # coefficient of zeta^s in a * conj(a) is sum_i a_i a_{i-s}
        out[:, s] = (a * np.roll(a, s, axis=1)).sum(axis=1)
    return out[:, 1:] - out[:, :1]


def is_bent(spec: WalshSpectrum) -> bool:
    q = spec.field.q
    return bool(np.all(norm_sq_rows(spec) == -q))


def half_power(p: int, m: int) -> Cyc:
    """(p*)^{m/2} as an element of Z[zeta_p]."""
    base = Cyc.from_int(p, p_star(p) ** (m // 2))
    return base * gauss_sum(p) if m % 2 else base


@dataclass(frozen=True, eq=False)
class BentProfile:
    f: PFunc
    is_bent: bool
    mu: np.ndarray
    g: PFunc
    weakly_regular: bool | None = None
    epsilon: int | None = None
    u: str | None = None
    dual: PFunc | None = None
    regular: bool | None = None

    def to_json(self) -> dict:
        return {
            "field": self.f.field.spec,
            "is_bent": self.is_bent,
            "weakly_regular": self.weakly_regular,
            "regular": self.regular,
            "epsilon": self.epsilon,
            "u": self.u,
            "mu": self.mu.tolist(),
            "g": self.g.digit_string(),
            "dual": self.dual.digit_string() if self.dual is not None else None,
        }


def _require_bent_input(f: PFunc, spec: WalshSpectrum):
    if f.field.p == 2:
        raise EvenCharacteristic("bent analysis is for odd characteristic")
    if f(0) != 0:
        raise NonzeroAtOrigin(f"f(0) = {f(0)}")
    if not is_bent(spec):
        raise NotBent("some |W_f(beta)|^2 differs from q")


def decompose(spec: WalshSpectrum, f: PFunc) -> BentProfile:
    """Match every W_f(beta) against the 2p values +-(p*)^{m/2} zeta^j."""
    _require_bent_input(f, spec)
    fld = spec.field
    p, m = fld.p, fld.m
    base = half_power(p, m)
    lookup = {}
    for sign in (1, -1):
        for j in range(p):
            lookup[base.times_root(j).scale(sign).coeffs] = (sign, j)
    mu = np.empty(fld.q, dtype=np.int64)
    g = np.empty(fld.q, dtype=np.int64)
    for beta, row in enumerate(map(tuple, spec.coeffs.tolist())):
        hit = lookup.get(row)
        if hit is None:
            raise NoCandidateMatch(f"W_f({beta}) matches no +-(p*)^(m/2) zeta^j")
        mu[beta], g[beta] = hit
    mu.flags.writeable = False
    return BentProfile(f=f, is_bent=True, mu=mu, g=PFunc(fld, g, provenance="associated"))


def reconstruct(profile: BentProfile) -> list[Cyc]:
    fld = profile.f.field
    base = half_power(fld.p, fld.m)
    return [base.times_root(int(j)).scale(int(s)) for s, j in zip(profile.mu, profile.g.values)]


def _unit_label(p: int, m: int, mu0: int) -> str:
    """u in W = u p^{m/2} zeta^{dual}, from mu and (p*)^{m/2} = eta(-1)^{m/2} p^{m/2}."""
    eta_m1 = 1 if p % 4 == 1 else -1
    if m % 2 == 0:
        return "1" if mu0 * eta_m1 ** (m // 2) == 1 else "-1"
    s = mu0 * eta_m1 ** ((m - 1) // 2)
    if eta_m1 == 1:
        return "1" if s == 1 else "-1"
    return "i" if s == 1 else "-i"


def classify_regularity(profile: BentProfile) -> BentProfile:
    if not profile.is_bent:
        raise NotBent("regularity is only defined for bent functions")
    fld = profile.f.field
    mu0 = int(profile.mu[0])
    if not np.all(profile.mu == mu0):
        return replace(profile, weakly_regular=False, epsilon=None, u=None, dual=None, regular=False)
    u = _unit_label(fld.p, fld.m, mu0)
    dual = PFunc(fld, profile.g.values, provenance="dual")
    return replace(profile, weakly_regular=True, epsilon=mu0, u=u, dual=dual, regular=(u == "1"))


def analyze_bent(f: PFunc, spec: WalshSpectrum | None = None) -> BentProfile:
    spec = spec if spec is not None else walsh_fast(f)
    return classify_regularity(decompose(spec, f))


def dual_is_bent(profile: BentProfile) -> bool:
    if profile.dual is None:
        raise ValueError("dual exists only for weakly regular functions")
    return is_bent(walsh_fast(profile.dual))


def is_surjective(f: PFunc) -> bool:
    return all(len(level_set(f, i)) for i in range(f.field.p))


def dual_level_sums(profile: BentProfile) -> list[dict]:
    """sum_{D_{g,i}} mu - sum_{D_{g,0}} mu for each i != 0.

    ``expected`` is the exact value forced by q = sum_beta W_f(beta):
    -eta(-1)^{m/2} p^{m/2} for even m and eta(-1)^{(m+1)/2} eta(i) p^{(m-1)/2}
    for odd m.  ``stated`` drops the eta(-1) factor; the two agree when
    p = 1 mod 4 (or for the right parity of m).
    """
    if not profile.is_bent:
        raise NotBent("identity holds for bent functions only")
    fld = profile.f.field
    p, m = fld.p, fld.m
    if profile.f(0) != 0:
        raise NonzeroAtOrigin("identity derived with f(0) = 0")
    eta_m1 = 1 if p % 4 == 1 else -1
    mu, g = profile.mu, profile.g.values
    m0 = int(mu[g == 0].sum())
    rows = []
    for i in range(1, p):
        lhs = int(mu[g == i].sum()) - m0
        if m % 2 == 0:
            stated = -p ** (m // 2)
            expected = -eta_m1 ** (m // 2) * p ** (m // 2)
        else:
            stated = legendre(i, p) * p ** ((m - 1) // 2)
            expected = eta_m1 ** ((m + 1) // 2) * stated
        rows.append({"i": i, "lhs": lhs, "expected": expected, "stated": stated,
                     "holds": lhs == expected, "stated_holds": lhs == stated})
    return rows


def regularity_scheme_crosscheck(f: PFunc, spec: WalshSpectrum | None = None) -> bool:
    """True when the scheme verdict of the level partition equals the weak-regularity flag."""
    spec = spec if spec is not None else walsh_fast(f)
    profile = classify_regularity(decompose(spec, f))
    return criterion_check(f, spec).is_scheme == bool(profile.weakly_regular)


def scaling_exponent(f: PFunc) -> int | None:
    """Least l in [0, p-2] with f(ax) = a^l f(x) for all a in F_p^*, x in F_q; None if no such l."""
    fld = f.field
    xs = np.arange(fld.q, dtype=np.int64)
    for l in range(max(1, fld.p - 1)):
        if all(np.array_equal(f.values[fld.mul_vec(a, xs)], pow(a, l, fld.p) * f.values % fld.p)
               for a in range(2, fld.p)):
            return l
    return None
