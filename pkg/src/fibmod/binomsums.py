"""Finite sums of central binomial and Catalan terms modulo prime powers.

The workhorse is a factored stream of C(2k,k): the ratio
C(2k,k) / C(2k-2,k-1) = 2(2k-1)/k has its p-parts stripped before the
unit division, so every term is exact even past k = p/2 where the
binomials pick up positive p-valuation.  Sums accumulate plain residues
(one ``to_residue`` per term); the running power of the base costs one
inversion total.

Two identities are also provided in exact arbitrary-precision form, as
independent oracles for the modular machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Iterator

from .modarith import (
    LucasParams,
    Modulus,
    NegativeValuation,
    NotInvertible,
    PadicFactored,
    ResidueClass,
    ZeroInput,
)


class WeightDomain(Exception):
    """The requested weight is undefined on the requested summation range."""


class WeightKind(Enum):
    """Per-term weights appearing in the checked congruences.

    NONE -> 1; CATALAN -> 1/(k+1); LINEAR_K -> k; INV_2KM1 -> 1/(2k-1);
    INV_2KM1_SQ -> 1/(2k-1)^2; H2 -> H_k^(2) = sum_{0<j<=k} 1/j^2.
    H2_SIGNED_BASE carries the same weight as H2; the tag marks sums
    written over a signed integer base instead of an inverse power base.
    """

    NONE = "none"
    CATALAN = "catalan"
    LINEAR_K = "linear_k"
    INV_2KM1 = "inv_2km1"
    INV_2KM1_SQ = "inv_2km1_sq"
    H2 = "h2"
    H2_SIGNED_BASE = "h2_signed_base"


@dataclass(frozen=True)
class SumSpec:
    """A weighted sum  sum_{k=0}^{upper} weight(k) C(2k,k) / base^k  mod p^e."""

    base: int
    upper: int
    weight: WeightKind
    modulus: Modulus

    def __post_init__(self) -> None:
        if self.upper < 0:
            raise ValueError("upper bound must be nonnegative")


# ---------------------------------------------------------------------------
# Internal tables.  A cache dict may be threaded through by callers that
# evaluate many sums at one prime (the scanner does); keys are private.
# ---------------------------------------------------------------------------


def _inv_table(p: int, pe: int, n: int, cache: dict | None) -> list[int]:
    """Inverses of 1..n mod pe, n < p.

    Uses inv[i] = -(pe // i) * inv[pe mod i]: for 1 < i < p the remainder
    pe mod i is nonzero and smaller than i, so the recurrence is well
    founded and every entry is a unit.
    """
    if n >= p:
        raise ValueError("inverse table only covers arguments below p")
    key = ("inv", p, pe)
    tab = cache.get(key) if cache is not None else None
    if tab is None:
        tab = [0, 1 % pe]
        if cache is not None:
            cache[key] = tab
    for i in range(len(tab), n + 1):
        tab.append(-(pe // i) * tab[pe % i] % pe)
    return tab


def _unit_inverter(p: int, pe: int, limit: int, cache: dict | None):
    """Inverter for units up to ``limit``: table below p, pow above."""
    tab = _inv_table(p, pe, min(limit, p - 1), cache)

    if limit < p:
        return tab.__getitem__

    def invf(x: int) -> int:
        return tab[x] if x < p else pow(x, -1, pe)

    return invf


def _cb_vu(modulus: Modulus, upto: int, cache: dict | None) -> list[tuple[int, int]]:
    """Factored central binomials: (v_p, unit) of C(2k,k) for k = 0..upto."""
    p, pe = modulus.p, modulus.m
    key = ("cbvu", p, pe)
    vu = cache.get(key) if cache is not None else None
    if vu is None:
        vu = [(0, 1)]
        if cache is not None:
            cache[key] = vu
    if len(vu) <= upto:
        invf = _unit_inverter(p, pe, upto, cache)
        v, u = vu[-1]
        for k in range(len(vu), upto + 1):
            num = 4 * k - 2
            den = k
            if num % p == 0:
                while num % p == 0:
                    num //= p
                    v += 1
            if den % p == 0:
                while den % p == 0:
                    den //= p
                    v -= 1
            if v < 0:
                raise NegativeValuation(f"C({2 * k},{k}) went p-adically negative")
            u = u * num % pe
            if den > 1:
                u = u * invf(den) % pe
            vu.append((v, u))
    return vu


def _residues_from_vu(
    modulus: Modulus, upto: int, cache: dict | None, key_tag: str, shift: int
) -> list[int]:
    """Residues of C(2k,k) (shift=0) or C(2k,k)/(k+1) (shift=1)."""
    p, e, pe = modulus.p, modulus.e, modulus.m
    key = (key_tag, p, pe)
    res = cache.get(key) if cache is not None else None
    if res is None:
        res = []
        if cache is not None:
            cache[key] = res
    if len(res) <= upto:
        vu = _cb_vu(modulus, upto, cache)
        invf = _unit_inverter(p, pe, upto + shift, cache)
        ppow = [p**j for j in range(e)]
        for k in range(len(res), upto + 1):
            v, u = vu[k]
            if shift:
                den = k + 1
                while den % p == 0:
                    den //= p
                    v -= 1
                if v < 0:
                    raise NegativeValuation(f"Catalan number {k} went p-adically negative")
                if den > 1:
                    u = u * invf(den) % pe
            res.append(u * ppow[v] % pe if v < e else 0)
    return res


def _cb_residues(modulus: Modulus, upto: int, cache: dict | None) -> list[int]:
    return _residues_from_vu(modulus, upto, cache, "cbres", 0)


def _catalan_residues(modulus: Modulus, upto: int, cache: dict | None) -> list[int]:
    return _residues_from_vu(modulus, upto, cache, "catres", 1)


def _h2_prefix(modulus: Modulus, upto: int, cache: dict | None) -> list[int]:
    """H_k^(2) mod p^e for k = 0..upto (upto <= p-1, so no 1/p^2 term)."""
    p, pe = modulus.p, modulus.m
    key = ("h2", p, pe)
    h2 = cache.get(key) if cache is not None else None
    if h2 is None:
        h2 = [0]
        if cache is not None:
            cache[key] = h2
    if len(h2) <= upto:
        tab = _inv_table(p, pe, upto, cache)
        h = h2[-1]
        for k in range(len(h2), upto + 1):
            h = (h + tab[k] * tab[k]) % pe
            h2.append(h)
    return h2


def _check_weight_domain(weight: WeightKind, upper: int, p: int) -> None:
    if weight in (WeightKind.INV_2KM1, WeightKind.INV_2KM1_SQ):
        if upper > (p - 1) // 2:
            raise WeightDomain(
                f"1/(2k-1) weights need upper <= (p-1)/2, got {upper} at p = {p}"
            )
    elif weight in (WeightKind.H2, WeightKind.H2_SIGNED_BASE):
        if upper > p - 1:
            raise WeightDomain(f"H2 weight needs upper <= p-1, got {upper} at p = {p}")


def _sum_with_power(
    x: int, upper: int, modulus: Modulus, weight: WeightKind, cache: dict | None
) -> int:
    """sum_{k=0}^{upper} weight(k) C(2k,k) x^k mod p^e, x already reduced."""
    p, pe = modulus.p, modulus.m
    _check_weight_domain(weight, upper, p)
    acc = 0
    xk = 1
    # Cached tables may extend past ``upper``; always slice to the range.
    if weight is WeightKind.NONE:
        for r in _cb_residues(modulus, upper, cache)[: upper + 1]:
            acc = (acc + r * xk) % pe
            xk = xk * x % pe
    elif weight is WeightKind.CATALAN:
        for r in _catalan_residues(modulus, upper, cache)[: upper + 1]:
            acc = (acc + r * xk) % pe
            xk = xk * x % pe
    elif weight is WeightKind.LINEAR_K:
        for k, r in enumerate(_cb_residues(modulus, upper, cache)[: upper + 1]):
            acc = (acc + k * r * xk) % pe
            xk = xk * x % pe
    elif weight in (WeightKind.INV_2KM1, WeightKind.INV_2KM1_SQ):
        res = _cb_residues(modulus, upper, cache)
        tab = _inv_table(p, pe, max(2 * upper - 1, 1), cache)
        square = weight is WeightKind.INV_2KM1_SQ
        for k in range(upper + 1):
            if k == 0:
                w = 1 if square else pe - 1  # 1/(2*0 - 1) = -1
            else:
                w = tab[2 * k - 1]
                if square:
                    w = w * w % pe
            acc = (acc + res[k] * w % pe * xk) % pe
            xk = xk * x % pe
    else:  # H2 and its signed-base twin
        res = _cb_residues(modulus, upper, cache)
        h2 = _h2_prefix(modulus, upper, cache)
        for k in range(upper + 1):
            acc = (acc + res[k] * h2[k] % pe * xk) % pe
            xk = xk * x % pe
    return acc


# ---------------------------------------------------------------------------
# Public operations.
# ---------------------------------------------------------------------------


def central_binomial_stream(modulus: Modulus, max_k: int) -> Iterator[PadicFactored]:
    """Yield C(2k,k) in factored form for k = 0..max_k."""
    cache: dict = {}
    for v, u in _cb_vu(modulus, max_k, cache):
        yield PadicFactored(modulus, v, u)


def evaluate_sum(spec: SumSpec, cache: dict | None = None) -> ResidueClass:
    """Evaluate  sum_{k=0}^{upper} weight(k) C(2k,k) inv(base)^k  mod p^e.

    The base is inverted once and maintained as a running power.  A sum
    of length zero never inverts, so the base may then be anything.
    """
    md = spec.modulus
    if spec.upper == 0:
        # Single term: weight(0) * C(0,0); the base is never inverted.
        return ResidueClass(md, _sum_with_power(1, 0, md, spec.weight, cache))
    if spec.base % md.p == 0:
        raise NotInvertible(f"base {spec.base} is divisible by p = {md.p}")
    x = pow(spec.base % md.m, -1, md.m)
    return ResidueClass(md, _sum_with_power(x, spec.upper, md, spec.weight, cache))


def signed_central_sum(
    s: int,
    upper: int,
    modulus: Modulus,
    weight: WeightKind = WeightKind.NONE,
    cache: dict | None = None,
) -> ResidueClass:
    """sum_{k=0}^{upper} s^k weight(k) C(2k,k) mod p^e.

    The positive-power twin of ``evaluate_sum``: s^k needs no inversion,
    so s may be divisible by p.
    """
    return ResidueClass(
        modulus, _sum_with_power(s % modulus.m, upper, modulus, weight, cache)
    )


def alternating_harmonic(bound: int, modulus: Modulus) -> ResidueClass:
    """sum_{k=1}^{bound} (-1)^k / k mod p^e, for bound < p."""
    p, pe = modulus.p, modulus.m
    if bound >= p:
        raise NotInvertible(f"bound {bound} reaches a multiple of p = {p}")
    tab = _inv_table(p, pe, bound, None)
    acc = 0
    for k in range(1, bound + 1):
        acc = (acc - tab[k]) % pe if k % 2 else (acc + tab[k]) % pe
    return ResidueClass(modulus, acc)


def power_over_square_sum(
    base_num: int, base_den: int, modulus: Modulus
) -> ResidueClass:
    """sum_{k=1}^{p-1} (base_num/base_den)^k / k^2 mod p^e."""
    p, pe = modulus.p, modulus.m
    if base_den % p == 0:
        raise NotInvertible(f"denominator {base_den} is divisible by p = {p}")
    x = base_num * pow(base_den % pe, -1, pe) % pe
    tab = _inv_table(p, pe, p - 1, None)
    acc = 0
    xk = 1
    for k in range(1, p):
        xk = xk * x % pe
        acc = (acc + xk * tab[k] % pe * tab[k]) % pe
    return ResidueClass(modulus, acc)


def exact_lagrange(params: LucasParams, n: int) -> int:
    """sum_{k=0}^{floor(n/2)} C(n-k,k) A^(n-2k) (-B)^k, exactly.

    Equals u_{n+1}(A, B); evaluated in arbitrary precision so it can
    serve as an oracle for the modular Lucas machinery.
    """
    A, B = params.A, params.B
    return sum(
        comb(n - k, k) * A ** (n - 2 * k) * (-B) ** k for k in range(n // 2 + 1)
    )


def exact_identity_41(m: int, n: int) -> tuple[int, int]:
    """Both sides of the telescoping central-binomial identity, cleared
    of denominators by 2 * m^n:

        lhs = sum_{k=0}^{n} (2 - (m-4) k) C(2k,k) m^(n-k)
        rhs = 2 (2n+1) C(2n,n)

    The contract is lhs == rhs for every nonzero m and every n >= 0.
    """
    if m == 0:
        raise ZeroInput("base must be nonzero")
    lhs = sum((2 - (m - 4) * k) * comb(2 * k, k) * m ** (n - k) for k in range(n + 1))
    rhs = 2 * (2 * n + 1) * comb(2 * n, n)
    return lhs, rhs


def floor_multiple(num: int, den: int, value: int) -> int:
    """floor(num/den * value) by integer division, never via floats."""
    return num * value // den
