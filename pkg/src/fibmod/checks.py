"""The check registry: every verified congruence as a named verdict-producer.

Each check evaluates its two sides independently (the sum side through
``binomsums``/``sequences``, the closed-form side from its own formula) at
a declared modulus exponent, and reports a ``Verdict`` with an exact
defect valuation.  Check ids are a stable public contract; renaming one
is a breaking change.

A ``cache`` dict may be threaded through ``run_check`` when many checks
run at one prime; it shares the factored central-binomial stream and the
inverse tables between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Callable

from .binomsums import (
    SumSpec,
    WeightDomain,
    WeightKind,
    _cb_residues,
    _cb_vu,
    _unit_inverter,
    alternating_harmonic,
    evaluate_sum,
    floor_multiple,
    power_over_square_sum,
    signed_central_sum,
)
from .modarith import (
    LucasParams,
    Modulus,
    NegativeValuation,
    NotInvertible,
    ResidueClass,
    ZeroInput,
    is_prime,
    jacobi,
)
from .sequences import (
    DomainError,
    NotDivisible,
    entry_index,
    fermat_quotient,
    fibonacci_mod,
    fibonacci_quotient,
    lucas_uv_mod,
)

DEFAULT_TERM_BUDGET = 1 << 22

FIB = LucasParams(1, -1)


class BudgetExceeded(Exception):
    """The check's main sum is longer than the allowed term budget."""


class CheckError(Exception):
    """An arithmetic error surfaced while evaluating a check."""


class UnknownCheckId(Exception):
    """The requested check id is not in the registry."""


class CheckKind(Enum):
    THEOREM = "THEOREM"
    LEMMA = "LEMMA"
    AUXILIARY = "AUXILIARY"
    CONJECTURE = "CONJECTURE"


@dataclass(frozen=True)
class CheckParams:
    """Parameters of one check evaluation.

    ``m`` parameterizes the base-m sum family, ``n`` the index of the
    3-adic Catalan-ratio conjecture, and (A, B) the Lucas-sequence
    checks (defaulting to the Fibonacci instance).  ``force`` evaluates
    outside the declared domain; ``budget`` caps the sum length.
    """

    p: int
    a: int = 1
    m: int | None = None
    n: int | None = None
    A: int | None = None
    B: int | None = None
    force: bool = False
    budget: int = DEFAULT_TERM_BUDGET


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check: both sides, and how badly they disagree.

    ``defect_valuation`` is min(v_p(lhs - rhs), e); the check passes
    exactly when it equals the modulus exponent e.
    """

    check_id: str
    params: CheckParams
    modulus: Modulus
    lhs: ResidueClass
    rhs: ResidueClass
    defect_valuation: int
    passed: bool


Side = Callable[[CheckParams, Modulus, dict], "int | list[int]"]


@dataclass(frozen=True)
class CheckSpec:
    """Registry entry binding a check id to its statement and domain."""

    id: str
    kind: CheckKind
    description: str
    exponent: Callable[[CheckParams], int]
    exponent_label: str
    domain: Callable[[CheckParams], bool]
    domain_label: str
    lhs: Side
    rhs: Side
    length: Callable[[CheckParams], int]
    uses_m: bool = False
    uses_n: bool = False
    uses_ab: bool = False


# ---------------------------------------------------------------------------
# Shared helpers.
# ---------------------------------------------------------------------------


def _half(pr: CheckParams) -> int:
    return (pr.p**pr.a - 1) // 2


def _full(pr: CheckParams) -> int:
    return pr.p**pr.a - 1


def _ab(pr: CheckParams) -> LucasParams:
    return LucasParams(pr.A if pr.A is not None else 1, pr.B if pr.B is not None else -1)


def _fib_sign(pr: CheckParams) -> int:
    # (p^a / 5) as a Jacobi symbol; 0 only at p = 5, which every user of
    # this helper excludes from its domain.
    return jacobi(pr.p, 5) ** pr.a


def mbar(m: int, p: int, e: int) -> ResidueClass:
    """The unit attached to the Lucas term of the base-m sum family:
    1 when m = 4 (mod p), 2 when (4-m/p) = 1, and 2/m when (4-m/p) = -1.
    """
    if m % p == 0:
        raise NotInvertible(f"p = {p} divides m = {m}")
    md = Modulus(p, e)
    if (m - 4) % p == 0:
        return ResidueClass(md, 1)
    if jacobi(4 - m, p) == 1:
        return ResidueClass(md, 2)
    return ResidueClass(md, 2 * pow(m % md.m, -1, md.m))


def _s3(x: int) -> int:
    s = 0
    while x:
        s += x % 3
        x //= 3
    return s


def _v3(x: int) -> int:
    v = 0
    while x % 3 == 0:
        x //= 3
        v += 1
    return v


def _conj11n_valuation(n: int) -> int:
    """v_3 of (2n+1)^2 C(2n,n), via digit sums (no big integers)."""
    carries = (2 * _s3(n) - _s3(2 * n)) // 2
    return 2 * _v3(2 * n + 1) + carries


# ---------------------------------------------------------------------------
# Side evaluators.  Each lhs is a sum computed by the stream machinery;
# each rhs is its closed form.  Neither side is derived from the other.
# ---------------------------------------------------------------------------


def _plain_sum(base: int, upper: int, md: Modulus, cache: dict) -> int:
    return evaluate_sum(SumSpec(base, upper, WeightKind.NONE, md), cache).value


def _t1_1_lhs(pr, md, cache):
    return _plain_sum(-16, _half(pr), md, cache)


def _t1_1_rhs(pr, md, cache):
    sign = _fib_sign(pr)
    f = fibonacci_mod(pr.p**pr.a - sign, md.m)
    return sign * (1 + f * pow(2, -1, md.m)) % md.m


def _t1_2_lhs(pr, md, cache):
    return _plain_sum(-32, _half(pr), md, cache)


def _t1_2_rhs(pr, md, cache):
    pe = md.m
    t = (pow(2, pr.p**pr.a - 1, pe) - 1) % pe
    s2 = jacobi(2, pr.p) ** pr.a
    return s2 * (1 + t * pow(6, -1, pe) - t * t % pe * pow(8, -1, pe)) % pe


def _t2_main_lhs(pr, md, cache):
    return _plain_sum(pr.m, _half(pr), md, cache)


def _t2_main_rhs(pr, md, cache):
    m, p = pr.m, pr.p
    j = jacobi(m * (m - 4), p)
    u = lucas_uv_mod(LucasParams(4, m), entry_index(LucasParams(4, m), p), md).u.value
    mb = mbar(m, p, md.e).value
    return (j**pr.a + jacobi(-m, p) * j ** (pr.a - 1) * mb % md.m * u) % md.m


def _t2_cat_lhs(pr, md, cache):
    return evaluate_sum(SumSpec(pr.m, _half(pr), WeightKind.CATALAN, md), cache).value


def _t2_cat_rhs(pr, md, cache):
    m, pe = pr.m, md.m
    s = _plain_sum(m, _half(pr), md, cache)
    inv2 = pow(2, -1, pe)
    delta = 2 * pr.p * jacobi(-m, pr.p) if pr.a == 1 else 0
    return ((4 - m) * inv2 % pe * s + m * inv2 - delta) % pe


def _c1_1_8_lhs(pr, md, cache):
    return _plain_sum(8, _half(pr), md, cache)


def _c1_1_8_rhs(pr, md, cache):
    return jacobi(2, pr.p) ** pr.a % md.m


def _c1_1_16_lhs(pr, md, cache):
    return _plain_sum(16, _half(pr), md, cache)


def _c1_1_16_rhs(pr, md, cache):
    return jacobi(3, pr.p) ** pr.a % md.m


def _c1_2_lhs(pr, md, cache):
    s = evaluate_sum(
        SumSpec(16, (pr.p - 1) // 2, WeightKind.INV_2KM1_SQ, md), cache
    ).value
    return [s, s]


def _c1_2_rhs(pr, md, cache):
    p, pe = pr.p, md.m
    closed = jacobi(-1, p) * (3 * jacobi(p, 3) + 1) % pe * pow(4, -1, pe) % pe
    inv2 = pow(2, -1, pe)
    table = {1: 1 % pe, 5: -inv2 % pe, 7: pe - 1, 11: inv2}
    return [closed, table[p % 12]]


def _basic_p_lhs(pr, md, cache):
    return _plain_sum(pr.m, _half(pr), md, cache)


def _basic_p_rhs(pr, md, cache):
    return jacobi(pr.m * (pr.m - 4), pr.p) ** pr.a % md.m


def _williams_lhs(pr, md, cache):
    return fibonacci_quotient(pr.p, md.e).value


def _williams_rhs(pr, md, cache):
    pe = md.m
    h = alternating_harmonic(4 * pr.p // 5, md).value
    return 2 * pow(5, -1, pe) * h % pe


def _pansun_lhs(pr, md, cache):
    return signed_central_sum(-1, _full(pr), md, WeightKind.NONE, cache).value


def _pansun_rhs(pr, md, cache):
    sign = _fib_sign(pr)
    f = fibonacci_mod(pr.p**pr.a - sign, md.m)
    return sign * (1 - 2 * f) % md.m


def _adamchuk_lhs(pr, md, cache):
    # The conjectured sum starts at k = 1; drop the k = 0 term.
    return (signed_central_sum(1, 2 * pr.p // 3, md, WeightKind.NONE, cache).value - 1) % md.m


def _adamchuk_rhs(pr, md, cache):
    return 0


def _l2_1_lhs(pr, md, cache):
    """binom((p^a-1)/2 + k, 2k) - C(2k,k)/(-16)^k for every k, as a list."""
    p, e, pe = pr.p, md.e, md.m
    n = _half(pr)
    cb = _cb_residues(md, n, cache)
    x = pow(-16 % pe, -1, pe)
    invf = _unit_inverter(p, pe, 2 * n + 1, cache)
    out = [0] * (n + 1)  # both binomials are 1 at k = 0
    v, u = 0, 1
    xk = 1
    for k in range(1, n + 1):
        # Ratio of consecutive binomials: (n+k)(n-k+1) / (2k)(2k-1),
        # p-parts stripped factor by factor so each stays below p^a.
        num = (n + k) * (n - k + 1)
        while num % p == 0:
            num //= p
            v += 1
        u = u * (num % pe) % pe
        for den in (2 * k, 2 * k - 1):
            while den % p == 0:
                den //= p
                v -= 1
            if den > 1:
                u = u * invf(den) % pe
        xk = xk * x % pe
        lb = u * p**v % pe if v < e else 0
        out[k] = (lb - cb[k] * xk) % pe
    return out


def _l2_1_rhs(pr, md, cache):
    """(-1)^(k-1) (-1/p^a) binom(p^a-1-2k, (p^a-1)/2-k) T_k with
    T_k = sum_{0<j<=k} p^(2a)/(2j-1)^2; the second binomial is the
    central binomial at index (p^a-1)/2 - k."""
    p, e, pe = pr.p, md.e, md.m
    a = pr.a
    n = _half(pr)
    cb = _cb_residues(md, n, cache)
    sgn = jacobi(-1, p) ** a
    out = [0] * (n + 1)
    t_acc = 0
    for k in range(1, n + 1):
        # Accumulate p^(2a)/(2k-1)^2 exactly: strip p from 2k-1 first.
        odd = 2 * k - 1
        w = 0
        while odd % p == 0:
            odd //= p
            w += 1
        vterm = 2 * a - 2 * w
        if vterm < e:
            inv_sq = pow(odd % pe, -2, pe)
            t_acc = (t_acc + p**vterm * inv_sq) % pe
        rb = cb[n - k]
        val = sgn * rb % pe * t_acc % pe
        out[k] = val if k % 2 else (-val) % pe
    return out


def _l2_2a_lhs(pr, md, cache):
    pe = md.m
    t = (pow(2, pr.p**pr.a - 1, pe) - 1) % pe
    return (1 + t * pow(6, -1, pe) + t * t % pe * pow(24, -1, pe)) % pe


def _l2_2a_rhs(pr, md, cache):
    pa, pe = pr.p**pr.a, md.m
    s2 = jacobi(2, pr.p) ** pr.a
    denom = 3 * pow(2, (pa - 1) // 2, pe) % pe
    return s2 * (pow(2, pa, pe) + 1) % pe * pow(denom, -1, pe) % pe


def l2_2a_displayed_rhs(p: int, a: int = 1, e: int = 3) -> ResidueClass:
    """The uncorrected closed form with numerator 2^(p^a+1).

    Kept for documentation: it disagrees with both the corrected form and
    direct computation (already at p = 5, where it gives 78, not 91), so
    the registry uses the 2^(p^a)+1 numerator instead.
    """
    md = Modulus(p, e)
    pa, pe = p**a, md.m
    s2 = jacobi(2, p) ** a
    denom = 3 * pow(2, (pa - 1) // 2, pe) % pe
    return ResidueClass(md, s2 * pow(2, pa + 1, pe) * pow(denom, -1, pe))


def _l2_2b_lhs(pr, md, cache):
    pe = md.m
    pair = lucas_uv_mod(FIB, pr.p**pr.a, md)
    f, lu = pair.u.value, pair.v.value
    return ((lu - 1) * pow(5, -1, pe) - _fib_sign(pr) * f + 1) % pe


def _l2_2b_rhs(pr, md, cache):
    pe = md.m
    f = fibonacci_mod(pr.p**pr.a - _fib_sign(pr), pe)
    return -f * f % pe * pow(2, -1, pe) % pe


def _l2_3a_lhs(pr, md, cache):
    return signed_central_sum(-1, pr.p - 1, md, WeightKind.H2, cache).value


def _l2_3a_rhs(pr, md, cache):
    pe = md.m
    q = fibonacci_quotient(pr.p, md.e).value
    return jacobi(pr.p, 5) * 5 % pe * pow(2, -1, pe) % pe * q % pe * q % pe


def _l2_3b_lhs(pr, md, cache):
    return signed_central_sum(-2, pr.p - 1, md, WeightKind.H2, cache).value


def _l2_3b_rhs(pr, md, cache):
    pe = md.m
    q = fermat_quotient(2, pr.p, md.e).value
    return 2 * pow(3, -1, pe) % pe * q % pe * q % pe


def _mt_26_rhs(pr, md, cache):
    p, pe = pr.p, md.m
    invf = _unit_inverter(p, pe, p - 1, cache)
    acc = 0
    f, g = 0, 1  # (F_{2k}, F_{2k+1})
    for k in range(1, p):
        f, g = g, f + g
        f, g = g % pe, (f + g) % pe
        ik = invf(k)
        acc = (acc + f * ik % pe * ik) % pe
    return -2 * acc % pe


def _mt_27_rhs(pr, md, cache):
    p, pe = pr.p, md.m
    invf = _unit_inverter(p, pe, p - 1, cache)
    inv2 = pow(2, -1, pe)
    inv3 = pow(3, -1, pe)
    acc = 0
    pw, pwi = 1, 1
    for k in range(1, p):
        pw = pw * 2 % pe
        pwi = pwi * inv2 % pe
        u = 2 * (pw - pwi) % pe * inv3 % pe
        ik = invf(k)
        acc = (acc + u * ik % pe * ik) % pe
    return -2 * acc % pe


def _aux_granville_lhs(pr, md, cache):
    return power_over_square_sum(2, 1, md).value


def _aux_granville_rhs(pr, md, cache):
    q = fermat_quotient(2, pr.p, md.e).value
    return -q * q % md.m


def _aux_s08_lhs(pr, md, cache):
    return power_over_square_sum(1, 2, md).value


def _aux_s08_rhs(pr, md, cache):
    pe = md.m
    q = fermat_quotient(2, pr.p, md.e).value
    return -q * q % pe * pow(2, -1, pe) % pe


def _aux_st_lhs(pr, md, cache):
    return 2 * (lucas_uv_mod(FIB, pr.p, md).v.value - 1) % md.m


def _aux_st_rhs(pr, md, cache):
    return 5 * fibonacci_mod(pr.p - jacobi(pr.p, 5), md.m) % md.m


def _aux_ss_lhs(pr, md, cache):
    return lucas_uv_mod(FIB, pr.p - jacobi(5, pr.p), md).v.value


def _aux_ss_rhs(pr, md, cache):
    return 2 * jacobi(pr.p, 5) % md.m


def _v_cong_a_lhs(pr, md, cache):
    return lucas_uv_mod(_ab(pr), pr.p, md).v.value


def _v_cong_a_rhs(pr, md, cache):
    return _ab(pr).A % md.m


def _l3_2_lhs(pr, md, cache):
    return lucas_uv_mod(_ab(pr), pr.p, md).u.value


def _l3_2_rhs(pr, md, cache):
    ab = _ab(pr)
    p, pe = pr.p, md.m
    jd = jacobi(ab.delta, p)
    un = lucas_uv_mod(ab, entry_index(ab, p), md).u.value
    bpow = 1 if jd == 1 else pow(ab.B % pe, -1, pe)
    inv2 = pow(2, -1, pe)
    return (ab.A * inv2 % pe * bpow % pe * un + jd * (pow(ab.B % pe, p - 1, pe) + 1) * inv2) % pe


def _l3_3_lhs(pr, md, cache):
    # C(2k, k+1) = C(2k,k) - C_k termwise.
    plain = _plain_sum(pr.m, _half(pr), md, cache)
    cat = evaluate_sum(SumSpec(pr.m, _half(pr), WeightKind.CATALAN, md), cache).value
    return (plain - cat) % md.m


def _l3_3_rhs(pr, md, cache):
    m, pe = pr.m, md.m
    s = _plain_sum(m, _half(pr), md, cache)
    inv2 = pow(2, -1, pe)
    delta = 2 * pr.p * jacobi(-m, pr.p) if pr.a == 1 else 0
    return ((m - 2) * inv2 % pe * s - m * inv2 + delta) % pe


def _p4_1a_lhs(pr, md, cache):
    pe = md.m
    s = evaluate_sum(SumSpec(pr.m, _half(pr), WeightKind.LINEAR_K, md), cache).value
    return (pr.m - 4) * pow(2, -1, pe) % pe * s % pe


def _p4_1a_rhs(pr, md, cache):
    return (
        _plain_sum(pr.m, _half(pr), md, cache)
        - pr.p**pr.a * jacobi(-pr.m, pr.p) ** pr.a
    ) % md.m


def _p4_1b_lhs(pr, md, cache):
    pe = md.m
    s = evaluate_sum(SumSpec(pr.m, _full(pr), WeightKind.LINEAR_K, md), cache).value
    return (pr.m - 4) * pow(2, -1, pe) % pe * s % pe


def _p4_1b_rhs(pr, md, cache):
    return (_plain_sum(pr.m, _full(pr), md, cache) - pr.p**pr.a) % md.m


def _weighted_k_lhs(base: int, half_range: bool) -> Side:
    def lhs(pr, md, cache):
        upper = (pr.p - 1) // 2 if half_range else pr.p - 1
        return evaluate_sum(SumSpec(base, upper, WeightKind.LINEAR_K, md), cache).value

    return lhs


def _e4_4_rhs(pr, md, cache):
    return (pr.p - jacobi(-1, pr.p)) % md.m


def _e4_5_rhs(pr, md, cache):
    return (2 * pr.p - 2 * jacobi(pr.p, 3)) % md.m


def _e4_6_rhs(pr, md, cache):
    pe = md.m
    return jacobi(2, pr.p) * (1 - jacobi(-1, pr.p) * pr.p) % pe * pow(2, -1, pe) % pe


def _e4_7_rhs(pr, md, cache):
    pe = md.m
    return (jacobi(3, pr.p) - jacobi(-1, pr.p) * pr.p) % pe * pow(6, -1, pe) % pe


def _morley_lhs(pr, md, cache):
    half = (pr.p - 1) // 2
    return _cb_residues(md, half, cache)[half]


def _morley_rhs(pr, md, cache):
    return jacobi(-1, pr.p) * pow(4, pr.p - 1, md.m) % md.m


def _conj11n_lhs(pr, md, cache):
    return _plain_sum(16, pr.n, md, cache)


def _conj11n_rhs(pr, md, cache):
    # Independent arbitrary-precision route for the closed side.
    n = pr.n
    target = 1 if n % 3 == 0 else 4
    return (2 * n + 1) ** 2 * comb(2 * n, n) % md.m * target % md.m


def _conj11a_lhs(pr, md, cache):
    return _plain_sum(16, (3**pr.a - 1) // 2, md, cache)


def _conj11a_rhs(pr, md, cache):
    return 9**pr.a * ((-1) ** pr.a * 10) % md.m


def _conj_floor_lhs(base: int, num: int, den: int, signed: bool) -> Side:
    def lhs(pr, md, cache):
        upper = floor_multiple(num, den, pr.p**pr.a)
        if signed:
            return signed_central_sum(base, upper, md, WeightKind.NONE, cache).value
        return _plain_sum(base, upper, md, cache)

    return lhs


def _jac5_rhs(pr, md, cache):
    return jacobi(5, pr.p) ** pr.a % md.m


def _jac3_rhs(pr, md, cache):
    return jacobi(3, pr.p) ** pr.a % md.m


# ---------------------------------------------------------------------------
# The registry.
# ---------------------------------------------------------------------------


def _spec(
    id: str,
    kind: CheckKind,
    description: str,
    lhs: Side,
    rhs: Side,
    *,
    e: int | None = None,
    exponent: Callable[[CheckParams], int] | None = None,
    exponent_label: str | None = None,
    domain: Callable[[CheckParams], bool] | None = None,
    domain_label: str = "odd p",
    length: Callable[[CheckParams], int] | None = None,
    uses_m: bool = False,
    uses_n: bool = False,
    uses_ab: bool = False,
) -> CheckSpec:
    if exponent is None:
        exponent = lambda pr, _e=e: _e
        exponent_label = exponent_label or str(e)
    return CheckSpec(
        id=id,
        kind=kind,
        description=description,
        exponent=exponent,
        exponent_label=exponent_label or "",
        domain=domain or (lambda pr: True),
        domain_label=domain_label,
        lhs=lhs,
        rhs=rhs,
        length=length or _half,
        uses_m=uses_m,
        uses_n=uses_n,
        uses_ab=uses_ab,
    )


def _needs_m(extra: Callable[[CheckParams], bool] | None = None):
    def dom(pr: CheckParams) -> bool:
        if pr.m is None or pr.m % pr.p == 0:
            return False
        return extra(pr) if extra else True

    return dom


_REGISTRY: tuple[CheckSpec, ...] = (
    _spec(
        "T1_1",
        CheckKind.THEOREM,
        "half-range sum of C(2k,k)/(-16)^k determines the Fibonacci entry term mod p^3",
        _t1_1_lhs,
        _t1_1_rhs,
        e=3,
        domain=lambda pr: pr.p != 5,
        domain_label="p != 5",
    ),
    _spec(
        "T1_2",
        CheckKind.THEOREM,
        "half-range sum of C(2k,k)/(-32)^k against a Fermat-quotient polynomial mod p^3",
        _t1_2_lhs,
        _t1_2_rhs,
        e=3,
        domain=lambda pr: pr.p != 3,
        domain_label="p != 3",
    ),
    _spec(
        "T2_MAIN",
        CheckKind.THEOREM,
        "half-range sum of C(2k,k)/m^k via the Lucas sequence u(4,m) mod p^2",
        _t2_main_lhs,
        _t2_main_rhs,
        e=2,
        domain=_needs_m(),
        domain_label="gcd(m, p) = 1",
        uses_m=True,
    ),
    _spec(
        "T2_CAT",
        CheckKind.THEOREM,
        "half-range Catalan sum C_k/m^k reduced to the plain sum mod p^2",
        _t2_cat_lhs,
        _t2_cat_rhs,
        e=2,
        domain=_needs_m(),
        domain_label="gcd(m, p) = 1",
        uses_m=True,
    ),
    _spec(
        "C1_1_8",
        CheckKind.THEOREM,
        "half-range sum of C(2k,k)/8^k equals the Jacobi symbol (2/p^a) mod p^2",
        _c1_1_8_lhs,
        _c1_1_8_rhs,
        e=2,
    ),
    _spec(
        "C1_1_16",
        CheckKind.THEOREM,
        "half-range sum of C(2k,k)/16^k equals the Jacobi symbol (3/p^a) mod p^2",
        _c1_1_16_lhs,
        _c1_1_16_rhs,
        e=2,
    ),
    _spec(
        "C1_2",
        CheckKind.THEOREM,
        "sum of C(2k,k)/((2k-1)^2 16^k) equals (-1/p)(3(p/3)+1)/4 mod p^2, "
        "cross-checked against the mod-12 case table",
        _c1_2_lhs,
        _c1_2_rhs,
        e=2,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: (pr.p - 1) // 2,
    ),
    _spec(
        "BASIC_P",
        CheckKind.AUXILIARY,
        "half-range sum of C(2k,k)/m^k reduces to the Jacobi symbol (m(m-4)/p^a) mod p",
        _basic_p_lhs,
        _basic_p_rhs,
        e=1,
        domain=_needs_m(),
        domain_label="gcd(m, p) = 1",
        uses_m=True,
    ),
    _spec(
        "WILLIAMS",
        CheckKind.AUXILIARY,
        "Fibonacci quotient as (2/5) times the alternating harmonic sum to floor(4p/5) mod p",
        _williams_lhs,
        _williams_rhs,
        e=1,
        domain=lambda pr: pr.p != 5 and pr.a == 1,
        domain_label="p not in {2, 5}, a = 1",
        length=lambda pr: 4 * pr.p // 5,
    ),
    _spec(
        "PANSUN",
        CheckKind.AUXILIARY,
        "full-range alternating sum of C(2k,k) determines the Fibonacci entry term mod p^3",
        _pansun_lhs,
        _pansun_rhs,
        e=3,
        domain=lambda pr: pr.p != 5,
        domain_label="p not in {2, 5}",
        length=_full,
    ),
    _spec(
        "ADAMCHUK",
        CheckKind.CONJECTURE,
        "sum of C(2k,k) for 1 <= k <= floor(2p/3) vanishes mod p^2 when p = 1 (mod 3)",
        _adamchuk_lhs,
        _adamchuk_rhs,
        e=2,
        domain=lambda pr: pr.p % 3 == 1 and pr.a == 1,
        domain_label="p = 1 (mod 3), a = 1",
        length=lambda pr: 2 * pr.p // 3,
    ),
    _spec(
        "L2_1",
        CheckKind.LEMMA,
        "termwise: binom((p^a-1)/2+k, 2k) - C(2k,k)/(-16)^k against the odd-square "
        "tail sum, for every k, mod p^3",
        _l2_1_lhs,
        _l2_1_rhs,
        e=3,
    ),
    _spec(
        "L2_2A",
        CheckKind.LEMMA,
        "quadratic in 2^(p^a-1)-1 equals (2/p^a)(2^(p^a)+1)/(3*2^((p^a-1)/2)) mod p^3 "
        "(corrected numerator; see l2_2a_displayed_rhs)",
        _l2_2a_lhs,
        _l2_2a_rhs,
        e=3,
        domain=lambda pr: pr.p > 3,
        domain_label="p > 3",
        length=lambda pr: 0,
    ),
    _spec(
        "L2_2B",
        CheckKind.LEMMA,
        "Lucas/Fibonacci expression equals -F^2/2 at the entry index mod p^4",
        _l2_2b_lhs,
        _l2_2b_rhs,
        e=4,
        domain=lambda pr: pr.p != 5,
        domain_label="p not in {2, 5}",
        length=lambda pr: 0,
    ),
    _spec(
        "L2_3A",
        CheckKind.LEMMA,
        "alternating C(2k,k) H_k^(2) sum equals (p/5)(5/2)q^2 mod p, q the Fibonacci quotient",
        _l2_3a_lhs,
        _l2_3a_rhs,
        e=1,
        # The suite runs p > 5 only: direct evaluation at p = 3 gives
        # lhs = 1, rhs = 2 (mod 3), a pinned anomaly reachable via force.
        domain=lambda pr: pr.p > 5 and pr.a == 1,
        domain_label="p > 5, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "L2_3B",
        CheckKind.LEMMA,
        "(-2)^k C(2k,k) H_k^(2) sum equals (2/3) q_p(2)^2 mod p",
        _l2_3b_lhs,
        _l2_3b_rhs,
        e=1,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "MT_26",
        CheckKind.AUXILIARY,
        "alternating C(2k,k) H_k^(2) sum equals -2 sum F_{2k}/k^2 mod p",
        _l2_3a_lhs,
        _mt_26_rhs,
        e=1,
        domain=lambda pr: pr.p > 5 and pr.a == 1,
        domain_label="p > 5, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "MT_27",
        CheckKind.AUXILIARY,
        "(-2)^k C(2k,k) H_k^(2) sum equals -2 sum of (2(2^k - 2^-k)/3)/k^2 mod p",
        _l2_3b_lhs,
        _mt_27_rhs,
        e=1,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "AUX_GRANVILLE",
        CheckKind.AUXILIARY,
        "sum 2^k/k^2 equals -q_p(2)^2 mod p",
        _aux_granville_lhs,
        _aux_granville_rhs,
        e=1,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "AUX_S08",
        CheckKind.AUXILIARY,
        "sum 1/(k^2 2^k) equals -q_p(2)^2/2 mod p",
        _aux_s08_lhs,
        _aux_s08_rhs,
        e=1,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "AUX_ST",
        CheckKind.AUXILIARY,
        "2(L_p - 1) equals 5 F_{p-(p/5)} mod p^2",
        _aux_st_lhs,
        _aux_st_rhs,
        e=2,
        domain=lambda pr: pr.p != 5 and pr.a == 1,
        domain_label="p not in {2, 5}, a = 1",
        length=lambda pr: 0,
    ),
    _spec(
        "AUX_SS",
        CheckKind.AUXILIARY,
        "L_{p-(5/p)} equals 2(p/5) mod p^2",
        _aux_ss_lhs,
        _aux_ss_rhs,
        e=2,
        domain=lambda pr: pr.p != 5 and pr.a == 1,
        domain_label="p not in {2, 5}, a = 1",
        length=lambda pr: 0,
    ),
    _spec(
        "V_CONG_A",
        CheckKind.AUXILIARY,
        "companion value v_p(A,B) is congruent to A mod p",
        _v_cong_a_lhs,
        _v_cong_a_rhs,
        e=1,
        domain=lambda pr: pr.a == 1,
        domain_label="odd p, a = 1; any (A, B)",
        length=lambda pr: 0,
        uses_ab=True,
    ),
    _spec(
        "L3_2",
        CheckKind.LEMMA,
        "u_p(A,B) from the entry term plus (delta/p)(B^(p-1)+1)/2 mod p^2",
        _l3_2_lhs,
        _l3_2_rhs,
        e=2,
        domain=lambda pr: pr.a == 1
        and (2 * _ab(pr).B * _ab(pr).delta) % pr.p != 0,
        domain_label="p does not divide 2 B delta, a = 1",
        length=lambda pr: 0,
        uses_ab=True,
    ),
    _spec(
        "L3_3",
        CheckKind.LEMMA,
        "sum of C(2k,k+1)/m^k reduced to the plain sum mod p^2",
        _l3_3_lhs,
        _l3_3_rhs,
        e=2,
        domain=_needs_m(),
        domain_label="gcd(m, p) = 1",
        uses_m=True,
    ),
    _spec(
        "P4_1A",
        CheckKind.THEOREM,
        "half-range k-weighted sum against the plain sum minus p^a (-m/p^a), mod p^(a+1)",
        _p4_1a_lhs,
        _p4_1a_rhs,
        exponent=lambda pr: pr.a + 1,
        exponent_label="a+1",
        domain=_needs_m(),
        domain_label="gcd(m, p) = 1",
        uses_m=True,
    ),
    _spec(
        "P4_1B",
        CheckKind.THEOREM,
        "full-range k-weighted sum against the plain sum minus p^a, mod p^(a+1)",
        _p4_1b_lhs,
        _p4_1b_rhs,
        exponent=lambda pr: pr.a + 1,
        exponent_label="a+1",
        domain=_needs_m(),
        domain_label="gcd(m, p) = 1",
        length=_full,
        uses_m=True,
    ),
    _spec(
        "E4_4",
        CheckKind.THEOREM,
        "full-range sum k C(2k,k)/2^k equals p - (-1/p) mod p^2",
        _weighted_k_lhs(2, half_range=False),
        _e4_4_rhs,
        e=2,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "E4_5",
        CheckKind.THEOREM,
        "full-range sum k C(2k,k)/3^k equals 2p - 2(p/3) mod p^2",
        _weighted_k_lhs(3, half_range=False),
        _e4_5_rhs,
        e=2,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: pr.p - 1,
    ),
    _spec(
        "E4_6",
        CheckKind.THEOREM,
        "half-range sum k C(2k,k)/8^k equals (2/p)(1 - (-1/p) p)/2 mod p^2",
        _weighted_k_lhs(8, half_range=True),
        _e4_6_rhs,
        e=2,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: (pr.p - 1) // 2,
    ),
    _spec(
        "E4_7",
        CheckKind.THEOREM,
        "half-range sum k C(2k,k)/16^k equals ((3/p) - (-1/p) p)/6 mod p^2",
        _weighted_k_lhs(16, half_range=True),
        _e4_7_rhs,
        e=2,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: (pr.p - 1) // 2,
    ),
    _spec(
        "MORLEY",
        CheckKind.AUXILIARY,
        "Morley's congruence: C(p-1,(p-1)/2) equals (-1)^((p-1)/2) 4^(p-1) mod p^3",
        _morley_lhs,
        _morley_rhs,
        e=3,
        domain=lambda pr: pr.p > 3 and pr.a == 1,
        domain_label="p > 3, a = 1",
        length=lambda pr: (pr.p - 1) // 2,
    ),
    _spec(
        "CONJ1_1N",
        CheckKind.CONJECTURE,
        "sum_{k<=n} C(2k,k)/16^k equals (2n+1)^2 C(2n,n) times (1 or 4 per 3|n), "
        "compared 3-adically at exponent v+2",
        _conj11n_lhs,
        _conj11n_rhs,
        exponent=lambda pr: _conj11n_valuation(pr.n) + 2,
        exponent_label="v+2",
        domain=lambda pr: pr.p == 3 and pr.n is not None,
        domain_label="p = 3, indexed by n",
        length=lambda pr: pr.n if pr.n is not None else 0,
        uses_n=True,
    ),
    _spec(
        "CONJ1_1A",
        CheckKind.CONJECTURE,
        "sum to (3^a-1)/2 of C(2k,k)/16^k equals 9^a (-1)^a 10 mod 3^(2a+3)",
        _conj11a_lhs,
        _conj11a_rhs,
        exponent=lambda pr: 2 * pr.a + 3,
        exponent_label="2a+3",
        domain=lambda pr: pr.p == 3,
        domain_label="p = 3, indexed by a",
        length=lambda pr: (3**pr.a - 1) // 2,
    ),
    _spec(
        "CONJ1_2_I",
        CheckKind.CONJECTURE,
        "sum to floor(5 p^a/6) of C(2k,k)/16^k equals (3/p^a) mod p^2",
        _conj_floor_lhs(16, 5, 6, signed=False),
        _jac3_rhs,
        e=2,
        domain=lambda pr: pr.p % 3 == 1 or pr.a > 1,
        domain_label="p = 1 (mod 3) or a > 1",
        length=lambda pr: floor_multiple(5, 6, pr.p**pr.a),
    ),
    _spec(
        "CONJ1_2_II_45",
        CheckKind.CONJECTURE,
        "alternating C(2k,k) sum to floor(4 p^a/5) equals (5/p^a) mod p^2",
        _conj_floor_lhs(-1, 4, 5, signed=True),
        _jac5_rhs,
        e=2,
        # p = 5 is excluded: there the Jacobi symbol vanishes and the sum
        # does not (already at a = 2), so the stated a > 1 branch cannot
        # be meant to include it.
        domain=lambda pr: pr.p != 5
        and (pr.p**pr.a % 5 in (1, 2) or (pr.a > 1 and pr.p % 5 != 3)),
        domain_label="p^a = 1,2 (mod 5), or a > 1 and p != 3 (mod 5); p != 5",
        length=lambda pr: floor_multiple(4, 5, pr.p**pr.a),
    ),
    _spec(
        "CONJ1_2_II_35",
        CheckKind.CONJECTURE,
        "alternating C(2k,k) sum to floor(3 p^a/5) equals (5/p^a) mod p^2",
        _conj_floor_lhs(-1, 3, 5, signed=True),
        _jac5_rhs,
        e=2,
        domain=lambda pr: pr.p != 5
        and (pr.p**pr.a % 5 in (1, 3) or (pr.a > 1 and pr.p % 5 != 2)),
        domain_label="p^a = 1,3 (mod 5), or a > 1 and p != 2 (mod 5); p != 5",
        length=lambda pr: floor_multiple(3, 5, pr.p**pr.a),
    ),
    _spec(
        "CONJ1_2_III_710",
        CheckKind.CONJECTURE,
        "sum to floor(7 p^a/10) of C(2k,k)/(-16)^k equals (5/p^a) mod p^2",
        _conj_floor_lhs(-16, 7, 10, signed=False),
        _jac5_rhs,
        e=2,
        domain=lambda pr: pr.p % 10 in (1, 7) or pr.a > 2,
        domain_label="p = 1,7 (mod 10) or a > 2",
        length=lambda pr: floor_multiple(7, 10, pr.p**pr.a),
    ),
    _spec(
        "CONJ1_2_III_910",
        CheckKind.CONJECTURE,
        "sum to floor(9 p^a/10) of C(2k,k)/(-16)^k equals (5/p^a) mod p^2",
        _conj_floor_lhs(-16, 9, 10, signed=False),
        _jac5_rhs,
        e=2,
        domain=lambda pr: pr.p % 10 in (1, 3) or pr.a > 2,
        domain_label="p = 1,3 (mod 10) or a > 2",
        length=lambda pr: floor_multiple(9, 10, pr.p**pr.a),
    ),
)

_REGISTRY_BY_ID = {spec.id: spec for spec in _REGISTRY}


def list_checks() -> tuple[CheckSpec, ...]:
    """The full registry, in stable order with stable ids."""
    return _REGISTRY


def get_check(check_id: str) -> CheckSpec:
    try:
        return _REGISTRY_BY_ID[check_id]
    except KeyError:
        raise UnknownCheckId(f"no check registered under id {check_id!r}") from None


# ---------------------------------------------------------------------------
# Running checks.
# ---------------------------------------------------------------------------


def _compare(lhs, rhs, md: Modulus) -> tuple[int, int, int]:
    """Defect valuation plus the (lhs, rhs) pair at the worst position."""
    p, e, pe = md.p, md.e, md.m
    lhs_list = lhs if isinstance(lhs, list) else [lhs]
    rhs_list = rhs if isinstance(rhs, list) else [rhs]
    if len(lhs_list) != len(rhs_list):
        raise CheckError("side evaluators disagree on arity")
    worst = e
    worst_pair = (lhs_list[-1], rhs_list[-1])
    for l, r in zip(lhs_list, rhs_list):
        d = (l - r) % pe
        if d == 0:
            continue
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        if v < worst:
            worst = v
            worst_pair = (l, r)
            if worst == 0:
                break
    return worst, worst_pair[0], worst_pair[1]


def run_check(
    check_id: str,
    params: CheckParams,
    cache: dict | None = None,
    exponent_override: int | None = None,
) -> Verdict:
    """Evaluate both sides of a registered check and compare them.

    Raises ``DomainError`` when the parameters fall outside the check's
    declared domain (unless ``force`` is set), ``BudgetExceeded`` when the
    sum is longer than the term budget, and ``CheckError`` when the
    arithmetic itself cannot proceed (for example a forced evaluation
    that divides by p).  ``exponent_override`` re-runs the check at a
    lower exponent; it exists for consistency diagnostics.
    """
    spec = get_check(check_id)
    p = params.p
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    if params.a < 1:
        raise DomainError(f"a must be >= 1, got {params.a}")
    if spec.uses_m and params.m is None:
        raise DomainError(f"check {check_id} requires parameter m")
    if spec.uses_n and params.n is None:
        raise DomainError(f"check {check_id} requires parameter n")
    if not spec.domain(params) and not params.force:
        raise DomainError(
            f"params (p={p}, a={params.a}, m={params.m}, n={params.n}) are outside "
            f"the domain of {check_id} [{spec.domain_label}]"
        )
    if spec.length(params) > params.budget and not params.force:
        raise BudgetExceeded(
            f"{check_id} at p={p}, a={params.a} needs {spec.length(params)} terms, "
            f"budget is {params.budget}"
        )
    e = exponent_override if exponent_override is not None else spec.exponent(params)
    md = Modulus(p, e)
    work = cache if cache is not None else {}
    try:
        lhs = spec.lhs(params, md, work)
        rhs = spec.rhs(params, md, work)
    except (
        NotInvertible,
        NegativeValuation,
        NotDivisible,
        WeightDomain,
        ZeroInput,
        ValueError,  # a raw pow(x, -1, m) on a forced evaluation
    ) as exc:
        raise CheckError(f"{check_id} at p={p}: {exc}") from exc
    defect, l, r = _compare(lhs, rhs, md)
    return Verdict(
        check_id=check_id,
        params=params,
        modulus=md,
        lhs=ResidueClass(md, l),
        rhs=ResidueClass(md, r),
        defect_valuation=defect,
        passed=defect == md.e,
    )


def run_conj11n_range(n_max: int, budget: int = DEFAULT_TERM_BUDGET) -> list[Verdict]:
    """Verdicts of CONJ1_1N for every n in 0..n_max, in one stream pass.

    All sums share a single accumulation at the largest needed 3-adic
    precision; each n is then compared at its own exponent.  Agreement
    with per-n ``run_check`` calls is pinned by tests.
    """
    if n_max > budget:
        raise BudgetExceeded(f"n_max = {n_max} exceeds budget {budget}")
    e_top = max(_conj11n_valuation(n) + 2 for n in range(n_max + 1))
    top = Modulus(3, e_top)
    pe_top = top.m
    work: dict = {}
    vu = _cb_vu(top, n_max, work)
    inv16 = pow(16, -1, pe_top)
    verdicts = []
    s = 0
    xk = 1
    for n in range(n_max + 1):
        v, u = vu[n]
        s = (s + (u * 3**v if v < e_top else 0) * xk) % pe_top
        xk = xk * inv16 % pe_top
        e_n = _conj11n_valuation(n) + 2
        md = Modulus(3, e_n)
        lhs = s % md.m
        vm = 2 * _v3(2 * n + 1) + v
        unit = pow((2 * n + 1) // 3 ** _v3(2 * n + 1), 2, md.m) * u % md.m
        target = 1 if n % 3 == 0 else 4
        rhs = (unit * 3**vm if vm < e_n else 0) * target % md.m
        defect, l, r = _compare(lhs, rhs, md)
        verdicts.append(
            Verdict(
                check_id="CONJ1_1N",
                params=CheckParams(p=3, n=n, budget=budget),
                modulus=md,
                lhs=ResidueClass(md, l),
                rhs=ResidueClass(md, r),
                defect_valuation=defect,
                passed=defect == e_n,
            )
        )
    return verdicts
