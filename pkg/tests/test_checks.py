from dataclasses import replace

import pytest

import fibmod.checks as checks
from fibmod.checks import (
    BudgetExceeded,
    CheckError,
    CheckKind,
    CheckParams,
    UnknownCheckId,
    get_check,
    l2_2a_displayed_rhs,
    list_checks,
    mbar,
    run_check,
    run_conj11n_range,
)
from fibmod.modarith import Modulus, NotInvertible
from fibmod.scanner import sieve_primes
from fibmod.sequences import DomainError, fibonacci_mod


def test_registry_contents():
    specs = list_checks()
    assert len(specs) >= 30
    by_id = {s.id: s for s in specs}
    assert by_id["T1_1"].kind is CheckKind.THEOREM
    assert by_id["CONJ1_2_I"].kind is CheckKind.CONJECTURE
    assert by_id["L2_1"].kind is CheckKind.LEMMA
    assert by_id["MORLEY"].kind is CheckKind.AUXILIARY
    # Stable order and stable ids: pinned prefix.
    assert [s.id for s in specs[:7]] == [
        "T1_1",
        "T1_2",
        "T2_MAIN",
        "T2_CAT",
        "C1_1_8",
        "C1_1_16",
        "C1_2",
    ]
    assert list_checks() == specs


def test_unknown_id():
    with pytest.raises(UnknownCheckId):
        get_check("NOPE")
    with pytest.raises(UnknownCheckId):
        run_check("NOPE", CheckParams(p=7))


def test_t1_1_spot():
    v = run_check("T1_1", CheckParams(p=7))
    assert (v.lhs.value, v.rhs.value) == (160, 160)
    assert v.passed and v.defect_valuation == 3
    assert v.modulus == Modulus(7, 3)


def test_pansun_spot():
    v = run_check("PANSUN", CheckParams(p=3))
    assert (v.lhs.value, v.rhs.value) == (5, 5)
    assert v.passed


def test_l2_3a_anomaly_pinned():
    # Out of the declared domain; forced evaluation shows the mismatch.
    with pytest.raises(DomainError):
        run_check("L2_3A", CheckParams(p=3))
    v = run_check("L2_3A", CheckParams(p=3, force=True))
    assert (v.lhs.value, v.rhs.value) == (1, 2)
    assert not v.passed
    assert v.defect_valuation == 0


def test_c1_1_8_spot():
    v = run_check("C1_1_8", CheckParams(p=5))
    assert (v.lhs.value, v.rhs.value) == (24, 24)  # (2/5) = -1 = 24 (mod 25)
    assert v.passed


def test_l2_2a_corrected_vs_displayed():
    v = run_check("L2_2A", CheckParams(p=5))
    assert (v.lhs.value, v.rhs.value) == (91, 91)
    assert v.passed
    # The uncorrected closed form disagrees with direct computation.
    assert l2_2a_displayed_rhs(5).value == 78


def test_mbar_examples():
    assert mbar(4, 11, 1).value == 1
    assert mbar(3, 11, 1).value == 2  # (1/11) = 1
    assert mbar(8, 7, 2).value == 37  # (-4/7) = -1, 2/8 = 37 (mod 49)
    with pytest.raises(NotInvertible):
        mbar(22, 11, 1)


def test_domain_errors():
    with pytest.raises(DomainError):
        run_check("T1_1", CheckParams(p=5))
    with pytest.raises(DomainError):
        run_check("T1_2", CheckParams(p=3))
    with pytest.raises(DomainError):
        run_check("T2_MAIN", CheckParams(p=7))  # m missing
    with pytest.raises(DomainError):
        run_check("CONJ1_1N", CheckParams(p=3))  # n missing
    with pytest.raises(DomainError):
        run_check("T1_1", CheckParams(p=9))  # not prime
    with pytest.raises(DomainError):
        run_check("T1_1", CheckParams(p=7, a=0))


def test_budget():
    with pytest.raises(BudgetExceeded):
        run_check("T1_1", CheckParams(p=101, budget=10))
    # force overrides the budget gate
    assert run_check("T1_1", CheckParams(p=101, budget=10, force=True)).passed


def test_check_error_wraps_arithmetic():
    # T1_2 forced at p = 3 divides by 6.
    with pytest.raises(CheckError):
        run_check("T1_2", CheckParams(p=3, force=True))


def test_forced_conjecture_candidate():
    v = run_check("ADAMCHUK", CheckParams(p=5, force=True))
    assert not v.passed
    assert (v.lhs.value, v.rhs.value) == (3, 0)


def test_downward_consistency():
    cases = [
        ("T1_1", CheckParams(p=13)),
        ("T1_2", CheckParams(p=13)),
        ("T2_MAIN", CheckParams(p=11, m=7)),
        ("PANSUN", CheckParams(p=7, a=2)),
        ("L2_2B", CheckParams(p=13)),
        ("MORLEY", CheckParams(p=11)),
        ("L2_1", CheckParams(p=11)),
    ]
    for cid, params in cases:
        top = get_check(cid).exponent(params)
        assert run_check(cid, params).passed
        for e in range(1, top):
            v = run_check(cid, params, exponent_override=e)
            assert v.passed, (cid, e)


def test_mutation_of_rhs_fails(monkeypatch):
    spec = get_check("T1_1")
    corrupted = replace(spec, rhs=lambda pr, md, cache: (spec.rhs(pr, md, cache) + 1) % md.m)
    monkeypatch.setitem(checks._REGISTRY_BY_ID, "T1_1", corrupted)
    v = run_check("T1_1", CheckParams(p=7))
    assert not v.passed
    assert v.defect_valuation == 0


def test_defect_valuation_grading(monkeypatch):
    # Shift the closed form by p^2: the defect valuation must report 2.
    spec = get_check("T1_1")
    shifted = replace(
        spec, rhs=lambda pr, md, cache: (spec.rhs(pr, md, cache) + pr.p**2) % md.m
    )
    monkeypatch.setitem(checks._REGISTRY_BY_ID, "T1_1", shifted)
    v = run_check("T1_1", CheckParams(p=7))
    assert not v.passed
    assert v.defect_valuation == 2


def test_c1_2_forms_agree():
    for p in sieve_primes(5, 300):
        v = run_check("C1_2", CheckParams(p=p))
        assert v.passed, p  # both the closed form and the case table


def test_t1_1_cross_checks_h2_relation():
    # For a = 1 the half-range sum minus F_p is -(5/8)(p/5) F^2 mod p^3.
    from fibmod.binomsums import SumSpec, WeightKind, evaluate_sum
    from fibmod.modarith import jacobi

    for p in sieve_primes(3, 200):
        if p == 5:
            continue
        md = Modulus(p, 3)
        s = evaluate_sum(SumSpec(-16, (p - 1) // 2, WeightKind.NONE, md)).value
        sign = jacobi(p, 5)
        f_p = fibonacci_mod(p, md.m)
        f_entry = fibonacci_mod(p - sign, md.m)
        rhs = (f_p - 5 * sign * pow(8, -1, md.m) * f_entry % md.m * f_entry) % md.m
        assert s == rhs, p
        assert run_check("T1_1", CheckParams(p=p)).passed


def test_lucas_parameterized_checks():
    v = run_check("L3_2", CheckParams(p=7, A=3, B=2))
    assert v.passed and v.lhs.value == 29
    v = run_check("V_CONG_A", CheckParams(p=11, A=-6, B=9))
    assert v.passed and v.lhs.value == 5
    # Defaults are the Fibonacci parameters.
    assert run_check("V_CONG_A", CheckParams(p=11)).passed
    with pytest.raises(DomainError):
        run_check("L3_2", CheckParams(p=5, A=1, B=5))  # p | 2B


def test_conj11n_spot_value():
    # n = 1: ratio is 1/16 = 4 (mod 9), so sum = 18 * 4 = 72 (mod 81).
    v = run_check("CONJ1_1N", CheckParams(p=3, n=1))
    assert v.passed
    assert v.modulus == Modulus(3, 4)
    assert v.lhs.value == 72
    q = v.lhs.value // 9 * pow(2, -1, 9) % 9
    assert q == 4


def test_conj11a_spot_value():
    # a = 1: sum/9 = 1/8 = 17 = -10 (mod 27).
    v = run_check("CONJ1_1A", CheckParams(p=3, a=1))
    assert v.passed
    assert v.lhs.value == 153  # 9 * 17 (mod 3^5)
    assert v.lhs.value // 9 % 27 == 17


def test_conj11n_range_agrees_with_run_check():
    verdicts = run_conj11n_range(150)
    assert len(verdicts) == 151
    for n in range(0, 151, 7):
        single = run_check("CONJ1_1N", CheckParams(p=3, n=n))
        bulk = verdicts[n]
        assert bulk.passed == single.passed
        assert bulk.modulus == single.modulus
        assert bulk.lhs.value == single.lhs.value
        assert bulk.rhs.value == single.rhs.value


def test_shared_cache_is_consistent():
    cache: dict = {}
    ids = [s.id for s in list_checks()]
    for p in (7, 13):
        for cid in ids:
            for m in (None, 1, 3, -16):
                try:
                    with_cache = run_check(cid, CheckParams(p=p, m=m, n=4), cache)
                    fresh = run_check(cid, CheckParams(p=p, m=m, n=4))
                except (DomainError, BudgetExceeded, CheckError):
                    continue
                assert with_cache.lhs.value == fresh.lhs.value, (cid, p, m)
                assert with_cache.rhs.value == fresh.rhs.value, (cid, p, m)
