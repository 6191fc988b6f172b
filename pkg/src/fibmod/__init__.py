"""Exact congruence checks for Fibonacci and central binomial sums modulo
prime powers, plus a desk-scale Wall-Sun-Sun prime scanner."""

from ._version import __version__
from .binomsums import (
    SumSpec,
    WeightDomain,
    WeightKind,
    alternating_harmonic,
    central_binomial_stream,
    evaluate_sum,
    exact_identity_41,
    exact_lagrange,
    power_over_square_sum,
    signed_central_sum,
)
from .checks import (
    BudgetExceeded,
    CheckError,
    CheckKind,
    CheckParams,
    CheckSpec,
    UnknownCheckId,
    Verdict,
    list_checks,
    mbar,
    run_check,
    run_conj11n_range,
)
from .modarith import (
    BadDenominator,
    LucasParams,
    Modulus,
    NegativeValuation,
    NotInvertible,
    PadicFactored,
    ResidueClass,
    ZeroInput,
    inv_mod,
    jacobi,
    padic_div,
    padic_mul,
    padic_normalize,
    pow_mod,
)
from .scanner import (
    AllSmall,
    CheckpointCorrupt,
    MList,
    Report,
    Sample,
    ScanRequest,
    WssRecord,
    render_csv,
    render_jsonl,
    scan,
    sieve_primes,
    wss_search,
)
from .sequences import (
    DomainError,
    LucasPair,
    NotDivisible,
    entry_index,
    fermat_quotient,
    fibonacci_quotient,
    lucas_uv_mod,
)

__all__ = [
    "__version__",
    "AllSmall",
    "BadDenominator",
    "BudgetExceeded",
    "CheckError",
    "CheckKind",
    "CheckParams",
    "CheckSpec",
    "CheckpointCorrupt",
    "DomainError",
    "LucasPair",
    "LucasParams",
    "MList",
    "Modulus",
    "NegativeValuation",
    "NotDivisible",
    "NotInvertible",
    "PadicFactored",
    "Report",
    "ResidueClass",
    "Sample",
    "ScanRequest",
    "SumSpec",
    "UnknownCheckId",
    "Verdict",
    "WeightDomain",
    "WeightKind",
    "WssRecord",
    "ZeroInput",
    "alternating_harmonic",
    "central_binomial_stream",
    "entry_index",
    "evaluate_sum",
    "exact_identity_41",
    "exact_lagrange",
    "fermat_quotient",
    "fibonacci_quotient",
    "inv_mod",
    "jacobi",
    "list_checks",
    "lucas_uv_mod",
    "mbar",
    "padic_div",
    "padic_mul",
    "padic_normalize",
    "pow_mod",
    "power_over_square_sum",
    "render_csv",
    "render_jsonl",
    "run_check",
    "run_conj11n_range",
    "scan",
    "sieve_primes",
    "signed_central_sum",
    "wss_search",
]
