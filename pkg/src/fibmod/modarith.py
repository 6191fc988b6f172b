"""Residue arithmetic modulo odd prime powers.

Everything in this module is exact integer arithmetic: canonical residues
in [0, p^e), Jacobi symbols, and a factored representation p^v * u that
keeps division by p (and by multiples of p) exact.  All values are
immutable after construction and all operations are pure, so they can be
shared freely across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class ModArithError(Exception):
    """Base class for arithmetic errors raised by this package."""


class NotInvertible(ModArithError):
    """No inverse exists modulo p^e (the prime divides the operand)."""


class BadDenominator(ModArithError):
    """Jacobi symbol requested with an even or nonpositive denominator."""


class ZeroInput(ModArithError):
    """Zero passed where a nonzero integer is required."""


class NegativeValuation(ModArithError):
    """Exact division would drop the p-valuation below zero.

    This always signals a broken integrality assumption in the caller:
    every quantity divided in this package is an integer by construction.
    """


# Any product of two canonical residues must fit a double-width machine
# word; Python ints never overflow, so the bound is purely contractual.
MODULUS_BOUND = 1 << 62

# Deterministic Miller-Rabin witness set, exact for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    """Deterministic primality test for machine-scale integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        if b % n == 0:
            continue
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Modulus:
    """An odd prime power p^e, the ambient ring of all residue arithmetic.

    The exponent is unbounded as long as p^e stays below 2^62; exponents
    above 6 only occur in the 3-adic conjecture checks.
    """

    __slots__ = ("p", "e", "m")

    def __init__(self, p: int, e: int) -> None:
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise ValueError(f"modulus base must be an odd prime, got {p}")
        if e < 1:
            raise ValueError(f"modulus exponent must be >= 1, got {e}")
        m = p**e
        if m >= MODULUS_BOUND:
            raise ValueError(f"p^e = {m} exceeds the 2^62 modulus bound")
        self.p = p
        self.e = e
        self.m = m

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Modulus) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    def __repr__(self) -> str:
        return f"Modulus({self.p}^{self.e})"

    def residue(self, value: int) -> "ResidueClass":
        return ResidueClass(self, value)


class ResidueClass:
    """A canonical residue in [0, m) under a fixed odd prime power m.

    Arithmetic is closed: sums, products and negations of residues under
    one modulus are again canonical.  Mixed operations with plain ints
    reduce the int first.
    """

    __slots__ = ("modulus", "value")

    def __init__(self, modulus: Modulus, value: int) -> None:
        self.modulus = modulus
        self.value = value % modulus.m

    def _coerce(self, other: "ResidueClass | int") -> int:
        if isinstance(other, ResidueClass):
            if other.modulus != self.modulus:
                raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other.value
        return other % self.modulus.m

    def __add__(self, other: "ResidueClass | int") -> "ResidueClass":
        return ResidueClass(self.modulus, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: "ResidueClass | int") -> "ResidueClass":
        return ResidueClass(self.modulus, self.value - self._coerce(other))

    def __rsub__(self, other: int) -> "ResidueClass":
        return ResidueClass(self.modulus, other - self.value)

    def __mul__(self, other: "ResidueClass | int") -> "ResidueClass":
        return ResidueClass(self.modulus, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "ResidueClass":
        return ResidueClass(self.modulus, -self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ResidueClass):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus.m
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.modulus, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.p}^{self.modulus.e})"


@dataclass(frozen=True)
class LucasParams:
    """Parameters (A, B) of the Lucas recurrence x_{n+1} = A*x_n - B*x_{n-1}."""

    A: int
    B: int

    @property
    def delta(self) -> int:
        # Recomputed on demand so it can never go stale.
        return self.A * self.A - 4 * self.B


class PadicFactored:
    """An integer written as p^v * u with the unit u known modulo p^e.

    The unit precision is pinned to the target modulus for the whole
    computation; multiplication and exact division are then loss-free,
    and additions only ever happen after ``to_residue``.
    """

    __slots__ = ("modulus", "valuation", "unit")

    def __init__(self, modulus: Modulus, valuation: int, unit: int) -> None:
        if valuation < 0:
            raise NegativeValuation(f"valuation must be >= 0, got {valuation}")
        u = unit % modulus.m
        if u % modulus.p == 0:
            raise ValueError(f"unit {unit} is divisible by p = {modulus.p}")
        self.modulus = modulus
        self.valuation = valuation
        self.unit = u

    def __mul__(self, other: "PadicFactored") -> "PadicFactored":
        if other.modulus != self.modulus:
            raise ValueError("modulus mismatch in p-adic multiplication")
        return PadicFactored(
            self.modulus,
            self.valuation + other.valuation,
            self.unit * other.unit % self.modulus.m,
        )

    def __truediv__(self, other: "PadicFactored") -> "PadicFactored":
        if other.modulus != self.modulus:
            raise ValueError("modulus mismatch in p-adic division")
        if self.valuation < other.valuation:
            raise NegativeValuation(
                f"cannot divide p^{self.valuation}-valued term by p^{other.valuation}"
            )
        inv_u = pow(other.unit, -1, self.modulus.m)
        return PadicFactored(
            self.modulus,
            self.valuation - other.valuation,
            self.unit * inv_u % self.modulus.m,
        )

    def to_residue(self) -> ResidueClass:
        md = self.modulus
        if self.valuation >= md.e:
            return ResidueClass(md, 0)
        return ResidueClass(md, self.unit * md.p**self.valuation)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicFactored):
            return NotImplemented
        return (self.modulus, self.valuation, self.unit) == (
            other.modulus,
            other.valuation,
            other.unit,
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.valuation, self.unit))

    def __repr__(self) -> str:
        return f"{self.modulus.p}^{self.valuation} * {self.unit} (mod {self.modulus.p}^{self.modulus.e})"


def pow_mod(base: int, exp: int, modulus: Modulus) -> ResidueClass:
    """base^exp mod p^e by square-and-multiply; exp = 0 yields 1."""
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return ResidueClass(modulus, pow(base % modulus.m, exp, modulus.m))


def inv_mod(x: int, modulus: Modulus) -> ResidueClass:
    """The inverse of x modulo p^e, by extended Euclid."""
    if x % modulus.p == 0:
        raise NotInvertible(f"{x} is divisible by p = {modulus.p}")
    return ResidueClass(modulus, pow(x % modulus.m, -1, modulus.m))


def jacobi(n: int, d: int) -> int:
    """The Jacobi symbol (n/d) for odd d >= 1.

    jacobi(n, 1) = 1 by the empty-product convention, and the result is 0
    exactly when gcd(n, d) > 1.  Negative numerators are fine: the symbol
    depends only on n mod d.
    """
    if d <= 0 or d % 2 == 0:
        raise BadDenominator(f"denominator must be odd and positive, got {d}")
    n %= d
    result = 1
    while n:
        while n % 2 == 0:
            n //= 2
            if d % 8 in (3, 5):
                result = -result
        n, d = d, n
        if n % 4 == 3 and d % 4 == 3:
            result = -result
        n %= d
    return result if d == 1 else 0


def padic_normalize(n: int, modulus: Modulus) -> PadicFactored:
    """Split a nonzero integer into p^v times a unit known mod p^e."""
    if n == 0:
        raise ZeroInput("cannot factor zero")
    p = modulus.p
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return PadicFactored(modulus, v, n % modulus.m)


def padic_mul(a: PadicFactored, b: PadicFactored) -> PadicFactored:
    return a * b


def padic_div(a: PadicFactored, b: PadicFactored) -> PadicFactored:
    return a / b
