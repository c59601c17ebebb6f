"""Exact arithmetic on the rationals viewed inside Q_p.

Every value is an exact :class:`fractions.Fraction` tagged with a prime
context.  Valuations, norms and Hensel digit expansions are derived from the
reduced numerator and denominator, so no truncation ever takes place.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "ContextMismatchError",
    "PrimeContext",
    "Valuation",
    "Magnitude",
    "PAdicScalar",
    "is_prime",
    "valuation",
    "norm",
    "digit_expansion",
    "mag_max",
    "mag_add",
    "mag_mul",
    "mag_pow",
    "mag_le",
]

Rational = Union[int, Fraction]


class ContextMismatchError(ValueError):
    """Raised when values living over different primes are combined."""


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {type(value).__name__!r} as an exact rational")


def _count_factor(n: int, p: int) -> int:
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


@dataclass(frozen=True)
class PrimeContext:
    """The prime ``p`` fixing which valuation is used."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError("prime must be an integer")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, value) -> "PAdicScalar":
        """Shorthand: ``ctx(3)`` builds the scalar 3 over this prime."""
        return PAdicScalar(value, self)

    def power(self, exponent: int) -> Magnitude:
        """The magnitude ``p**exponent`` (exponent may be negative)."""
        return Magnitude(Fraction(self.p) ** exponent)


@functools.total_ordering
@dataclass(frozen=True)
class Valuation:
    """An integer valuation, or +infinity for zero (``value is None``)."""

    value: int | None

    @classmethod
    def infinite(cls) -> "Valuation":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __int__(self):
        if self.value is None:
            raise ValueError("the valuation of zero is +infinity")
        return self.value

    def _key(self, other):
        if isinstance(other, Valuation):
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return NotImplemented

    def __eq__(self, other):
        o = self._key(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o

    def __lt__(self, other):
        o = self._key(other)
        if o is NotImplemented:
            return NotImplemented
        if self.value is None:
            return False
        if o is None:
            return True
        return self.value < o

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return "+inf" if self.value is None else str(self.value)

    def __repr__(self):
        return f"Valuation({self})"


@functools.total_ordering
@dataclass(frozen=True)
class Magnitude:
    """Exact nonnegative real bound, stored as a rational."""

    value: Fraction

    def __init__(self, value=0):
        value = _as_fraction(value.value if isinstance(value, Magnitude) else value)
        if value < 0:
            raise ValueError(f"magnitude must be nonnegative, got {value}")
        object.__setattr__(self, "value", value)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Magnitude):
            return other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other)
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value < o

    def __hash__(self):
        return hash(self.value)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Magnitude(self.value + o)

    __radd__ = __add__

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Magnitude(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Magnitude(self.value / o)

    def __pow__(self, exponent: int):
        return Magnitude(self.value**exponent)

    def __bool__(self):
        return self.value != 0

    def log_p(self, p: int) -> int | None:
        """Return ``e`` when this magnitude equals ``p**e`` exactly, else None."""
        v = self.value
        if v == 0:
            return None
        num_e = _count_factor(v.numerator, p)
        den_e = _count_factor(v.denominator, p)
        if v.numerator != p**num_e or v.denominator != p**den_e:
            return None
        return num_e - den_e

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Magnitude({self.value})"


class PAdicScalar:
    """An exact rational interpreted in Q_p.

    Arithmetic with plain ints and Fractions is allowed; the other operand is
    lifted into the same prime context.  Mixing two different primes raises
    :class:`ContextMismatchError`.
    """

    __slots__ = ("value", "ctx")

    def __init__(self, value, ctx: PrimeContext):
        if isinstance(value, PAdicScalar):
            if value.ctx != ctx:
                raise ContextMismatchError(f"p={value.ctx.p} vs p={ctx.p}")
            value = value.value
        object.__setattr__(self, "value", _as_fraction(value))
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("PAdicScalar is immutable")

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    def _lift(self, other) -> Fraction:
        if isinstance(other, PAdicScalar):
            if other.ctx != self.ctx:
                raise ContextMismatchError(f"p={self.ctx.p} vs p={other.ctx.p}")
            return other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other)
        return NotImplemented

    def _wrap(self, value: Fraction) -> "PAdicScalar":
        return PAdicScalar(value, self.ctx)

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by the zero scalar")
        return self._wrap(self.value / o)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.value == 0:
            raise ZeroDivisionError("division by the zero scalar")
        return self._wrap(o / self.value)

    def __pow__(self, exponent: int):
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            raise TypeError("only integer exponents are supported")
        if exponent < 0 and self.value == 0:
            raise ZeroDivisionError("zero raised to a negative power")
        return self._wrap(self.value**exponent)

    def __neg__(self):
        return self._wrap(-self.value)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, PAdicScalar):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def valuation(self) -> Valuation:
        return valuation(self)

    def norm(self) -> Magnitude:
        return norm(self)

    def __repr__(self):
        return f"PAdicScalar({self.value}, p={self.ctx.p})"

    def __str__(self):
        return str(self.value)


def valuation(x: PAdicScalar) -> Valuation:
    """The exponent ``n`` with ``x = (a/b) p**n`` and ``a``, ``b`` prime to p."""
    if x.value == 0:
        return Valuation.infinite()
    p = x.ctx.p
    # reduced form: p divides at most one of num, den
    return Valuation(_count_factor(abs(x.num), p) - _count_factor(x.den, p))


def norm(x: PAdicScalar) -> Magnitude:
    """p-adic absolute value ``p**(-valuation(x))``; zero for zero."""
    v = valuation(x)
    if v.is_infinite:
        return Magnitude(0)
    return x.ctx.power(-v.value)


def digit_expansion(x: PAdicScalar, count: int) -> tuple[Valuation, list[int]]:
    """First ``count`` Hensel digits of ``x``.

    Returns ``(start, digits)`` with ``x = sum(d * p**(start + i))`` up to an
    error of valuation at least ``start + count``.
    """
    if x.value == 0:
        raise ValueError("zero has no canonical digit expansion")
    if count < 1:
        raise ValueError("count must be positive")
    p = x.ctx.p
    start = valuation(x)
    unit = x.value / Fraction(p) ** start.value
    modulus = p**count
    residue = unit.numerator * pow(unit.denominator, -1, modulus) % modulus
    digits = []
    for _ in range(count):
        residue, d = divmod(residue, p)
        digits.append(d)
    return start, digits


def mag_max(a: Magnitude, b: Magnitude) -> Magnitude:
    return a if a >= b else b


def mag_add(a: Magnitude, b: Magnitude) -> Magnitude:
    return a + b


def mag_mul(a: Magnitude, b: Magnitude) -> Magnitude:
    return a * b


def mag_pow(a: Magnitude, exponent: int) -> Magnitude:
    if exponent < 1:
        raise ValueError("magnitude exponent must be a positive integer")
    return a**exponent


def mag_le(a: Magnitude, b: Magnitude) -> bool:
    return a.value <= b.value
