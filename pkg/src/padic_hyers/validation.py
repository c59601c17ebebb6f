"""Input coercion helpers shared by the estimator and the harness."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .equations import PolynomialFunction
from .padic_core import ContextMismatchError, PAdicScalar, PrimeContext

__all__ = ["check_context", "check_points", "check_pairs", "check_polynomial", "check_k",
           "check_direction", "check_equation"]


def check_context(prime) -> PrimeContext:
    if isinstance(prime, PrimeContext):
        return prime
    return PrimeContext(int(prime))


def check_points(X: Iterable, ctx: PrimeContext) -> list[PAdicScalar]:
    """Coerce ints, Fractions, strings and scalars to scalars over ``ctx``."""
    if isinstance(X, (str, bytes)):
        raise TypeError("expected an iterable of points, got a string")
    return [PAdicScalar(x, ctx) for x in X]


def check_pairs(pairs: Iterable, ctx: PrimeContext) -> list[tuple[PAdicScalar, PAdicScalar]]:
    out = []
    for pair in pairs:
        x, y = pair
        out.append((PAdicScalar(x, ctx), PAdicScalar(y, ctx)))
    return out


def check_polynomial(f, ctx: PrimeContext) -> PolynomialFunction:
    """Accept a polynomial, expression text, or a ``{degree: coeff}`` map."""
    if isinstance(f, PolynomialFunction):
        if f.ctx != ctx:
            raise ContextMismatchError(f"polynomial over p={f.ctx.p}, expected p={ctx.p}")
        return f
    if isinstance(f, str):
        from .parser import parse_polynomial

        return parse_polynomial(f, ctx)
    if isinstance(f, dict):
        return PolynomialFunction({int(d): Fraction(c) for d, c in f.items()}, ctx)
    raise TypeError(f"cannot interpret {type(f).__name__!r} as a polynomial")


def check_k(k) -> int:
    if isinstance(k, bool) or int(k) != k or int(k) < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return int(k)


def check_direction(direction: str) -> str:
    if direction not in ("ascending", "descending"):
        raise ValueError(f"direction must be 'ascending' or 'descending', got {direction!r}")
    return direction


def check_equation(kind: str) -> str:
    if kind not in ("cubic", "quartic"):
        raise ValueError(f"equation must be 'cubic' or 'quartic', got {kind!r}")
    return kind
