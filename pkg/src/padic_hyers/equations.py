"""Polynomial test functions and the cubic/quartic difference operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .padic_core import ContextMismatchError, PAdicScalar, PrimeContext

__all__ = [
    "PolynomialFunction",
    "EquationFamily",
    "evaluate",
    "cubic_defect",
    "quartic_defect",
    "jun_kim_defect",
    "park_bae_defect",
    "defect",
    "is_exact_solution",
]

ScalarMap = Callable[[PAdicScalar], PAdicScalar]


class PolynomialFunction:
    """``x -> sum(c_m * x**m)`` with exact rational coefficients.

    Zero coefficients are dropped on construction, so two polynomials are
    equal exactly when their coefficient maps are.
    """

    __slots__ = ("coeffs", "ctx")

    def __init__(self, coeffs: Mapping[int, object], ctx: PrimeContext):
        clean = {}
        for degree, c in coeffs.items():
            if isinstance(degree, bool) or not isinstance(degree, int) or degree < 0:
                raise ValueError(f"invalid degree {degree!r}")
            c = Fraction(c)
            if c:
                clean[degree] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("PolynomialFunction is immutable")

    @classmethod
    def monomial(cls, degree: int, ctx: PrimeContext, coeff=1) -> "PolynomialFunction":
        return cls({degree: coeff}, ctx)

    @property
    def degrees(self) -> list[int]:
        return list(self.coeffs)

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get(0, Fraction(0))

    def __call__(self, x) -> PAdicScalar:
        return evaluate(self, x)

    def __add__(self, other: "PolynomialFunction") -> "PolynomialFunction":
        if not isinstance(other, PolynomialFunction):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatchError(f"p={self.ctx.p} vs p={other.ctx.p}")
        merged = dict(self.coeffs)
        for d, c in other.coeffs.items():
            merged[d] = merged.get(d, 0) + c
        return PolynomialFunction(merged, self.ctx)

    def __neg__(self):
        return PolynomialFunction({d: -c for d, c in self.coeffs.items()}, self.ctx)

    def __sub__(self, other):
        if not isinstance(other, PolynomialFunction):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "PolynomialFunction":
        factor = Fraction(factor)
        return PolynomialFunction({d: c * factor for d, c in self.coeffs.items()}, self.ctx)

    def __eq__(self, other):
        if not isinstance(other, PolynomialFunction):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"PolynomialFunction({self.coeffs!r}, p={self.ctx.p})"


@dataclass(frozen=True)
class EquationFamily:
    """Which functional equation is targeted, and its parameter ``k``."""

    kind: str
    k: int

    def __post_init__(self):
        if self.kind not in ("cubic", "quartic"):
            raise ValueError(f"equation kind must be 'cubic' or 'quartic', got {self.kind!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @property
    def degree(self) -> int:
        return 3 if self.kind == "cubic" else 4


def evaluate(f: PolynomialFunction, x) -> PAdicScalar:
    """Horner evaluation of ``f`` at ``x``."""
    if isinstance(x, PAdicScalar):
        if x.ctx != f.ctx:
            raise ContextMismatchError(f"polynomial over p={f.ctx.p}, point over p={x.ctx.p}")
        xv = x.value
    else:
        xv = Fraction(x)
    if not f.coeffs:
        return PAdicScalar(0, f.ctx)
    acc = Fraction(0)
    for degree in range(max(f.coeffs), -1, -1):
        acc = acc * xv + f.coeffs.get(degree, 0)
    return PAdicScalar(acc, f.ctx)


def _point(f: ScalarMap, x, y, ctx: PrimeContext | None = None):
    ctx = ctx or getattr(f, "ctx", None) or getattr(x, "ctx", None)
    return PAdicScalar(x, ctx), PAdicScalar(y, ctx)


def cubic_defect(f: ScalarMap, x, y, k: int) -> PAdicScalar:
    """``f(kx+y) + f(kx-y) - k[f(x+y) + f(x-y)] - 2(k^3-k) f(x)``."""
    x, y = _point(f, x, y)
    return f(k * x + y) + f(k * x - y) - k * (f(x + y) + f(x - y)) - 2 * (k**3 - k) * f(x)


def quartic_defect(f: ScalarMap, x, y, k: int) -> PAdicScalar:
    """LHS minus RHS of the k-parametrised quartic equation."""
    x, y = _point(f, x, y)
    k2 = k * k
    return (
        f(k * x + y)
        + f(k * x - y)
        - k2 * (f(x + y) + f(x - y))
        - 2 * k2 * (k2 - 1) * f(x)
        + 2 * (k2 - 1) * f(y)
    )


def jun_kim_defect(f: ScalarMap, x, y) -> PAdicScalar:
    x, y = _point(f, x, y)
    return f(2 * x + y) + f(2 * x - y) - 2 * f(x + y) - 2 * f(x - y) - 12 * f(x)


def park_bae_defect(f: ScalarMap, x, y) -> PAdicScalar:
    # for even f this is quartic_defect(f, y, x, 2)
    x, y = _point(f, x, y)
    return f(x + 2 * y) + f(x - 2 * y) - 4 * (f(x + y) + f(x - y)) - 24 * f(y) + 6 * f(x)


def defect(f: ScalarMap, family: EquationFamily, x, y) -> PAdicScalar:
    if family.kind == "cubic":
        return cubic_defect(f, x, y, family.k)
    return quartic_defect(f, x, y, family.k)


def is_exact_solution(f: ScalarMap, family: EquationFamily, samples: Iterable[tuple]) -> bool:
    """True iff the defect vanishes exactly at every sample pair."""
    samples = list(samples)
    if not samples:
        raise ValueError("at least one sample pair is required")
    return all(defect(f, family, x, y) == 0 for x, y in samples)
