"""Hyers' direct method over Q_p.

The approximants ``c_n = f(k**n x) / k**(d n)`` (ascending) or
``c_n = k**(d n) f(x / k**n)`` (descending) are iterated until the
ultrametric Cauchy criterion certifies a limit, and the resulting mapping is
checked against the stability and uniqueness bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .control import ControlFunction, evaluate_control, window_max
from .equations import EquationFamily, PolynomialFunction, defect
from .padic_core import Magnitude, PAdicScalar, PrimeContext, norm

__all__ = [
    "DIRECTIONS",
    "IterationConfig",
    "IterationTrace",
    "DefectBoundReport",
    "StabilityReport",
    "OracleNotApplicable",
    "approximant",
    "iterate_to_limit",
    "closed_form_oracle",
    "stability_prefactor",
    "verify_defect_bound",
    "verify_stability_bound",
    "verify_intermediate_bound",
    "uniqueness_probe",
]

DIRECTIONS = ("ascending", "descending")


class OracleNotApplicable(ValueError):
    """The closed-form limit needs ``|k| < 1``."""


@dataclass(frozen=True)
class IterationConfig:
    """``confirm`` consecutive forward differences must be small before a
    limit is accepted; a lone zero difference can be an accidental
    cancellation between monomials."""

    direction: str = "ascending"
    n_max: int = 60
    target_valuation: int = 30
    confirm: int = 3

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if isinstance(self.n_max, bool) or not isinstance(self.n_max, int) or self.n_max < 1:
            raise ValueError("n_max must be a positive integer")
        if isinstance(self.target_valuation, bool) or not isinstance(self.target_valuation, int):
            raise ValueError("target_valuation must be an integer")
        if isinstance(self.confirm, bool) or not isinstance(self.confirm, int) or self.confirm < 1:
            raise ValueError("confirm must be a positive integer")


@dataclass(frozen=True)
class IterationTrace:
    """Approximants ``c_0 .. c_n`` and the forward differences of ``c_1 .. c_n``.

    ``residuals[j]`` is ``|c_(j+2) - c_(j+1)|``, the Cauchy certificate of
    the (j+1)-th approximant, so ``len(residuals) == n_used``.  When the run
    converged, ``confirmations`` holds the further differences that backed
    the last one up.
    """

    approximants: list[PAdicScalar]
    residuals: list[Magnitude]
    converged: bool
    n_used: int
    confirmations: list[Magnitude] = field(default_factory=list)

    def residual_valuations(self, p: int) -> list[int | None]:
        return [None if r == 0 else -r.log_p(p) for r in self.residuals]


@dataclass(frozen=True)
class DefectBoundReport:
    holds: bool
    max_defect: Magnitude
    worst_ratio: Fraction | None  # None when some defect is nonzero and its bound is 0
    violations: list[tuple[Fraction, Fraction]] = field(default_factory=list)
    n_samples: int = 0


@dataclass(frozen=True)
class StabilityReport:
    x: PAdicScalar
    limit: PAdicScalar
    bound: Magnitude
    deviation: Magnitude
    slack: Fraction | None  # None marks deviation == 0
    defect_of_limit_max: Magnitude | None
    direction: str = "ascending"

    @property
    def holds(self) -> bool:
        return self.deviation <= self.bound


def _k_scalar(k: int, ctx: PrimeContext) -> PAdicScalar:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return PAdicScalar(k, ctx)


def approximant(f: PolynomialFunction, x, k: int, d: int, n: int,
                direction: str = "ascending") -> PAdicScalar:
    """The n-th rescaled dilate of ``f`` at ``x``; ``n = 0`` gives ``f(x)``."""
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = PAdicScalar(x, f.ctx)
    kn = _k_scalar(k, f.ctx) ** n
    if direction == "ascending":
        return f(kn * x) / kn**d
    return kn**d * f(x / kn)


def iterate_to_limit(f: PolynomialFunction, x, k: int, d: int,
                     config: IterationConfig = IterationConfig()):
    """Iterate approximants until the Cauchy criterion certifies a limit.

    ``c_n`` (``n >= 1``) is certified by its forward difference
    ``|c_(n+1) - c_n|``.  In an ultrametric space the distance from ``c_n`` to
    the limit is the largest of the later differences.  ``c_n`` is accepted
    once its difference and the next ``confirm - 1`` ones are all at most
    ``p**-target_valuation``.  Running out of steps is reported, not raised.

    Returns ``(limit, trace)``.
    """
    ctx = f.ctx
    target = ctx.power(-config.target_valuation)
    approx = [approximant(f, x, k, d, 0, config.direction),
              approximant(f, x, k, d, 1, config.direction)]
    residuals = []
    run = 0
    for m in range(1, config.n_max + config.confirm):
        approx.append(approximant(f, x, k, d, m + 1, config.direction))
        residuals.append(norm(approx[m + 1] - approx[m]))
        run = run + 1 if residuals[-1] <= target else 0
        if run == config.confirm:
            n = m - config.confirm + 1
            trace = IterationTrace(approx[:n + 1], residuals[:n], True, n, residuals[n:])
            return approx[n], trace
        if m >= config.n_max and run == 0:
            break
    n = config.n_max
    return approx[n], IterationTrace(approx[:n + 1], residuals[:n], False, n)


def closed_form_oracle(f: PolynomialFunction, k: int, d: int,
                       direction: str = "ascending") -> PolynomialFunction | None:
    """Exact limit of the approximants for polynomial ``f``, or None if it diverges.

    The monomial ``a_m x**m`` is rescaled by ``k**((m-d) n)`` (ascending) or
    ``k**((d-m) n)`` (descending).  With ``|k| < 1`` it survives iff ``m == d``,
    vanishes iff the exponent of ``k`` is positive, and diverges otherwise.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if norm(_k_scalar(k, f.ctx)) >= 1:
        raise OracleNotApplicable(f"|{k}|_{f.ctx.p} = 1; the oracle needs p | k")
    for m in f.degrees:
        if m == d:
            continue
        if (m > d) != (direction == "ascending"):
            return None
    return PolynomialFunction({d: f.coeffs[d]} if d in f.coeffs else {}, f.ctx)


def stability_prefactor(k: int, d: int, ctx: PrimeContext, direction: str = "ascending") -> Magnitude:
    """``1/|2 k**d|`` ascending; ``1/|2|`` for the derived descending bound."""
    if direction == "ascending":
        return Magnitude(1) / norm(PAdicScalar(2 * k**d, ctx))
    return Magnitude(1) / norm(PAdicScalar(2, ctx))


def verify_defect_bound(f: PolynomialFunction, phi: ControlFunction, family: EquationFamily,
                        samples: Iterable[tuple]) -> DefectBoundReport:
    """Check ``|defect(x, y)| <= phi(x, y)`` exactly at every sample pair."""
    samples = list(samples)
    if not samples:
        raise ValueError("at least one sample pair is required")
    if family.kind == "quartic" and f.constant_term != 0:
        raise ValueError("the quartic stability statement requires f(0) = 0")
    max_defect = Magnitude(0)
    worst: Fraction | None = Fraction(0)
    violations = []
    for x, y in samples:
        size = norm(defect(f, family, x, y))
        bound = evaluate_control(phi, x, y)
        if size > max_defect:
            max_defect = size
        if size > bound:
            violations.append((Fraction(x), Fraction(y)))
        if bound == 0:
            if size != 0:
                worst = None
        elif worst is not None:
            worst = max(worst, size.value / bound.value)
    return DefectBoundReport(not violations, max_defect, worst, violations, len(samples))


def _slack(bound: Magnitude, deviation: Magnitude) -> Fraction | None:
    return None if deviation == 0 else bound.value / deviation.value


def verify_stability_bound(f: PolynomialFunction, limit: Callable, phi: ControlFunction, x,
                           k: int, d: int, n_tilde: int = 10, direction: str = "ascending",
                           probes: Sequence[tuple] = (), limit_value=None) -> StabilityReport:
    """Compare ``|C(x) - f(x)|`` with the stability bound at one point.

    ``limit`` is the candidate mapping; ``limit_value`` overrides ``limit(x)``
    (e.g. with an iterated value).  The defect of ``limit`` is taken over
    ``probes`` when given.
    """
    ctx = f.ctx
    x = PAdicScalar(x, ctx)
    c_x = PAdicScalar(limit(x) if limit_value is None else limit_value, ctx)
    deviation = norm(c_x - f(x))
    bound = stability_prefactor(k, d, ctx, direction) * window_max(phi, x, k, d, 0, n_tilde, direction)
    defect_max = None
    if probes:
        family = EquationFamily("cubic" if d == 3 else "quartic", k)
        defect_max = max(norm(defect(limit, family, PAdicScalar(a, ctx), PAdicScalar(b, ctx)))
                         for a, b in probes)
    return StabilityReport(x, c_x, bound, deviation, _slack(bound, deviation), defect_max, direction)


def verify_intermediate_bound(f: PolynomialFunction, phi: ControlFunction, x, k: int, d: int,
                              n: int, direction: str = "ascending") -> bool:
    """Finite-``n`` bound ``|c_n - f(x)| <= prefactor * max of the first n one-step terms``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = PAdicScalar(x, f.ctx)
    lhs = norm(approximant(f, x, k, d, n, direction) - f(x))
    rhs = stability_prefactor(k, d, f.ctx, direction) * window_max(phi, x, k, d, 0, n, direction)
    return lhs <= rhs


def uniqueness_probe(c1: Callable, c2: Callable, k: int, d: int, i_max: int,
                     probes: Iterable, ctx: PrimeContext, direction: str = "ascending") -> Magnitude:
    """Max over probes of the rescaled distance between two candidate limits at depth ``i_max``.

    Ascending: ``|k|**(-d i) |C1(k^i x) - C2(k^i x)|``; descending uses
    ``|k|**(d i) |C1(x/k^i) - C2(x/k^i)|``.
    """
    ak = norm(_k_scalar(k, ctx))
    ki = PAdicScalar(k, ctx) ** i_max
    worst = Magnitude(0)
    for x in probes:
        x = PAdicScalar(x, ctx)
        if direction == "ascending":
            dist = norm(c1(ki * x) - c2(ki * x)) / ak ** (d * i_max)
        else:
            dist = norm(c1(x / ki) - c2(x / ki)) * ak ** (d * i_max)
        if dist > worst:
            worst = dist
    return worst
