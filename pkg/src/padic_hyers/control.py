"""Control functions bounding the defect, and the stability hypotheses on them.

Two regimes are supported.  *Ascending* refers to the dilates ``k**n x``
used for the limit ``f(k**n x) / k**(d n)``; *descending* refers to
``x / k**n`` for the limit ``k**(d n) f(x / k**n)``.  The descending
conditions are the mirror images of the ascending ones (rescale by
``|k|**(d j)`` instead of dividing by it) and are derived, not quoted.

Power-form and constant controls are decided analytically.  Table controls
are sampled, and every failure carries a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .padic_core import Magnitude, PAdicScalar, PrimeContext, norm

__all__ = [
    "ControlFunction",
    "HypothesisReport",
    "evaluate_control",
    "vanishing_condition",
    "phi_tilde",
    "phi_tilde_condition",
    "corollary_conditions",
    "uniqueness_tail_condition",
    "window_max",
    "DEFAULT_STABILIZATION_WINDOW",
]

DEFAULT_STABILIZATION_WINDOW = 5

_DIRECTIONS = ("ascending", "descending")


@dataclass(frozen=True)
class ControlFunction:
    """Upper bound ``phi(x, y)`` for the defect.

    ``form`` is one of:

    * ``"power"``: ``delta * (|x|**r + |y|**r)``
    * ``"constant"``: ``delta`` everywhere
    * ``"table"``: explicit values keyed by ``(Fraction(x), Fraction(y))``
    """

    form: str
    ctx: PrimeContext
    delta: Fraction = Fraction(1)
    r: int | None = None
    table: Mapping[tuple[Fraction, Fraction], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.form == "power":
            if isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1:
                raise ValueError(f"power control needs a positive integer r, got {self.r!r}")
        elif self.form == "table":
            table = {
                (Fraction(x), Fraction(y)): Magnitude(v).value for (x, y), v in self.table.items()
            }
            object.__setattr__(self, "table", table)
        elif self.form != "constant":
            raise ValueError(f"unknown control form {self.form!r}")

    @classmethod
    def power(cls, delta, r: int, ctx: PrimeContext) -> "ControlFunction":
        return cls("power", ctx, delta=delta, r=r)

    @classmethod
    def constant(cls, delta, ctx: PrimeContext) -> "ControlFunction":
        return cls("constant", ctx, delta=delta)

    @classmethod
    def from_table(cls, table: Mapping, ctx: PrimeContext) -> "ControlFunction":
        return cls("table", ctx, table=table)

    @property
    def is_zero(self) -> bool:
        if self.form == "table":
            return all(v == 0 for v in self.table.values())
        return self.delta == 0

    def __call__(self, x, y) -> Magnitude:
        return evaluate_control(self, x, y)


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of one hypothesis check.

    ``witness`` is set only for sampled checks that fail.
    """

    condition_id: str
    holds: bool
    analytic: bool
    witness: dict | None = None
    detail: str = ""

    def __post_init__(self):
        if self.witness is not None and (self.holds or self.analytic):
            raise ValueError("a witness is only attached to failed sampled checks")


def evaluate_control(phi: ControlFunction, x, y) -> Magnitude:
    x = PAdicScalar(x, phi.ctx)
    y = PAdicScalar(y, phi.ctx)
    if phi.form == "power":
        return Magnitude(phi.delta) * (norm(x) ** phi.r + norm(y) ** phi.r)
    if phi.form == "constant":
        return Magnitude(phi.delta)
    try:
        return Magnitude(phi.table[(x.value, y.value)])
    except KeyError:
        raise KeyError(f"control table has no entry for ({x.value}, {y.value})") from None


def _check_direction(direction: str):
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")


def _abs_k(k: int, ctx: PrimeContext) -> Magnitude:
    return norm(PAdicScalar(k, ctx))


def _scaled_term(phi: ControlFunction, x, y, k: int, d: int, j: int, direction: str) -> Magnitude:
    """``phi(k^j x, k^j y) / |k|^(dj)`` or its descending mirror."""
    ctx = phi.ctx
    x = PAdicScalar(x, ctx)
    y = PAdicScalar(y, ctx)
    ak = _abs_k(k, ctx)
    kj = PAdicScalar(k, ctx) ** j
    if direction == "ascending":
        return evaluate_control(phi, x * kj, y * kj) / ak ** (d * j)
    return evaluate_control(phi, x / kj, y / kj) * ak ** (d * j)


def _descending_term(phi, x, k, d, j):
    # the descending one-step bound involves phi(x / k^(j+1), 0) rescaled by |k|^(dj)
    ctx = phi.ctx
    x = PAdicScalar(x, ctx)
    kj1 = PAdicScalar(k, ctx) ** (j + 1)
    return evaluate_control(phi, x / kj1, 0) * _abs_k(k, ctx) ** (d * j)


def window_max(phi: ControlFunction, x, k: int, d: int, start: int, stop: int,
               direction: str = "ascending") -> Magnitude:
    """Largest rescaled one-step control value over ``start <= j < stop``."""
    _check_direction(direction)
    best = Magnitude(0)
    for j in range(start, stop):
        if direction == "ascending":
            term = _scaled_term(phi, x, 0, k, d, j, direction)
        else:
            term = _descending_term(phi, x, k, d, j)
        if term > best:
            best = term
    return best


def phi_tilde(phi: ControlFunction, x, k: int, d: int, n: int,
              direction: str = "ascending") -> Magnitude:
    """Running max of the rescaled one-step control over ``0 <= j < n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return window_max(phi, x, k, d, 0, n, direction)


def _power_regime(phi: ControlFunction, k: int, d: int, direction: str):
    """(|k| < 1, exponent comparison) for analytic decisions."""
    contracting = _abs_k(k, phi.ctx) < 1
    r = phi.r if phi.form == "power" else 0
    if direction == "ascending":
        return contracting, r > d
    return contracting, r < d


def _analytic_vanishing(phi, k, d, direction) -> tuple[bool, str]:
    if phi.is_zero:
        return True, "zero control"
    contracting, exponent_ok = _power_regime(phi, k, d, direction)
    holds = contracting and exponent_ok
    if phi.form == "constant":
        detail = f"constant control, |k|{'<' if contracting else '='}1"
    else:
        sign = "r>d" if direction == "ascending" else "r<d"
        detail = f"|k|{'<' if contracting else '='}1, {sign} is {exponent_ok}"
    return holds, detail


def vanishing_condition(phi: ControlFunction, k: int, d: int, samples: Iterable[tuple] = (),
                        n_max: int = 10, direction: str = "ascending") -> HypothesisReport:
    """Does the rescaled control ``phi(k^n x, k^n y) / |k|^(dn)`` tend to 0?

    For table controls the sequence must be nonincreasing at every sample
    and end strictly below where it started (or at zero).
    """
    _check_direction(direction)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if phi.form != "table":
        holds, detail = _analytic_vanishing(phi, k, d, direction)
        return HypothesisReport("vanishing", holds, True, detail=detail)
    samples = list(samples)
    if not samples:
        raise ValueError("sampled vanishing check needs sample pairs")
    for x, y in samples:
        seq = [_scaled_term(phi, x, y, k, d, n, direction) for n in range(n_max + 1)]
        for n in range(1, len(seq)):
            if seq[n] > seq[n - 1]:
                return HypothesisReport("vanishing", False, False,
                                        witness={"x": Fraction(x), "y": Fraction(y), "n": n},
                                        detail="rescaled control increased")
        if seq[-1] != 0 and not seq[-1] < seq[0]:
            return HypothesisReport("vanishing", False, False,
                                    witness={"x": Fraction(x), "y": Fraction(y), "n": n_max},
                                    detail="rescaled control does not decrease")
    return HypothesisReport("vanishing", True, False, detail="sampled trend decreasing")


def phi_tilde_condition(phi: ControlFunction, k: int, d: int, samples: Iterable = (),
                        n_max: int = 50, direction: str = "ascending",
                        window: int = DEFAULT_STABILIZATION_WINDOW) -> HypothesisReport:
    """Does the running max defining ``phi_tilde`` converge?

    Power/constant: the one-step terms form a geometric sequence in ``j``
    with ratio ``|k|**(r-d)`` (ascending) or ``|k|**(d-r)`` (descending), so
    the max is bounded iff that ratio is at most 1.  Tables: sampled, the
    max has to stay unchanged for ``window`` consecutive ``j``.
    """
    _check_direction(direction)
    if phi.form != "table":
        if phi.is_zero:
            return HypothesisReport("phi_tilde_exists", True, True, detail="zero control")
        contracting = _abs_k(k, phi.ctx) < 1
        r = phi.r if phi.form == "power" else 0
        growth = (d - r) if direction == "ascending" else (r - d)
        holds = not contracting or growth <= 0
        return HypothesisReport("phi_tilde_exists", holds, True,
                                detail="running max bounded" if holds else "running max grows")
    for x in samples:
        best = Magnitude(0)
        unchanged = 0
        for j in range(n_max):
            if direction == "ascending":
                term = _scaled_term(phi, x, 0, k, d, j, direction)
            else:
                term = _descending_term(phi, x, k, d, j)
            if term > best:
                best = term
                unchanged = 0
            else:
                unchanged += 1
            if unchanged >= window:
                break
        else:
            return HypothesisReport("phi_tilde_exists", False, False,
                                    witness={"x": Fraction(x), "n": n_max},
                                    detail="running max did not stabilise")
    return HypothesisReport("phi_tilde_exists", True, False, detail="running max stabilised")


def uniqueness_tail_condition(phi: ControlFunction, x, k: int, d: int, i_max: int = 10,
                              n_max: int = 10, direction: str = "ascending") -> HypothesisReport:
    """Do the window maxima over ``[i, i + n)`` tend to zero as ``i`` grows?"""
    _check_direction(direction)
    if i_max < 1 or n_max < 1:
        raise ValueError("i_max and n_max must be at least 1")
    if phi.form != "table":
        # window max is the j = i term once the terms decrease geometrically
        holds, detail = _analytic_vanishing(phi, k, d, direction)
        return HypothesisReport("uniqueness_tail", holds, True, detail=detail)
    tails = [window_max(phi, x, k, d, i, i + n_max, direction) for i in range(i_max + 1)]
    for i in range(1, len(tails)):
        if tails[i] > tails[i - 1]:
            return HypothesisReport("uniqueness_tail", False, False,
                                    witness={"x": Fraction(x), "i": i},
                                    detail="window max increased")
    if tails[-1] != 0 and not tails[-1] < tails[0]:
        return HypothesisReport("uniqueness_tail", False, False,
                                witness={"x": Fraction(x), "i": i_max},
                                detail="window max does not decrease")
    return HypothesisReport("uniqueness_tail", True, False, detail="sampled tail decreasing")


def _default_t_grid(p: int) -> list[Fraction]:
    return [Fraction(0)] + [Fraction(p) ** e for e in range(-4, 5)] + [Fraction(1, 3), Fraction(7, 2)]


def corollary_conditions(alpha: int | Callable[[Fraction], Fraction], k: int, d: int,
                         ctx: PrimeContext, direction: str = "ascending",
                         grid: Iterable[Fraction] | None = None
                         ) -> tuple[HypothesisReport, HypothesisReport]:
    """Check the two conditions on ``alpha`` that feed the corollaries.

    ``alpha`` is either an integer exponent ``r`` (``alpha(t) = t**r``) or
    any callable on nonnegative rationals.  Ascending:

    (i)  ``alpha(|k| t) <= alpha(|k|) alpha(t)`` on the grid,
    (ii) ``alpha(|k|) < |k|**d``.

    Descending (derived mirror): ``alpha(|k|) alpha(t / |k|) <= alpha(t)`` and
    ``alpha(|k|) > |k|**d``.  Condition (i) with ``|k| = 1`` degenerates and
    is only checked where ``|k|`` is invertible.
    """
    _check_direction(direction)
    if isinstance(alpha, int) and not isinstance(alpha, bool):
        r = alpha
        fn = lambda t: Fraction(t) ** r  # noqa: E731
        analytic = True
    else:
        fn = alpha
        analytic = False
    ak = _abs_k(k, ctx).value
    grid = list(grid) if grid is not None else _default_t_grid(ctx.p)

    cond_i = HypothesisReport("corollary_i", True, analytic,
                              detail="equality for power alpha" if analytic else "sampled")
    for t in grid:
        t = Fraction(t)
        if direction == "ascending":
            ok = fn(ak * t) <= fn(ak) * fn(t)
        else:
            ok = fn(ak) * fn(t / ak) <= fn(t)
        if not ok:
            witness = None if analytic else {"t": t}
            cond_i = HypothesisReport("corollary_i", False, analytic, witness=witness,
                                      detail=f"fails at t={t}")
            break

    ak_d = ak**d
    if direction == "ascending":
        ok_ii = fn(ak) < ak_d
        rel = "<"
    else:
        ok_ii = fn(ak) > ak_d
        rel = ">"
    cond_ii = HypothesisReport("corollary_ii", ok_ii, True,
                               detail=f"alpha(|k|)={fn(ak)} {rel} |k|^{d}={ak_d} is {ok_ii}")
    return cond_i, cond_ii
