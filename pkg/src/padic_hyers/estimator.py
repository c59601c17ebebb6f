"""Estimator-style front end for the direct method.

``fit`` takes the approximate function ``f``; ``predict`` returns the
repaired values ``C(x)`` at new points.  Hyperparameters follow the
scikit-learn conventions, so ``get_params``/``set_params``/``clone`` work.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .control import ControlFunction
from .direct_method import (
    IterationConfig,
    OracleNotApplicable,
    closed_form_oracle,
    iterate_to_limit,
    verify_stability_bound,
)
from .equations import EquationFamily
from .validation import (
    check_context,
    check_direction,
    check_equation,
    check_k,
    check_points,
    check_polynomial,
)

__all__ = ["DirectMethodRepair"]


class DirectMethodRepair(BaseEstimator):
    """Repair an approximately cubic/quartic polynomial into an exact solution.

    Parameters
    ----------
    prime : int
        Prime of the p-adic norm.
    k : int
        Parameter of the functional equation and dilation factor.
    equation : {"cubic", "quartic"}
    direction : {"ascending", "descending"}
        Dilation ``k**n x`` or contraction ``x / k**n``.
    n_max : int
        Iteration budget per point.
    target_valuation : int
        Stop once consecutive approximants agree to ``p**-target_valuation``.

    Attributes
    ----------
    function_ : PolynomialFunction
    family_ : EquationFamily
    oracle_ : PolynomialFunction or None
        Closed-form limit when ``p | k`` and it exists, else None.
    """

    def __init__(self, prime=2, k=2, equation="cubic", direction="ascending", n_max=60,
                 target_valuation=30):
        self.prime = prime
        self.k = k
        self.equation = equation
        self.direction = direction
        self.n_max = n_max
        self.target_valuation = target_valuation

    def _config(self) -> IterationConfig:
        return IterationConfig(check_direction(self.direction), int(self.n_max),
                               int(self.target_valuation))

    def fit(self, f, y=None):
        ctx = check_context(self.prime)
        self.ctx_ = ctx
        self.family_ = EquationFamily(check_equation(self.equation), check_k(self.k))
        self.config_ = self._config()
        self.function_ = check_polynomial(f, ctx)
        if self.family_.kind == "quartic" and self.function_.constant_term != 0:
            raise ValueError("the quartic repair requires f(0) = 0")
        try:
            self.oracle_ = closed_form_oracle(self.function_, self.family_.k,
                                              self.family_.degree, self.direction)
        except OracleNotApplicable:
            self.oracle_ = None
        return self

    def iterate(self, X):
        """Per-point ``(limit, trace)`` pairs, in input order."""
        check_is_fitted(self)
        points = check_points(X, self.ctx_)
        return [iterate_to_limit(self.function_, x, self.family_.k, self.family_.degree,
                                 self.config_) for x in points]

    def predict(self, X):
        """Iterated limit values ``C(x)``; raises if any point fails to converge."""
        results = self.iterate(X)
        for (_, trace), x in zip(results, X):
            if not trace.converged:
                raise ArithmeticError(f"approximants at x={x} did not converge "
                                      f"within n_max={self.config_.n_max}")
        return [limit for limit, _ in results]

    def stability_report(self, X, control: ControlFunction, n_tilde=10, probes=()):
        """StabilityReport per point, comparing iterated limits to ``f``."""
        check_is_fitted(self)
        reports = []
        limit_map = self.oracle_ if self.oracle_ is not None else self.function_
        for x, (value, _) in zip(check_points(X, self.ctx_), self.iterate(X)):
            reports.append(verify_stability_bound(
                self.function_, limit_map, control, x, self.family_.k, self.family_.degree,
                n_tilde=n_tilde, direction=self.direction,
                probes=probes if self.oracle_ is not None else (), limit_value=value))
        return reports
