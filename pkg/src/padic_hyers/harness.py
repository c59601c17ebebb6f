"""End-to-end verification runs and deterministic report emission."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .control import (
    ControlFunction,
    HypothesisReport,
    corollary_conditions,
    phi_tilde_condition,
    uniqueness_tail_condition,
    vanishing_condition,
)
from .direct_method import (
    IterationConfig,
    OracleNotApplicable,
    closed_form_oracle,
    iterate_to_limit,
    uniqueness_probe,
    verify_defect_bound,
    verify_intermediate_bound,
    verify_stability_bound,
)
from .equations import EquationFamily
from .padic_core import Magnitude, PAdicScalar, PrimeContext, norm
from .parser import PolynomialSyntaxError, parse_polynomial, render_polynomial

__all__ = [
    "ConfigError",
    "PipelineError",
    "ExperimentConfig",
    "ReportDocument",
    "default_grid",
    "parse_grid",
    "run_experiment",
    "emit_report",
    "VERDICTS",
]

VERDICTS = ("theorem-verified", "hypothesis-failed", "diverged")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class PipelineError(RuntimeError):
    def __init__(self, stage: str, error: Exception):
        super().__init__(f"stage {stage!r} failed: {error}")
        self.stage = stage


def default_grid(p: int, units=(1, 3, 5), valuations=range(-2, 3),
                 include_zero: bool = True) -> list[Fraction]:
    """``{u * p**v}`` plus 0, in a fixed order."""
    pts = [Fraction(0)] if include_zero else []
    for v in valuations:
        for u in units:
            pts.append(Fraction(u) * Fraction(p) ** v)
    return pts


_GRID_RE = re.compile(
    r"^\s*p\^\s*(-?\d+)\s*\.\.\s*p\^\s*(-?\d+)\s*[x×*]\s*([-\d/ ,]+?)\s*(\+\s*0)?\s*$")


def parse_grid(spec, p: int, field_name: str = "samples") -> list[Fraction]:
    """Grid from a list of rationals, a ``{"units", "valuations"}`` object, or
    the shorthand ``"p^a..p^b x u1,u2,..."`` (append ``+ 0`` to include zero)."""
    try:
        if spec is None:
            return default_grid(p)
        if isinstance(spec, str):
            m = _GRID_RE.match(spec)
            if not m:
                raise ValueError(f"unrecognised grid shorthand {spec!r}")
            lo, hi = int(m.group(1)), int(m.group(2))
            units = [Fraction(u.strip()) for u in m.group(3).split(",") if u.strip()]
            return default_grid(p, units, range(lo, hi + 1), include_zero=bool(m.group(4)))
        if isinstance(spec, Mapping):
            units = [Fraction(str(u)) for u in spec.get("units", ["1", "3", "5"])]
            lo, hi = (int(v) for v in spec.get("valuations", ["-2", "2"]))
            return default_grid(p, units, range(lo, hi + 1),
                                include_zero=bool(spec.get("include_zero", True)))
        return [Fraction(str(v)) for v in spec]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(field_name, str(exc)) from None


def _int_field(raw: Mapping, name: str, default: int | None = None, minimum: int | None = None) -> int:
    value = raw.get(name, default)
    if value is None:
        raise ConfigError(name, "missing")
    try:
        if isinstance(value, bool):
            raise ValueError
        out = int(str(value).strip())
    except ValueError:
        raise ConfigError(name, f"not an integer: {value!r}") from None
    if minimum is not None and out < minimum:
        raise ConfigError(name, f"must be >= {minimum}")
    return out


def _frac_field(value, name: str) -> Fraction:
    try:
        if isinstance(value, (bool, float)):
            raise ValueError("floats are not exact")
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(name, f"not an exact rational: {value!r} ({exc})") from None


@dataclass(frozen=True)
class ExperimentConfig:
    prime: int
    k: int
    equation: str
    direction: str
    function: str
    control_form: str = "power"
    delta: Fraction = Fraction(1)
    r: int | None = 4
    samples: tuple[Fraction, ...] = ()
    probes: tuple[Fraction, ...] = ()
    probe_grid: tuple[Fraction, ...] = ()
    n_max: int = 60
    target_valuation: int = 30
    n_tilde: int = 10
    intermediate_n: int = 10
    i_max: int = 10

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "ExperimentConfig":
        """Build and validate a config; numbers may be given as strings."""
        prime = _int_field(raw, "prime", 2)
        try:
            ctx = PrimeContext(prime)
        except ValueError as exc:
            raise ConfigError("prime", str(exc)) from None
        k = _int_field(raw, "k", 2, minimum=1)
        equation = raw.get("equation", "cubic")
        if equation not in ("cubic", "quartic"):
            raise ConfigError("equation", f"must be cubic or quartic, got {equation!r}")
        direction = raw.get("direction", "ascending")
        if direction not in ("ascending", "descending"):
            raise ConfigError("direction", f"must be ascending or descending, got {direction!r}")
        function = raw.get("function")
        if not isinstance(function, str):
            raise ConfigError("function", "a polynomial expression string is required")
        try:
            poly = parse_polynomial(function, ctx)
        except PolynomialSyntaxError as exc:
            raise ConfigError("function", str(exc)) from None
        if equation == "quartic" and poly.constant_term != 0:
            raise ConfigError("function", "quartic experiments require f(0) = 0")

        control = raw.get("control", {}) or {}
        if not isinstance(control, Mapping):
            raise ConfigError("control", "must be an object")
        form = control.get("form", "power")
        if form not in ("power", "constant"):
            raise ConfigError("control.form", f"must be power or constant, got {form!r}")
        delta = _frac_field(control.get("delta", "1"), "control.delta")
        if delta < 0:
            raise ConfigError("control.delta", "must be nonnegative")
        r = _int_field(control, "r", 4, minimum=1) if form == "power" else None

        samples = parse_grid(raw.get("samples"), prime, "samples")
        probes = parse_grid(raw["probes"], prime, "probes") if "probes" in raw else list(samples)
        probe_grid = parse_grid(raw.get("probe_grid", "p^-1..p^1 x 1 + 0"), prime, "probe_grid")
        return cls(
            prime=prime, k=k, equation=equation, direction=direction,
            function=render_polynomial(poly), control_form=form, delta=delta, r=r,
            samples=tuple(samples), probes=tuple(probes), probe_grid=tuple(probe_grid),
            n_max=_int_field(raw, "n_max", 60, minimum=1),
            target_valuation=_int_field(raw, "target_valuation", 30),
            n_tilde=_int_field(raw, "n_tilde", 10, minimum=1),
            intermediate_n=_int_field(raw, "intermediate_n", 10, minimum=0),
            i_max=_int_field(raw, "i_max", 10, minimum=1),
        )

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(raw, Mapping):
            raise ConfigError("config", "top level must be an object")
        return cls.from_mapping(raw)

    def echo(self) -> dict:
        control = {"form": self.control_form, "delta": _rational(self.delta)}
        if self.r is not None:
            control["r"] = str(self.r)
        return {
            "prime": str(self.prime), "k": str(self.k), "equation": self.equation,
            "direction": self.direction, "function": self.function, "control": control,
            "samples": [_rational(s) for s in self.samples],
            "probes": [_rational(s) for s in self.probes],
            "probe_grid": [_rational(s) for s in self.probe_grid],
            "n_max": str(self.n_max), "target_valuation": str(self.target_valuation),
            "n_tilde": str(self.n_tilde), "intermediate_n": str(self.intermediate_n),
            "i_max": str(self.i_max),
        }


@dataclass
class ProbeResult:
    x: Fraction
    converged: bool
    n_used: int
    limit: Fraction
    residual_valuations: list
    oracle_agrees: bool | None
    deviation: Magnitude
    bound: Magnitude
    slack: Fraction | None
    bound_holds: bool
    intermediate_holds: bool | None
    defect_of_limit_max: Magnitude | None

    @property
    def ok(self) -> bool:
        return (self.converged and self.bound_holds and self.oracle_agrees is not False
                and self.intermediate_holds is not False
                and (self.defect_of_limit_max is None or self.defect_of_limit_max == 0))


@dataclass
class ReportDocument:
    config: ExperimentConfig
    hypotheses: list[HypothesisReport]
    defect_bound: Any
    probes: list[ProbeResult]
    uniqueness: Magnitude | None
    verdict: str
    failed_checks: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        db = self.defect_bound
        return {
            "config": self.config.echo(),
            "hypotheses": [_hypothesis_dict(h) for h in self.hypotheses],
            "defect_bound": {
                "holds": db.holds,
                "max_defect": _rational(db.max_defect),
                "worst_ratio": None if db.worst_ratio is None else _rational(db.worst_ratio),
                "samples": db.n_samples,
                "violations": [[_rational(a), _rational(b)] for a, b in db.violations],
            },
            "probes": [_probe_dict(pr) for pr in self.probes],
            "uniqueness_probe": None if self.uniqueness is None else _rational(self.uniqueness),
            "failed_checks": list(self.failed_checks),
            "verdict": self.verdict,
        }


def _rational(q) -> dict:
    if isinstance(q, Magnitude):
        q = q.value
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _hypothesis_dict(h: HypothesisReport) -> dict:
    witness = None
    if h.witness is not None:
        witness = {key: (_rational(v) if isinstance(v, Fraction) else v)
                   for key, v in h.witness.items()}
    return {"condition": h.condition_id, "holds": h.holds, "analytic": h.analytic,
            "detail": h.detail, "witness": witness}


def _probe_dict(pr: ProbeResult) -> dict:
    return {
        "x": _rational(pr.x),
        "converged": pr.converged,
        "n_used": pr.n_used,
        "limit": _rational(pr.limit),
        "residual_valuations": pr.residual_valuations,
        "oracle_agrees": pr.oracle_agrees,
        "deviation": _rational(pr.deviation),
        "bound": _rational(pr.bound),
        "slack": "inf" if pr.slack is None else _rational(pr.slack),
        "bound_holds": pr.bound_holds,
        "intermediate_holds": pr.intermediate_holds,
        "defect_of_limit_max": (None if pr.defect_of_limit_max is None
                                else _rational(pr.defect_of_limit_max)),
        "ok": pr.ok,
    }


def _control(cfg: ExperimentConfig, ctx: PrimeContext) -> ControlFunction:
    if cfg.control_form == "constant":
        return ControlFunction.constant(cfg.delta, ctx)
    return ControlFunction.power(cfg.delta, cfg.r, ctx)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, ArithmeticError, KeyError, TypeError) as exc:
        raise PipelineError(name, exc) from exc


def run_experiment(cfg: ExperimentConfig) -> ReportDocument:
    """Hypotheses, defect bound, per-probe iteration and bounds, uniqueness, verdict.

    Verdict precedence: a failed control hypothesis gives
    ``hypothesis-failed``; otherwise a probe that did not converge gives
    ``diverged``; otherwise any other failed check gives ``hypothesis-failed``.
    """
    ctx = PrimeContext(cfg.prime)
    family = _stage("config", EquationFamily, cfg.equation, cfg.k)
    d = family.degree
    f = _stage("parse", parse_polynomial, cfg.function, ctx)
    phi = _stage("control", _control, cfg, ctx)
    pairs = [(a, b) for a in cfg.samples for b in cfg.samples]

    hypotheses = [
        _stage("hypotheses", vanishing_condition, phi, cfg.k, d, pairs, 10, cfg.direction),
        _stage("hypotheses", phi_tilde_condition, phi, cfg.k, d, cfg.samples,
               direction=cfg.direction),
        _stage("hypotheses", uniqueness_tail_condition, phi, 1, cfg.k, d,
               direction=cfg.direction),
    ]
    if phi.form == "power":
        hypotheses.extend(_stage("hypotheses", corollary_conditions, phi.r, cfg.k, d, ctx,
                                 cfg.direction))

    if pairs:
        defect_report = _stage("defect_bound", verify_defect_bound, f, phi, family, pairs)
    else:
        defect_report = None

    try:
        oracle = closed_form_oracle(f, cfg.k, d, cfg.direction)
    except OracleNotApplicable:
        oracle = None
    iter_cfg = IterationConfig(cfg.direction, cfg.n_max, cfg.target_valuation)
    target = ctx.power(-cfg.target_valuation)
    probe_pairs = [(a, b) for a in cfg.probe_grid for b in cfg.probe_grid]

    probes = []
    for x in cfg.probes:
        limit, trace = _stage("iteration", iterate_to_limit, f, x, cfg.k, d, iter_cfg)
        agrees = None
        if oracle is not None:
            agrees = norm(limit - oracle(x)) <= target
        limit_map = oracle if oracle is not None else f
        report = _stage("stability", verify_stability_bound, f, limit_map, phi, x, cfg.k, d,
                        cfg.n_tilde, cfg.direction,
                        probe_pairs if oracle is not None else (), limit)
        intermediate = None
        if cfg.intermediate_n >= 1:
            intermediate = all(
                _stage("intermediate", verify_intermediate_bound, f, phi, x, cfg.k, d, n,
                       cfg.direction)
                for n in range(1, cfg.intermediate_n + 1))
        probes.append(ProbeResult(
            x=Fraction(x), converged=trace.converged, n_used=trace.n_used, limit=limit.value,
            residual_valuations=trace.residual_valuations(cfg.prime), oracle_agrees=agrees,
            deviation=report.deviation, bound=report.bound, slack=report.slack,
            bound_holds=report.holds, intermediate_holds=intermediate,
            defect_of_limit_max=report.defect_of_limit_max))

    uniqueness = None
    try:
        asc = closed_form_oracle(f, cfg.k, d, "ascending")
        desc = closed_form_oracle(f, cfg.k, d, "descending")
    except OracleNotApplicable:
        asc = desc = None
    if asc is not None and desc is not None and cfg.probes:
        uniqueness = uniqueness_probe(asc, desc, cfg.k, d, cfg.i_max, cfg.probes, ctx)

    failed = [h.condition_id for h in hypotheses if not h.holds]
    if failed:
        verdict = "hypothesis-failed"
    elif any(not pr.converged for pr in probes):
        verdict = "diverged"
        failed.append("convergence")
    else:
        if defect_report is not None and not defect_report.holds:
            failed.append("defect_bound")
        for pr in probes:
            if not pr.ok:
                failed.append(f"probe x={pr.x}")
        if uniqueness is not None and uniqueness != 0:
            failed.append("uniqueness_probe")
        verdict = "hypothesis-failed" if failed else "theorem-verified"
    if defect_report is not None and not defect_report.holds and "defect_bound" not in failed:
        failed.append("defect_bound")
    if defect_report is None:
        defect_report = _EmptyDefect()
    return ReportDocument(cfg, hypotheses, defect_report, probes, uniqueness, verdict, failed)


@dataclass(frozen=True)
class _EmptyDefect:
    holds: bool = True
    max_defect: Magnitude = Magnitude(0)
    worst_ratio: Fraction | None = Fraction(0)
    violations: tuple = ()
    n_samples: int = 0


def _power_text(m: Magnitude, p: int) -> str:
    if m == 0:
        return "0"
    e = m.log_p(p)
    return f"{p}^{e}" if e is not None else str(m.value)


def _text_report(doc: ReportDocument) -> str:
    cfg = doc.config
    p = cfg.prime
    lines = [
        f"f(x) = {cfg.function}",
        f"p={p}  k={cfg.k}  equation={cfg.equation}  direction={cfg.direction}",
    ]
    if cfg.control_form == "power":
        lines.append(f"control: {cfg.delta}*(|x|^{cfg.r} + |y|^{cfg.r})")
    else:
        lines.append(f"control: constant {cfg.delta}")
    lines.append("")
    lines.append("hypotheses:")
    for h in doc.hypotheses:
        lines.append(f"  {h.condition_id:<18}{'holds' if h.holds else 'FAILS'}  {h.detail}")
    db = doc.defect_bound
    lines.append(f"defect bound: {'holds' if db.holds else 'VIOLATED'} on {db.n_samples} pairs, "
                 f"max |defect| = {_power_text(db.max_defect, p)}")
    lines.append("")
    for pr in doc.probes:
        if not pr.converged:
            status = "DIVERGED"
        else:
            status = "OK" if pr.ok else "FAIL"
        lines.append(f"x={pr.x}  dev={_power_text(pr.deviation, p)}  "
                     f"bound={_power_text(pr.bound, p)}  {status}")
    if doc.uniqueness is not None:
        lines.append(f"uniqueness probe: {_power_text(doc.uniqueness, p)}")
    lines.append("")
    lines.append(f"verdict: {doc.verdict}")
    return "\n".join(lines) + "\n"


def emit_report(doc: ReportDocument, fmt: str = "json") -> bytes:
    """Serialise a report; identical documents give identical bytes."""
    if fmt == "json":
        return (json.dumps(doc.to_dict(), sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "text":
        return _text_report(doc).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")
