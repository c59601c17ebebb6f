"""Command line: ``padic-hyers verify --config run.json [overrides]``.

Exit codes: 0 theorem verified, 1 hypothesis failed or diverged,
2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import ConfigError, ExperimentConfig, PipelineError, emit_report, run_experiment

_OVERRIDES = {
    "prime": "prime",
    "k": "k",
    "equation": "equation",
    "direction": "direction",
    "function": "function",
    "n_max": "n_max",
    "target_valuation": "target_valuation",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-hyers")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run the stability verification pipeline")
    verify.add_argument("--config", help="JSON experiment config")
    verify.add_argument("--prime")
    verify.add_argument("--k")
    verify.add_argument("--equation", choices=["cubic", "quartic"])
    verify.add_argument("--direction", choices=["ascending", "descending"])
    verify.add_argument("--function", help='polynomial in x, e.g. "x^3 + x^4"')
    verify.add_argument("--control", choices=["power", "constant"], help="control form")
    verify.add_argument("--delta")
    verify.add_argument("--r")
    verify.add_argument("--n-max", dest="n_max")
    verify.add_argument("--target-valuation", dest="target_valuation")
    verify.add_argument("--format", choices=["json", "text"], default="json")
    verify.add_argument("--output", "-o", help="write the report here instead of stdout")
    return parser


def _load(args) -> ExperimentConfig:
    raw = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config", "top level must be an object")
    for attr, key in _OVERRIDES.items():
        value = getattr(args, attr)
        if value is not None:
            raw[key] = value
    control = dict(raw.get("control") or {})
    if args.control is not None:
        control["form"] = args.control
    if args.delta is not None:
        control["delta"] = args.delta
    if args.r is not None:
        control["r"] = args.r
    raw["control"] = control
    return ExperimentConfig.from_mapping(raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        doc = run_experiment(cfg)
    except (ConfigError, PipelineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = emit_report(doc, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(out)
    else:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    return 0 if doc.verdict == "theorem-verified" else 1


if __name__ == "__main__":
    sys.exit(main())
