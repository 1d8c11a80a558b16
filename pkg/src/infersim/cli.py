"""Command-line harness for the experiment families.

Subcommands: ``sweep-sla``, ``sweep-cv``, ``compare-policies``,
``replay-trace``, and ``models validate``. Run parameters come from an
optional YAML config file, with command-line flags taking precedence.

Exit codes: 0 on success, 2 for configuration or validation problems, 3 for
I/O failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any

import yaml

from .errors import ValidationError
from .experiments import (
    ExperimentKind,
    ExperimentSpec,
    ResultRow,
    default_cloud_models,
    emit_csv,
    emit_records_csv,
    records_path_for,
    run_experiment,
)
from .models import ModelProfile, ModelSet, load_models
from .network import gaussian_network
from .policy import PolicyKind
from .simulator import DEFAULT_ON_DEVICE

_CONFIG_KEYS = {
    "sla_ms",
    "sla_list_ms",
    "cv_list",
    "n_requests",
    "seed",
    "policy",
    "policies",
    "duplication",
    "network",
    "trace_path",
    "models_path",
    "on_device",
    "out",
}
_NETWORK_KEYS = {"kind", "mean_ms", "std_ms"}
_ON_DEVICE_KEYS = {"name", "accuracy_pct", "mean_ms", "std_ms"}

_DEFAULT_POLICIES = {
    ExperimentKind.SLA_SWEEP: (PolicyKind.ADAPTIVE, PolicyKind.STATIC_GREEDY),
    ExperimentKind.CV_SWEEP: (PolicyKind.ADAPTIVE,),
    ExperimentKind.POLICY_COMPARE: (
        PolicyKind.ADAPTIVE,
        PolicyKind.PURE_RANDOM,
        PolicyKind.RELATED_RANDOM,
        PolicyKind.RELATED_ACCURATE,
    ),
    ExperimentKind.TRACE_REPLAY: (
        PolicyKind.STATIC_LATENCY,
        PolicyKind.STATIC_ACCURACY,
        PolicyKind.PURE_RANDOM,
        PolicyKind.ADAPTIVE,
    ),
}


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(raw) or {}
    except yaml.YAMLError as exc:
        raise ValidationError(f"config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"config {path}: top level must be a mapping")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ValidationError(f"config {path}: unknown keys {sorted(unknown)}")
    return data


def _parse_policies(config: dict[str, Any]) -> tuple[PolicyKind, ...] | None:
    names = config.get("policies")
    if names is None and "policy" in config:
        names = [config["policy"]]
    if names is None:
        return None
    try:
        return tuple(PolicyKind(str(n)) for n in names)
    except ValueError as exc:
        valid = ", ".join(k.value for k in PolicyKind)
        raise ValidationError(f"{exc}; valid policies: {valid}") from None


def _parse_on_device(config: dict[str, Any]) -> ModelProfile:
    section = config.get("on_device")
    if section is None:
        return DEFAULT_ON_DEVICE
    if not isinstance(section, dict) or set(section) - _ON_DEVICE_KEYS:
        raise ValidationError(f"on_device section accepts keys {sorted(_ON_DEVICE_KEYS)}")
    return ModelProfile(
        name=str(section.get("name", DEFAULT_ON_DEVICE.name)),
        accuracy=float(section.get("accuracy_pct", DEFAULT_ON_DEVICE.accuracy * 100.0)) / 100.0,
        exec_mean_ms=float(section.get("mean_ms", DEFAULT_ON_DEVICE.exec_mean_ms)),
        exec_std_ms=float(section.get("std_ms", DEFAULT_ON_DEVICE.exec_std_ms)),
    )


def _parse_network(config: dict[str, Any]):
    section = config.get("network")
    if section is None:
        return gaussian_network(100.0, 50.0)
    if not isinstance(section, dict) or set(section) - _NETWORK_KEYS:
        raise ValidationError(f"network section accepts keys {sorted(_NETWORK_KEYS)}")
    kind = str(section.get("kind", "gaussian"))
    if kind != "gaussian":
        raise ValidationError(
            f"network.kind {kind!r} not supported here; traces go through replay-trace"
        )
    return gaussian_network(
        float(section.get("mean_ms", 100.0)), float(section.get("std_ms", 50.0))
    )


def _parse_float_list(value: Any, name: str) -> tuple[float, ...]:
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
    elif isinstance(value, (list, tuple)):
        parts = value
    else:
        raise ValidationError(f"{name} must be a list")
    try:
        return tuple(float(p) for p in parts)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must contain numbers") from None


def _resolve_models(config: dict[str, Any], kind: ExperimentKind) -> ModelSet:
    path = config.get("models_path")
    if path is not None:
        return load_models(path)
    return default_cloud_models(include_fictional=kind is ExperimentKind.POLICY_COMPARE)


def _build_spec(kind: ExperimentKind, args: argparse.Namespace) -> ExperimentSpec:
    config = _load_config(args.config)
    policies = _parse_policies(config) or _DEFAULT_POLICIES[kind]
    models = _resolve_models(config, kind)

    sla_list: tuple[float, ...] = ()
    cv_list: tuple[float, ...] = ()
    if kind in (ExperimentKind.SLA_SWEEP, ExperimentKind.POLICY_COMPARE):
        if getattr(args, "sla_list", None):
            sla_list = _parse_float_list(args.sla_list, "sla_list")
        elif "sla_list_ms" in config:
            sla_list = _parse_float_list(config["sla_list_ms"], "sla_list_ms")
        else:
            sla_list = tuple(float(v) for v in range(30, 301, 10))
    if kind is ExperimentKind.CV_SWEEP:
        if getattr(args, "cv_list", None):
            cv_list = _parse_float_list(args.cv_list, "cv_list")
        elif "cv_list" in config:
            cv_list = _parse_float_list(config["cv_list"], "cv_list")
        else:
            cv_list = tuple(round(0.1 * i, 1) for i in range(11))
        if "sla_list_ms" in config:
            sla_list = _parse_float_list(config["sla_list_ms"], "sla_list_ms")
        else:
            sla_list = (100.0, 250.0)

    trace_path = getattr(args, "trace", None) or config.get("trace_path")
    duplication = bool(config.get("duplication", kind is ExperimentKind.TRACE_REPLAY))
    sla_ms = float(
        getattr(args, "sla", None) or config.get("sla_ms") or 250.0
    )
    out = args.out or config.get("out")
    network = _parse_network(config)

    spec = ExperimentSpec(
        kind=kind,
        models=models,
        policies=policies,
        network=network,
        sla_list_ms=sla_list,
        cv_list=cv_list,
        sla_ms=sla_ms,
        network_mean_ms=network.mean_ms,
        n_requests=int(args.n or config.get("n_requests", 10_000)),
        seed=int(args.seed if args.seed is not None else config.get("seed", 0)),
        duplication=duplication,
        on_device=_parse_on_device(config),
        trace_path=Path(trace_path) if trace_path else None,
        out=Path(out) if out else None,
        dump_records=bool(args.dump_records),
    )
    spec.validate()
    return spec


def _print_rows(rows: list[ResultRow]) -> None:
    print(f"{'experiment':<22}{'sweep':>8}  {'policy':<18}{'accuracy':>9}{'attain':>8}{'reliance':>9}")
    for row in sorted(rows, key=lambda r: (r.experiment, r.sweep_value, r.policy)):
        s = row.summary
        print(
            f"{row.experiment:<22}{row.sweep_value:>8g}  {row.policy:<18}"
            f"{s.aggregate_accuracy:>9.4f}{s.sla_attainment:>8.4f}{s.on_device_reliance:>9.4f}"
        )


def _run_command(kind: ExperimentKind, args: argparse.Namespace) -> int:
    spec = _build_spec(kind, args)
    result = run_experiment(spec)
    if spec.out is not None:
        emit_csv(result.rows, spec.out)
        print(f"wrote {spec.out}")
        if spec.dump_records:
            rec_path = records_path_for(spec.out)
            emit_records_csv(result.records, rec_path)
            print(f"wrote {rec_path}")
    _print_rows(result.rows)
    return 0


def _models_validate(args: argparse.Namespace) -> int:
    models = load_models(args.path)
    fastest = models.fastest()
    accurate = models.most_accurate()
    print(
        f"OK: {len(models)} models; fastest={fastest.name!r} "
        f"({fastest.exec_mean_ms:g} ms); most_accurate={accurate.name!r} "
        f"({accurate.accuracy * 100:g}%)"
    )
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="YAML config file")
    parser.add_argument("--seed", type=int, default=None, help="random seed (u64)")
    parser.add_argument("--out", metavar="PATH", help="write results CSV here")
    parser.add_argument("--n", type=int, default=None, help="requests per grid point")
    parser.add_argument(
        "--dump-records", action="store_true", help="also write raw per-request records"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infersim",
        description="Seeded simulations of SLA-aware model selection for remote inference",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-sla", help="sweep the SLA target across policies")
    _add_common_flags(p)
    p.add_argument("--sla-list", help="comma-separated SLA targets in ms")
    p.set_defaults(func=lambda a: _run_command(ExperimentKind.SLA_SWEEP, a))

    p = sub.add_parser("sweep-cv", help="sweep network variability at fixed mean")
    _add_common_flags(p)
    p.add_argument("--cv-list", help="comma-separated CV values in [0, 1]")
    p.set_defaults(func=lambda a: _run_command(ExperimentKind.CV_SWEEP, a))

    p = sub.add_parser("compare-policies", help="selection-policy decomposition study")
    _add_common_flags(p)
    p.add_argument("--sla-list", help="comma-separated SLA targets in ms")
    p.set_defaults(func=lambda a: _run_command(ExperimentKind.POLICY_COMPARE, a))

    p = sub.add_parser("replay-trace", help="duplication study over a recorded trace")
    _add_common_flags(p)
    p.add_argument("--trace", metavar="PATH", help="trace CSV to replay")
    p.add_argument("--sla", type=float, default=None, help="SLA target in ms")
    p.set_defaults(func=lambda a: _run_command(ExperimentKind.TRACE_REPLAY, a))

    p = sub.add_parser("models", help="model catalog utilities")
    models_sub = p.add_subparsers(dest="models_command", required=True)
    v = models_sub.add_parser("validate", help="validate a model CSV file")
    v.add_argument("path", help="model CSV file")
    v.set_defaults(func=_models_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def console_main() -> None:
    raise SystemExit(main())
