"""Experiment families: SLA sweep, CV sweep, policy decomposition, trace replay.

Each family expands into a grid of simulation runs; every grid point becomes
one result row. Rows serialize to CSV with a fixed column set and a
deterministic ordering, so re-running a spec with the same seed produces a
byte-identical file.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import ValidationError
from .models import FICTIONAL_MODEL_NAME, ModelProfile, ModelSet, builtin_models
from .network import NetworkModel, cv_network, load_trace
from .policy import PolicyKind
from .simulator import (
    DEFAULT_ON_DEVICE,
    MetricsSummary,
    RequestRecord,
    SimulationConfig,
    run_simulation,
    summarize,
)

RESULT_CSV_HEADER = (
    "experiment,sweep_value,policy,n_requests,seed,aggregate_accuracy,"
    "sla_attainment,on_device_reliance,mean_latency_ms,std_latency_ms,"
    "model_usage_json"
)

RECORDS_CSV_HEADER = (
    "experiment,sweep_value,policy,request_id,t_input_ms,t_output_ms,"
    "nw_estimate_ms,budget_ms,selected,exec_ms,remote_total_ms,source,"
    "response_ms,sla_met,accuracy_used"
)


class ExperimentKind(str, Enum):
    SLA_SWEEP = "sla_sweep"
    CV_SWEEP = "cv_sweep"
    POLICY_COMPARE = "policy_compare"
    TRACE_REPLAY = "trace_replay"


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    sweep_value: float
    policy: str
    n_requests: int
    seed: int
    summary: MetricsSummary


@dataclass(frozen=True)
class ExperimentSpec:
    kind: ExperimentKind
    models: ModelSet
    policies: tuple[PolicyKind, ...]
    network: NetworkModel | None = None
    sla_list_ms: tuple[float, ...] = ()
    cv_list: tuple[float, ...] = ()
    sla_ms: float = 250.0
    network_mean_ms: float = 100.0
    n_requests: int = 10_000
    seed: int = 0
    duplication: bool = False
    on_device: ModelProfile = field(default=DEFAULT_ON_DEVICE)
    trace_path: Path | None = None
    out: Path | None = None
    dump_records: bool = False

    def validate(self) -> None:
        """Reject malformed specs before any simulation starts."""
        if self.n_requests < 1:
            raise ValidationError(f"n_requests must be >= 1, got {self.n_requests}")
        if self.seed < 0:
            raise ValidationError(f"seed must be >= 0, got {self.seed}")
        if not self.policies:
            raise ValidationError("policies must be non-empty")
        if self.kind in (ExperimentKind.SLA_SWEEP, ExperimentKind.POLICY_COMPARE):
            _check_sweep(self.sla_list_ms, "sla_list_ms")
            if any(v <= 0 for v in self.sla_list_ms):
                raise ValidationError("sla_list_ms values must be > 0")
        if self.kind is ExperimentKind.CV_SWEEP:
            _check_sweep(self.cv_list, "cv_list")
            if any(not 0.0 <= v <= 1.0 for v in self.cv_list):
                raise ValidationError("cv_list values must lie in [0, 1]")
            _check_sweep(self.sla_list_ms, "sla_list_ms")
            if self.network_mean_ms <= 0:
                raise ValidationError("network_mean_ms must be > 0")
        if self.kind is ExperimentKind.POLICY_COMPARE:
            if FICTIONAL_MODEL_NAME not in self.models:
                raise ValidationError(
                    f"policy comparison needs {FICTIONAL_MODEL_NAME!r} in the model set"
                )
        if self.kind is ExperimentKind.TRACE_REPLAY:
            if self.trace_path is None:
                raise ValidationError("trace replay needs a trace_path")
            if not self.duplication:
                raise ValidationError("trace replay runs with duplication enabled")
            if self.sla_ms <= 0:
                raise ValidationError("sla_ms must be > 0")
        if self.kind in (ExperimentKind.SLA_SWEEP, ExperimentKind.POLICY_COMPARE):
            if self.network is None:
                raise ValidationError("sweep needs a network model")


def _check_sweep(values: tuple[float, ...], name: str) -> None:
    if not values:
        raise ValidationError(f"{name} must be non-empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationError(f"{name} must be strictly increasing")


@dataclass(frozen=True)
class ExperimentResult:
    rows: list[ResultRow]
    records: list[tuple[ResultRow, list[RequestRecord]]]


def default_cloud_models(include_fictional: bool = False) -> ModelSet:
    """Bundled cloud-side catalog; the fictional twin only joins decomposition runs."""
    models = builtin_models()
    return models if include_fictional else models.without(FICTIONAL_MODEL_NAME)


def _run_point(
    spec: ExperimentSpec,
    experiment: str,
    sweep_value: float,
    policy: PolicyKind,
    cfg: SimulationConfig,
    result: ExperimentResult,
) -> None:
    records = run_simulation(cfg)
    row = ResultRow(
        experiment=experiment,
        sweep_value=sweep_value,
        policy=policy.value,
        n_requests=cfg.n_requests,
        seed=cfg.seed,
        summary=summarize(records, cfg.sla_ms),
    )
    result.rows.append(row)
    if spec.dump_records:
        result.records.append((row, records))


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    spec.validate()
    result = ExperimentResult(rows=[], records=[])
    if spec.kind in (ExperimentKind.SLA_SWEEP, ExperimentKind.POLICY_COMPARE):
        for sla in spec.sla_list_ms:
            for policy in spec.policies:
                cfg = SimulationConfig(
                    models=spec.models,
                    network=spec.network,
                    policy=policy,
                    sla_ms=sla,
                    n_requests=spec.n_requests,
                    seed=spec.seed,
                    duplication=spec.duplication,
                    on_device=spec.on_device,
                )
                _run_point(spec, spec.kind.value, sla, policy, cfg, result)
    elif spec.kind is ExperimentKind.CV_SWEEP:
        for sla in spec.sla_list_ms:
            label = f"cv_sweep[sla={sla:g}]"
            for cv in spec.cv_list:
                network = cv_network(spec.network_mean_ms, cv)
                for policy in spec.policies:
                    cfg = SimulationConfig(
                        models=spec.models,
                        network=network,
                        policy=policy,
                        sla_ms=sla,
                        n_requests=spec.n_requests,
                        seed=spec.seed,
                        duplication=spec.duplication,
                        on_device=spec.on_device,
                    )
                    _run_point(spec, label, cv, policy, cfg, result)
    elif spec.kind is ExperimentKind.TRACE_REPLAY:
        trace = load_trace(spec.trace_path)
        # The on-device model never doubles as a cloud candidate here.
        models = spec.models.without(spec.on_device.name)
        for policy in spec.policies:
            cfg = SimulationConfig(
                models=models,
                network=trace,
                policy=policy,
                sla_ms=spec.sla_ms,
                n_requests=spec.n_requests,
                seed=spec.seed,
                duplication=True,
                on_device=spec.on_device,
            )
            _run_point(spec, spec.kind.value, spec.sla_ms, policy, cfg, result)
    else:
        raise ValidationError(f"unknown experiment kind: {spec.kind!r}")
    return result


def run_sla_sweep(spec: ExperimentSpec) -> list[ResultRow]:
    if spec.kind is not ExperimentKind.SLA_SWEEP:
        raise ValidationError("spec kind must be sla_sweep")
    return run_experiment(spec).rows


def run_cv_sweep(spec: ExperimentSpec) -> list[ResultRow]:
    if spec.kind is not ExperimentKind.CV_SWEEP:
        raise ValidationError("spec kind must be cv_sweep")
    return run_experiment(spec).rows


def run_policy_compare(spec: ExperimentSpec) -> list[ResultRow]:
    if spec.kind is not ExperimentKind.POLICY_COMPARE:
        raise ValidationError("spec kind must be policy_compare")
    return run_experiment(spec).rows


def run_trace_replay(spec: ExperimentSpec) -> list[ResultRow]:
    if spec.kind is not ExperimentKind.TRACE_REPLAY:
        raise ValidationError("spec kind must be trace_replay")
    return run_experiment(spec).rows


def _fmt(value: float) -> str:
    return format(value, ".6g")


def _usage_json(usage: dict[str, float]) -> str:
    rounded = {name: float(_fmt(frac)) for name, frac in sorted(usage.items())}
    return json.dumps(rounded, separators=(",", ":"), sort_keys=True)


def emit_csv(rows: list[ResultRow], path: str | Path) -> None:
    """Write result rows, ordered by (experiment, sweep value, policy)."""
    if not rows:
        raise ValidationError("no result rows to write")
    ordered = sorted(rows, key=lambda r: (r.experiment, r.sweep_value, r.policy))
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_CSV_HEADER.split(","))
        for row in ordered:
            s = row.summary
            writer.writerow(
                [
                    row.experiment,
                    _fmt(row.sweep_value),
                    row.policy,
                    row.n_requests,
                    row.seed,
                    _fmt(s.aggregate_accuracy),
                    _fmt(s.sla_attainment),
                    _fmt(s.on_device_reliance),
                    _fmt(s.mean_latency_ms),
                    _fmt(s.std_latency_ms),
                    _usage_json(s.model_usage),
                ]
            )


def emit_records_csv(
    entries: list[tuple[ResultRow, list[RequestRecord]]], path: str | Path
) -> None:
    """Write raw per-request records for external plotting."""
    if not entries:
        raise ValidationError("no records to write")
    ordered = sorted(entries, key=lambda e: (e[0].experiment, e[0].sweep_value, e[0].policy))
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORDS_CSV_HEADER.split(","))
        for row, records in ordered:
            for r in records:
                writer.writerow(
                    [
                        row.experiment,
                        _fmt(row.sweep_value),
                        row.policy,
                        r.id,
                        repr(r.t_input_ms),
                        repr(r.t_output_ms),
                        repr(r.nw_estimate_ms),
                        repr(r.budget_ms),
                        r.selected,
                        repr(r.exec_ms),
                        repr(r.remote_total_ms),
                        r.source.value,
                        int(r.sla_met),
                        repr(r.accuracy_used),
                    ]
                )


def records_path_for(out: Path) -> Path:
    return out.with_name(out.stem + ".records" + out.suffix)
