"""Per-request simulation and metrics aggregation.

One simulated request: draw the network times, hand the policy a budget based
on the round-trip estimate, draw the chosen model's execution latency, and,
when duplication is on, fall back to the concurrently running on-device model
whenever the remote path overshoots the SLA.

Every request gets its own random substream derived from (seed, request id),
so a record is reproducible independently of how many requests a run makes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ValidationError
from .models import ModelProfile, ModelSet
from .network import NetworkModel
from .policy import PolicyKind, compute_budget, select_adaptive, select_baseline

# Fallback model running on the phone itself. Its latency keeps completion
# under a 50 ms SLA with high probability; accuracy is the model's top-1.
DEFAULT_ON_DEVICE = ModelProfile(
    name="MobileNetV1_128 0.25", accuracy=0.414, exec_mean_ms=40.0, exec_std_ms=5.0
)


class ResultSource(str, Enum):
    REMOTE = "remote"
    ON_DEVICE = "on_device"


@dataclass(frozen=True)
class SimulationConfig:
    models: ModelSet
    network: NetworkModel
    policy: PolicyKind
    sla_ms: float
    n_requests: int = 10_000
    seed: int = 0
    duplication: bool = False
    on_device: ModelProfile = field(default=DEFAULT_ON_DEVICE)

    def __post_init__(self) -> None:
        if self.sla_ms <= 0.0:
            raise ValidationError(f"sla_ms must be > 0, got {self.sla_ms}")
        if self.n_requests < 1:
            raise ValidationError(f"n_requests must be >= 1, got {self.n_requests}")
        if self.seed < 0:
            raise ValidationError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class RequestRecord:
    """Timeline of one simulated request."""

    id: int
    t_input_ms: float
    t_output_ms: float
    nw_estimate_ms: float
    budget_ms: float
    selected: str
    exec_ms: float
    remote_total_ms: float
    source: ResultSource
    response_ms: float
    sla_met: bool
    accuracy_used: float


@dataclass(frozen=True)
class MetricsSummary:
    aggregate_accuracy: float
    sla_attainment: float
    on_device_reliance: float
    mean_latency_ms: float
    std_latency_ms: float
    model_usage: dict[str, float]


def _latency_draw(mean_ms: float, std_ms: float, rng: np.random.Generator) -> float:
    if std_ms == 0.0:
        return mean_ms
    return max(0.0, mean_ms + std_ms * rng.standard_normal())


def request_rng(seed: int, request_id: int) -> np.random.Generator:
    """The dedicated random substream for one request."""
    return np.random.default_rng([seed, request_id])


def simulate_request(
    cfg: SimulationConfig,
    request_id: int,
    rng: np.random.Generator,
    network: NetworkModel | None = None,
) -> RequestRecord:
    """Simulate one request end to end.

    ``network`` lets a caller pass the per-run replay session (trace models
    carry a cursor); by default the config's network is used directly.
    """
    net = network if network is not None else cfg.network
    t_input, t_output = net.sample_pair(rng)
    budget = compute_budget(cfg.sla_ms, t_input)
    if cfg.policy is PolicyKind.ADAPTIVE:
        selected = select_adaptive(cfg.models, budget, rng).chosen
    else:
        selected = select_baseline(cfg.policy, cfg.models, cfg.sla_ms, budget, rng)
    exec_ms = _latency_draw(selected.exec_mean_ms, selected.exec_std_ms, rng)
    # Drawn even when duplication is off so per-request streams line up
    # between duplication-on and duplication-off runs of the same seed.
    on_device_ms = _latency_draw(
        cfg.on_device.exec_mean_ms, cfg.on_device.exec_std_ms, rng
    )
    remote_total = t_input + exec_ms + t_output
    if cfg.duplication and remote_total > cfg.sla_ms:
        source = ResultSource.ON_DEVICE
        response = on_device_ms
        accuracy_used = cfg.on_device.accuracy
    else:
        source = ResultSource.REMOTE
        response = remote_total
        accuracy_used = selected.accuracy
    return RequestRecord(
        id=request_id,
        t_input_ms=t_input,
        t_output_ms=t_output,
        nw_estimate_ms=budget.nw_estimate_ms,
        budget_ms=budget.budget_ms,
        selected=selected.name,
        exec_ms=exec_ms,
        remote_total_ms=remote_total,
        source=source,
        response_ms=response,
        sla_met=response <= cfg.sla_ms,
        accuracy_used=accuracy_used,
    )


def run_simulation(cfg: SimulationConfig) -> list[RequestRecord]:
    """Simulate ``cfg.n_requests`` requests; identical configs replay identically."""
    net = cfg.network.fork()
    return [
        simulate_request(cfg, i, request_rng(cfg.seed, i), network=net)
        for i in range(cfg.n_requests)
    ]


def summarize(records: list[RequestRecord], sla_ms: float) -> MetricsSummary:
    """Aggregate metrics over a run.

    Aggregate accuracy averages the accuracy of whichever model actually
    served each request; model usage counts the cloud model the policy
    selected, whether or not its result was ultimately used.
    """
    if not records:
        raise ValidationError("cannot summarize an empty record list")
    n = len(records)
    responses = np.array([r.response_ms for r in records])
    usage_counts: dict[str, int] = {}
    for r in records:
        usage_counts[r.selected] = usage_counts.get(r.selected, 0) + 1
    return MetricsSummary(
        aggregate_accuracy=float(np.mean([r.accuracy_used for r in records])),
        sla_attainment=sum(r.sla_met for r in records) / n,
        on_device_reliance=sum(r.source is ResultSource.ON_DEVICE for r in records) / n,
        mean_latency_ms=float(responses.mean()),
        std_latency_ms=float(responses.std()),
        model_usage={name: usage_counts[name] / n for name in sorted(usage_counts)},
    )
