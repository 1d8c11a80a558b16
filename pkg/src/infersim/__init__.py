"""Seeded Monte-Carlo simulation of SLA-aware model selection for remote inference.

The package simulates a serving setup where each request can run on one of
several functionally-equivalent cloud models (different accuracy/latency
trade-offs) and, optionally, is duplicated to a fast on-device model so that a
result is always ready by the SLA deadline.
"""

from .errors import ParseError, ValidationError
from .experiments import (
    ExperimentKind,
    ExperimentResult,
    ExperimentSpec,
    ResultRow,
    default_cloud_models,
    emit_csv,
    emit_records_csv,
    run_cv_sweep,
    run_experiment,
    run_policy_compare,
    run_sla_sweep,
    run_trace_replay,
)
from .models import (
    FICTIONAL_MODEL_NAME,
    ModelProfile,
    ModelSet,
    builtin_models,
    load_models,
    save_models,
)
from .network import (
    GaussianNetwork,
    NetworkModel,
    TraceNetwork,
    TraceRecord,
    cv_network,
    estimate_round_trip,
    gaussian_network,
    load_trace,
)
from .policy import (
    Budget,
    PolicyKind,
    SelectionOutcome,
    SelectionPath,
    compute_budget,
    exploration_set,
    select_adaptive,
    select_base,
    select_baseline,
    selection_probabilities,
    utility,
)
from .simulator import (
    DEFAULT_ON_DEVICE,
    MetricsSummary,
    RequestRecord,
    ResultSource,
    SimulationConfig,
    request_rng,
    run_simulation,
    simulate_request,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "DEFAULT_ON_DEVICE",
    "ExperimentKind",
    "ExperimentResult",
    "ExperimentSpec",
    "FICTIONAL_MODEL_NAME",
    "GaussianNetwork",
    "MetricsSummary",
    "ModelProfile",
    "ModelSet",
    "NetworkModel",
    "ParseError",
    "PolicyKind",
    "RequestRecord",
    "ResultRow",
    "ResultSource",
    "SelectionOutcome",
    "SelectionPath",
    "SimulationConfig",
    "TraceNetwork",
    "TraceRecord",
    "ValidationError",
    "builtin_models",
    "compute_budget",
    "cv_network",
    "default_cloud_models",
    "emit_csv",
    "emit_records_csv",
    "estimate_round_trip",
    "exploration_set",
    "gaussian_network",
    "load_models",
    "load_trace",
    "request_rng",
    "run_cv_sweep",
    "run_experiment",
    "run_policy_compare",
    "run_simulation",
    "run_sla_sweep",
    "run_trace_replay",
    "save_models",
    "select_adaptive",
    "select_base",
    "select_baseline",
    "selection_probabilities",
    "simulate_request",
    "summarize",
    "utility",
]
