"""Budget computation and model-selection policies.

The adaptive policy picks a cloud model in three stages:

1. Base model: the most accurate model whose mean-plus-one-standard-deviation
   execution time fits strictly under the time budget. If none fits, the
   fastest model is used directly.
2. Exploration set: every model whose mean execution time lies within one
   base-model standard deviation of the base model's mean (closed interval).
3. Weighted draw: each candidate gets a utility equal to its accuracy scaled
   by the budget slack after its typical execution time, normalized by its
   distance from the budget; the chosen model is drawn with probability
   proportional to the positive part of its utility.

Six static/random baseline policies used for comparison live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ValidationError
from .models import ModelProfile, ModelSet

# Guard against a zero denominator when a model's mean latency equals the
# budget exactly; far below any meaningful timing resolution.
UTILITY_DENOMINATOR_FLOOR_MS = 1e-9


@dataclass(frozen=True)
class Budget:
    """Time available for remote execution after estimated network transfer."""

    sla_ms: float
    nw_estimate_ms: float
    budget_ms: float


def compute_budget(sla_ms: float, t_input_ms: float) -> Budget:
    """Budget = SLA minus the estimated round trip (twice the upload time).

    The budget may come out negative; a negative budget simply means no model
    can fit and selection will fall back to the fastest one.
    """
    if sla_ms <= 0.0:
        raise ValidationError(f"sla_ms must be > 0, got {sla_ms}")
    if t_input_ms < 0.0:
        raise ValidationError(f"t_input_ms must be >= 0, got {t_input_ms}")
    nw_estimate_ms = 2.0 * t_input_ms
    return Budget(sla_ms=sla_ms, nw_estimate_ms=nw_estimate_ms, budget_ms=sla_ms - nw_estimate_ms)


class SelectionPath(str, Enum):
    BASE_FEASIBLE = "base_feasible"
    FALLBACK_FASTEST = "fallback_fastest"


class PolicyKind(str, Enum):
    ADAPTIVE = "adaptive"
    STATIC_GREEDY = "static_greedy"
    PURE_RANDOM = "pure_random"
    RELATED_RANDOM = "related_random"
    RELATED_ACCURATE = "related_accurate"
    STATIC_LATENCY = "static_latency"
    STATIC_ACCURACY = "static_accuracy"


BASELINE_POLICIES = tuple(k for k in PolicyKind if k is not PolicyKind.ADAPTIVE)


@dataclass(frozen=True)
class SelectionOutcome:
    """Full trace of one adaptive selection."""

    chosen: ModelProfile
    path: SelectionPath
    base: ModelProfile
    exploration: ModelSet
    probabilities: dict[str, float]


def select_base(models: ModelSet, budget: Budget) -> tuple[ModelProfile, bool]:
    """Stage one: most accurate model with mean + std strictly under budget.

    Returns ``(profile, True)`` when some model fits, otherwise the fastest
    model with ``False``. Accuracy ties break toward the smaller mean latency,
    then the smaller name.
    """
    feasible = [
        p for p in models if p.exec_mean_ms + p.exec_std_ms < budget.budget_ms
    ]
    if feasible:
        best = min(feasible, key=lambda p: (-p.accuracy, p.exec_mean_ms, p.name))
        return best, True
    return models.fastest(), False


def exploration_set(models: ModelSet, base: ModelProfile) -> ModelSet:
    """Stage two: models whose mean lies within one base std of the base mean.

    The interval is closed at both ends, so the base model itself is always a
    member.
    """
    lo = base.exec_mean_ms - base.exec_std_ms
    hi = base.exec_mean_ms + base.exec_std_ms
    return ModelSet(tuple(p for p in models if lo <= p.exec_mean_ms <= hi))


def utility(profile: ModelProfile, budget: Budget) -> float:
    """Accuracy-weighted budget slack, normalized by distance from the budget.

    Negative when the model's typical execution time overshoots the budget.
    """
    slack = budget.budget_ms - (profile.exec_mean_ms + profile.exec_std_ms)
    denom = max(abs(budget.budget_ms - profile.exec_mean_ms), UTILITY_DENOMINATOR_FLOOR_MS)
    return profile.accuracy * slack / denom


def selection_probabilities(candidates: ModelSet, budget: Budget) -> dict[str, float]:
    """Stage three weights: utilities clamped at zero, then normalized.

    Clamping keeps the result a valid distribution when some candidates
    overshoot the budget. If every clamped utility is zero the whole mass goes
    to the highest-utility (least negative) candidate.
    """
    utilities = [(p, utility(p, budget)) for p in candidates]
    clamped = [(p, max(0.0, u)) for p, u in utilities]
    total = sum(w for _, w in clamped)
    if total <= 0.0:
        top = min(utilities, key=lambda pu: (-pu[1], pu[0].exec_mean_ms, pu[0].name))[0]
        return {p.name: (1.0 if p is top else 0.0) for p, _ in utilities}
    return {p.name: w / total for p, w in clamped}


def _weighted_pick(
    candidates: ModelSet, probabilities: dict[str, float], rng: np.random.Generator
) -> ModelProfile:
    # Exactly one uniform draw regardless of candidate count, so random
    # streams stay aligned across configurations.
    r = rng.random()
    acc = 0.0
    for p in candidates:
        acc += probabilities[p.name]
        if r < acc:
            return p
    return candidates.profiles[-1]


def select_adaptive(
    models: ModelSet, budget: Budget, rng: np.random.Generator
) -> SelectionOutcome:
    """Run the three-stage adaptive selection for one request."""
    base, feasible = select_base(models, budget)
    if not feasible:
        fallback = ModelSet((base,))
        probabilities = {base.name: 1.0}
        chosen = _weighted_pick(fallback, probabilities, rng)
        return SelectionOutcome(
            chosen=chosen,
            path=SelectionPath.FALLBACK_FASTEST,
            base=base,
            exploration=fallback,
            probabilities=probabilities,
        )
    candidates = exploration_set(models, base)
    probabilities = selection_probabilities(candidates, budget)
    chosen = _weighted_pick(candidates, probabilities, rng)
    return SelectionOutcome(
        chosen=chosen,
        path=SelectionPath.BASE_FEASIBLE,
        base=base,
        exploration=candidates,
        probabilities=probabilities,
    )


def select_baseline(
    kind: PolicyKind,
    models: ModelSet,
    sla_ms: float,
    budget: Budget,
    rng: np.random.Generator,
) -> ModelProfile:
    """Pick a model under one of the comparison policies.

    ``static_greedy`` checks latency statistics against the full SLA and
    deliberately ignores network transfer time; the ``related_*`` policies
    reuse stages one and two of the adaptive algorithm and then pick from the
    exploration set uniformly or by accuracy.
    """
    if kind is PolicyKind.ADAPTIVE:
        raise ValidationError("use select_adaptive for the adaptive policy")
    if kind is PolicyKind.STATIC_GREEDY:
        feasible = [p for p in models if p.exec_mean_ms + p.exec_std_ms < sla_ms]
        if feasible:
            return min(feasible, key=lambda p: (-p.accuracy, p.exec_mean_ms, p.name))
        return models.fastest()
    if kind is PolicyKind.PURE_RANDOM:
        return models.profiles[rng.integers(len(models))]
    if kind is PolicyKind.RELATED_RANDOM:
        base, _ = select_base(models, budget)
        candidates = exploration_set(models, base)
        return candidates.profiles[rng.integers(len(candidates))]
    if kind is PolicyKind.RELATED_ACCURATE:
        base, _ = select_base(models, budget)
        return exploration_set(models, base).most_accurate()
    if kind is PolicyKind.STATIC_LATENCY:
        return models.fastest()
    if kind is PolicyKind.STATIC_ACCURACY:
        return models.most_accurate()
    raise ValidationError(f"unknown policy kind: {kind!r}")
