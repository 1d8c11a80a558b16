import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infersim import (
    ModelProfile,
    ModelSet,
    PolicyKind,
    SelectionPath,
    ValidationError,
    compute_budget,
    exploration_set,
    select_adaptive,
    select_base,
    select_baseline,
    selection_probabilities,
    utility,
)


def budget_of(budget_ms):
    """Budget carrying an explicit execution allowance (zero network)."""
    return compute_budget(budget_ms, 0.0) if budget_ms > 0 else _negative_budget(budget_ms)


def _negative_budget(budget_ms):
    # sla small, network large: any combination with the right difference works.
    return compute_budget(1.0, (1.0 - budget_ms) / 2.0)


class TestComputeBudget:
    @pytest.mark.parametrize(
        "sla,t_input,expected",
        [(250.0, 100.0, 50.0), (250.0, 0.0, 250.0), (100.0, 75.0, -50.0)],
    )
    def test_examples(self, sla, t_input, expected):
        b = compute_budget(sla, t_input)
        assert b.nw_estimate_ms == 2 * t_input
        assert b.budget_ms == expected

    @given(
        st.floats(min_value=1e-3, max_value=1e4),
        st.floats(min_value=0.0, max_value=1e4),
    )
    def test_identity(self, sla, t_input):
        b = compute_budget(sla, t_input)
        assert b.budget_ms == b.sla_ms - b.nw_estimate_ms

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValidationError):
            compute_budget(0.0, 10.0)
        with pytest.raises(ValidationError):
            compute_budget(100.0, -1.0)


def brute_force_base(models, budget_ms):
    """Independent stage-one oracle: filter, then argmax accuracy."""
    feasible = [p for p in models if p.exec_mean_ms + p.exec_std_ms < budget_ms]
    if feasible:
        return max(feasible, key=lambda p: p.accuracy), True
    return min(models, key=lambda p: p.exec_mean_ms), False


class TestSelectBase:
    @pytest.mark.parametrize(
        "budget_ms,expected_name,expected_feasible",
        [
            (150.0, "NasNet Large", True),
            (10.0, "MobileNetV1 1.0", True),
            (2.0, "MobileNetV1 0.25", False),
        ],
    )
    def test_examples(self, catalog, budget_ms, expected_name, expected_feasible):
        chosen, feasible = select_base(catalog, budget_of(budget_ms))
        oracle, oracle_feasible = brute_force_base(catalog, budget_ms)
        assert (chosen.name, feasible) == (expected_name, expected_feasible)
        assert (chosen, feasible) == (oracle, oracle_feasible)

    @given(st.floats(min_value=-50.0, max_value=400.0))
    def test_matches_brute_force(self, budget_ms):
        from infersim import builtin_models

        models = builtin_models()
        b = _negative_budget(budget_ms) if budget_ms <= 0 else budget_of(budget_ms)
        assert select_base(models, b) == brute_force_base(models, b.budget_ms)

    @given(
        st.floats(min_value=0.0, max_value=300.0),
        st.floats(min_value=1.0, max_value=100.0),
    )
    def test_feasibility_monotone_in_budget(self, budget_ms, extra):
        from infersim import builtin_models

        models = builtin_models()
        lo, feasible_lo = select_base(models, budget_of(budget_ms + 1e-9))
        hi, feasible_hi = select_base(models, budget_of(budget_ms + extra + 1e-9))
        if feasible_lo:
            assert feasible_hi
            assert hi.accuracy >= lo.accuracy

    def test_saturates_at_most_accurate(self, catalog):
        ceiling = max(p.exec_mean_ms + p.exec_std_ms for p in catalog)
        chosen, feasible = select_base(catalog, budget_of(ceiling + 1.0))
        assert feasible and chosen == catalog.most_accurate()


class TestExplorationSet:
    def test_converges_to_twin_pair(self, catalog):
        base, feasible = select_base(catalog, budget_of(150.0))
        assert feasible
        members = exploration_set(catalog, base)
        assert set(members.names) == {"NasNet Large", "NasNet Fictional"}

    def test_isolated_base_is_singleton(self, catalog):
        members = exploration_set(catalog, catalog.get("MobileNetV1 1.0"))
        assert members.names == ("MobileNetV1 1.0",)

    def test_single_model_set(self):
        only = ModelProfile("solo", 0.4, 7.0, 0.5)
        assert exploration_set(ModelSet((only,)), only).names == ("solo",)

    @given(st.sampled_from(range(12)))
    def test_window_membership(self, idx):
        from infersim import builtin_models

        models = builtin_models()
        base = models.profiles[idx]
        members = exploration_set(models, base)
        assert base in members
        lo = base.exec_mean_ms - base.exec_std_ms
        hi = base.exec_mean_ms + base.exec_std_ms
        for p in members:
            assert lo <= p.exec_mean_ms <= hi


class TestUtility:
    def test_value_matches_direct_formula(self, catalog):
        large = catalog.get("NasNet Large")
        b = budget_of(150.0)
        expected = 0.826 * (150.0 - (112.61 + 0.36)) / abs(150.0 - 112.61)
        assert utility(large, b) == pytest.approx(expected, abs=1e-12)
        assert utility(large, b) == pytest.approx(0.8181, abs=1e-3)

    def test_fictional_twin_scales_by_accuracy(self, catalog):
        assert utility(catalog.get("NasNet Fictional"), budget_of(150.0)) == pytest.approx(
            0.4952, abs=1e-3
        )

    def test_zero_when_typical_time_equals_budget(self):
        m = ModelProfile("edge", 0.9, 40.0, 10.0)
        assert utility(m, budget_of(50.0)) == 0.0

    def test_denominator_guard(self):
        m = ModelProfile("singular", 0.9, 50.0, 10.0)
        value = utility(m, budget_of(50.0))
        assert math.isfinite(value) and value < 0


def two_model_subset(catalog):
    return ModelSet((catalog.get("NasNet Large"), catalog.get("NasNet Fictional")))


class TestSelectionProbabilities:
    def test_twin_pair_is_accuracy_ratio(self, catalog):
        probs = selection_probabilities(two_model_subset(catalog), budget_of(150.0))
        # Identical latency statistics cancel, leaving the accuracy ratio.
        assert probs["NasNet Large"] == pytest.approx(0.826 / (0.826 + 0.50), abs=1e-12)
        assert probs["NasNet Large"] == pytest.approx(0.623, abs=1e-3)
        assert probs["NasNet Fictional"] == pytest.approx(0.377, abs=1e-3)

    def test_singleton_gets_unit_mass(self, catalog):
        probs = selection_probabilities(ModelSet((catalog.get("DenseNet"),)), budget_of(500.0))
        assert probs == {"DenseNet": 1.0}

    def test_all_infeasible_collapses_to_point_mass(self, catalog):
        probs = selection_probabilities(two_model_subset(catalog), budget_of(100.0))
        # Both utilities are negative multiples of the same latency ratio, so
        # the lower-accuracy twin is the less negative one and takes the mass.
        assert probs == {"NasNet Large": 0.0, "NasNet Fictional": 1.0}

    @given(st.floats(min_value=-200.0, max_value=500.0))
    def test_valid_distribution(self, budget_ms):
        from infersim import builtin_models

        models = builtin_models()
        b = _negative_budget(budget_ms) if budget_ms <= 0 else budget_of(budget_ms)
        probs = selection_probabilities(models, b)
        assert all(v >= 0.0 for v in probs.values())
        assert sum(probs.values()) == pytest.approx(1.0, abs=1e-9)

    @given(
        st.floats(min_value=10.0, max_value=400.0),
        st.floats(min_value=0.05, max_value=1.0),
    )
    def test_uniform_accuracy_scaling_is_invariant(self, budget_ms, scale):
        from infersim import builtin_models

        models = builtin_models()
        scaled = ModelSet(
            tuple(
                ModelProfile(p.name, p.accuracy * scale, p.exec_mean_ms, p.exec_std_ms)
                for p in models
            )
        )
        b = budget_of(budget_ms)
        original = selection_probabilities(models, b)
        rescaled = selection_probabilities(scaled, b)
        for name in original:
            assert rescaled[name] == pytest.approx(original[name], abs=1e-9)


class TestSelectAdaptive:
    def test_fallback_path(self, catalog):
        outcome = select_adaptive(catalog, budget_of(2.0), np.random.default_rng(0))
        assert outcome.path is SelectionPath.FALLBACK_FASTEST
        assert outcome.chosen.name == "MobileNetV1 0.25"
        assert outcome.exploration.names == ("MobileNetV1 0.25",)
        assert outcome.probabilities == {"MobileNetV1 0.25": 1.0}

    def test_singleton_set(self):
        only = ModelProfile("solo", 0.4, 7.0, 0.5)
        outcome = select_adaptive(ModelSet((only,)), budget_of(1000.0), np.random.default_rng(0))
        assert outcome.chosen == only
        assert outcome.path is SelectionPath.BASE_FEASIBLE

    def test_deterministic_replay(self, catalog):
        b = budget_of(150.0)
        first = select_adaptive(catalog, b, np.random.default_rng(42))
        second = select_adaptive(catalog, b, np.random.default_rng(42))
        assert first == second

    def test_draw_frequencies_track_probabilities(self, catalog):
        b = budget_of(150.0)
        rng = np.random.default_rng(7)
        n = 20_000
        hits = sum(
            select_adaptive(catalog, b, rng).chosen.name == "NasNet Large" for _ in range(n)
        )
        assert hits / n == pytest.approx(0.6229, abs=0.02)


class TestSelectBaseline:
    def test_static_greedy_ignores_network(self, catalog):
        rng = np.random.default_rng(0)
        chosen = select_baseline(
            PolicyKind.STATIC_GREEDY, catalog, 150.0, budget_of(2.0), rng
        )
        assert chosen.name == "NasNet Large"

    def test_static_greedy_falls_back_to_fastest(self, catalog):
        rng = np.random.default_rng(0)
        chosen = select_baseline(PolicyKind.STATIC_GREEDY, catalog, 2.0, budget_of(2.0), rng)
        assert chosen.name == "MobileNetV1 0.25"

    def test_related_accurate(self, catalog):
        chosen = select_baseline(
            PolicyKind.RELATED_ACCURATE, catalog, 400.0, budget_of(150.0), np.random.default_rng(0)
        )
        assert chosen.name == "NasNet Large"

    def test_static_latency_and_accuracy(self, catalog):
        rng = np.random.default_rng(0)
        assert (
            select_baseline(PolicyKind.STATIC_LATENCY, catalog, 250.0, budget_of(50.0), rng).name
            == "MobileNetV1 0.25"
        )
        assert (
            select_baseline(PolicyKind.STATIC_ACCURACY, catalog, 250.0, budget_of(50.0), rng).name
            == "NasNet Large"
        )

    @settings(deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_pure_random_stays_in_set(self, seed):
        from infersim import builtin_models

        models = builtin_models()
        chosen = select_baseline(
            PolicyKind.PURE_RANDOM, models, 250.0, budget_of(50.0), np.random.default_rng(seed)
        )
        assert chosen in models

    def test_pure_random_is_roughly_uniform(self, catalog):
        rng = np.random.default_rng(11)
        n = 12_000
        counts = {}
        for _ in range(n):
            name = select_baseline(
                PolicyKind.PURE_RANDOM, catalog, 250.0, budget_of(50.0), rng
            ).name
            counts[name] = counts.get(name, 0) + 1
        for name in catalog.names:
            assert counts.get(name, 0) / n == pytest.approx(1 / 12, abs=0.02)

    def test_related_random_splits_twin_pair(self, catalog):
        rng = np.random.default_rng(13)
        n = 10_000
        hits = sum(
            select_baseline(
                PolicyKind.RELATED_RANDOM, catalog, 400.0, budget_of(150.0), rng
            ).name
            == "NasNet Large"
            for _ in range(n)
        )
        assert hits / n == pytest.approx(0.5, abs=0.02)

    def test_adaptive_kind_is_rejected(self, catalog):
        with pytest.raises(ValidationError):
            select_baseline(
                PolicyKind.ADAPTIVE, catalog, 250.0, budget_of(50.0), np.random.default_rng(0)
            )
