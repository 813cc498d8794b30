import dataclasses
import logging
import math

import numpy as np
import pytest

from qmetric.analysis import (DEFAULT_SEARCH, Scanner, SearchConfig, c_q, c_q_curve, golden_section_max,
    kappa_threshold, normalized_strength, s_q, scan, threshold_table)
from qmetric.entropy import MetricKind, q_log
from qmetric.errors import ScenarioError
from qmetric.scenarios import Scenario, ScenarioSpec

CHSH = Scenario.CHSH_DEPHASING
LG_HALF = Scenario.LG_SPIN_HALF_DEPHASING
LG_ONE = Scenario.LG_SPIN_ONE_DEPHASING

DICHOTOMIC_QS = [1.0, 1.2, 1.5, 2.0, 2.5]
SPIN_ONE_QS = [1.0, 1.2, 1.4, 1.7, 2.0]

# Fine enough to resolve thresholds to 1e-5 while keeping each search under a second.
THRESHOLD_SEARCH = SearchConfig(coarse_steps=500, kappa_coarse_steps=50, kappa_bisect_tolerance=1e-5)
THRESHOLD_SLACK = 2e-5


def binary_entropy(p):
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


class TestCq:
    @pytest.mark.parametrize("metric", list(MetricKind))
    def test_chsh_quarter_angle(self, metric):
        value = c_q(ScenarioSpec(CHSH, math.pi / 4, 0.0), metric, 1.0)
        expected = (2 * binary_entropy((1 - math.cos(math.pi / 4)) / 2)
                    - 6 * binary_entropy((1 - math.cos(math.pi / 12)) / 2))
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(0.315358, abs=1e-4)

    @pytest.mark.parametrize("metric", list(MetricKind))
    def test_lg_spin_half_sixth_turn(self, metric):
        value = c_q(ScenarioSpec(LG_HALF, math.pi / 6, 0.0), metric, 1.0)
        expected = (2 * binary_entropy((1 - math.cos(math.pi / 3)) / 2)
                    - 4 * binary_entropy((1 - math.cos(math.pi / 6)) / 2))
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(0.141658, abs=1e-4)

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_vanishes_at_small_theta(self, scenario):
        for metric in MetricKind:
            for q in (1.0, 2.0):
                assert abs(c_q(ScenarioSpec(scenario, 1e-12, 0.0), metric, q)) <= 1e-9

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_metric_kinds_agree_at_shannon(self, scenario):
        thetas = np.linspace(0.01, math.pi, 50)
        for kappa in (0.0, 0.3, 1.0):
            delta = c_q_curve(scenario, MetricKind.DELTA, 1.0, thetas, kappa)
            dtilde = c_q_curve(scenario, MetricKind.DTILDE, 1.0, thetas, kappa)
            np.testing.assert_allclose(delta, dtilde, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_metric_kinds_are_proportional(self, scenario):
        # Uniform marginals make each chain-form weight 1/k^q equal to k^(1-q) times 1/k.
        thetas = np.linspace(0.01, math.pi, 50)
        k = scenario.outcome_count
        for q in (1.5, 2.0, 3.0):
            delta = c_q_curve(scenario, MetricKind.DELTA, q, thetas, 0.2)
            dtilde = c_q_curve(scenario, MetricKind.DTILDE, q, thetas, 0.2)
            np.testing.assert_allclose(delta, k ** (1 - q) * dtilde, rtol=1e-10, atol=1e-14)

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_continuous_in_kappa(self, scenario):
        # Noise keeps every cell probability away from zero; at kappa = 0 some cells vanish and
        # the entropy is not Lipschitz there.
        thetas = np.linspace(0.05, math.pi, 40)
        for kappa in (0.05, 0.5, 1.5):
            for q in (1.0, 2.0):
                here = c_q_curve(scenario, MetricKind.DTILDE, q, thetas, kappa)
                there = c_q_curve(scenario, MetricKind.DTILDE, q, thetas, kappa + 1e-6)
                assert np.max(np.abs(there - here)) <= 1e-4

    def test_curve_matches_pointwise(self):
        thetas = np.linspace(0.1, 3.0, 7)
        curve = c_q_curve(LG_ONE, MetricKind.DELTA, 1.7, thetas, 0.1)
        for theta, value in zip(thetas, curve):
            assert value == pytest.approx(c_q(ScenarioSpec(LG_ONE, float(theta), 0.1), MetricKind.DELTA, 1.7),
                abs=1e-14)

    def test_invalid_theta(self):
        with pytest.raises(ScenarioError):
            c_q_curve(CHSH, MetricKind.DELTA, 1.0, [0.5, 4.0], 0.0)


class TestSearch:
    def test_golden_section(self):
        x, fx = golden_section_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, 1e-8)
        assert x == pytest.approx(0.3, abs=1e-7)
        assert fx == pytest.approx(0.0, abs=1e-13)

    def test_golden_section_accepts_reversed_bracket(self):
        x, _ = golden_section_max(math.sin, 3.0, 0.0, 1e-8)
        assert x == pytest.approx(math.pi / 2, abs=1e-7)

    def test_s_q_bounds_the_quarter_angle_value(self):
        theta_star, value = s_q(CHSH, MetricKind.DTILDE, 1.0, 0.0)
        assert value >= 0.315358 - 1e-4
        assert value >= c_q(ScenarioSpec(CHSH, math.pi / 4, 0.0), MetricKind.DTILDE, 1.0)
        assert DEFAULT_SEARCH.theta_min <= theta_star <= DEFAULT_SEARCH.theta_max

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_refinement_never_loses_to_the_grid(self, scenario):
        cfg = SearchConfig.fast()
        thetas = np.linspace(cfg.theta_min, cfg.theta_max, cfg.coarse_steps)
        for kappa in (0.0, 0.2):
            grid_best = c_q_curve(scenario, MetricKind.DELTA, 1.5, thetas, kappa).max()
            _, value = s_q(scenario, MetricKind.DELTA, 1.5, kappa, cfg)
            assert value >= grid_best

    def test_higher_q_is_stronger_without_noise(self):
        s1 = s_q(CHSH, MetricKind.DTILDE, 1.0, 0.0)[1]
        s2 = s_q(CHSH, MetricKind.DTILDE, 2.0, 0.0)[1]
        assert s2 > s1

    def test_deterministic(self):
        assert s_q(LG_ONE, MetricKind.DTILDE, 1.4, 0.05) == s_q(LG_ONE, MetricKind.DTILDE, 1.4, 0.05)

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_strong_decoherence_destroys_violation(self, scenario):
        for metric in MetricKind:
            assert s_q(scenario, metric, 1.0, 5.0, SearchConfig.fast())[1] <= 0

    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_violated_without_noise(self, scenario):
        qs = SPIN_ONE_QS if scenario is LG_ONE else DICHOTOMIC_QS
        for metric in MetricKind:
            for q in qs:
                assert s_q(scenario, metric, q, 0.0, SearchConfig.fast())[1] > 0

    @pytest.mark.parametrize("scenario", [CHSH, LG_HALF])
    def test_strength_dominates_shannon(self, scenario):
        cfg = SearchConfig.fast()
        kappas = np.round(np.arange(0.0, 1.5, 0.05), 10)
        baseline = {k: s_q(scenario, MetricKind.DTILDE, 1.0, float(k), cfg)[1] for k in kappas}
        positive = [k for k, v in baseline.items() if v > cfg.positivity_epsilon]
        assert positive
        for q in DICHOTOMIC_QS[1:]:
            for k in positive:
                assert s_q(scenario, MetricKind.DTILDE, q, float(k), cfg)[1] >= baseline[k]


class TestConfig:
    @pytest.mark.parametrize("overrides", [
        dict(theta_min=0.0),
        dict(theta_min=2.0, theta_max=1.0),
        dict(theta_max=4.0),
        dict(coarse_steps=2),
        dict(kappa_coarse_steps=0),
        dict(refine_tolerance=0.0),
        dict(positivity_epsilon=-1e-9),
        dict(kappa_max=0.0),
    ])
    def test_invalid(self, overrides):
        with pytest.raises(ScenarioError):
            SearchConfig(**overrides)

    def test_presets(self):
        assert SearchConfig.default() == DEFAULT_SEARCH
        assert DEFAULT_SEARCH.coarse_steps == 2000
        assert DEFAULT_SEARCH.kappa_max == 5.0
        assert SearchConfig.fast().coarse_steps < DEFAULT_SEARCH.coarse_steps


class TestThreshold:
    def test_chsh_shannon_threshold_is_positive(self):
        kappa_s = kappa_threshold(CHSH, MetricKind.DTILDE, 1.0, THRESHOLD_SEARCH)
        assert kappa_s is not None
        assert 0 < kappa_s < THRESHOLD_SEARCH.kappa_max
        assert s_q(CHSH, MetricKind.DTILDE, 1.0, kappa_s, THRESHOLD_SEARCH)[1] > 0
        assert s_q(CHSH, MetricKind.DTILDE, 1.0, kappa_s + 2 * THRESHOLD_SEARCH.kappa_bisect_tolerance,
            THRESHOLD_SEARCH)[1] <= THRESHOLD_SEARCH.positivity_epsilon

    @pytest.mark.parametrize("scenario", [CHSH, LG_HALF])
    def test_grows_with_q(self, scenario):
        thresholds = [kappa_threshold(scenario, MetricKind.DTILDE, q, THRESHOLD_SEARCH) for q in DICHOTOMIC_QS]
        assert all(t is not None for t in thresholds)
        for lower, higher in zip(thresholds, thresholds[1:]):
            assert higher >= lower - THRESHOLD_SLACK

    def test_threshold_is_metric_independent_as_epsilon_vanishes(self):
        # The metrics differ by a constant factor, so only the sign of S_q is shared. A finite
        # cutoff moves the two thresholds apart by an amount that shrinks with the cutoff.
        tight = dataclasses.replace(THRESHOLD_SEARCH, positivity_epsilon=1e-12)
        delta = kappa_threshold(LG_HALF, MetricKind.DELTA, 2.0, tight)
        dtilde = kappa_threshold(LG_HALF, MetricKind.DTILDE, 2.0, tight)
        assert delta == pytest.approx(dtilde, abs=THRESHOLD_SLACK)
        assert delta == pytest.approx(0.706104, abs=THRESHOLD_SLACK)

    def test_loose_cutoff_orders_thresholds_by_metric(self):
        # Delta = 2^(1-q) Dtilde is the smaller one, so it crosses a fixed cutoff first.
        delta = kappa_threshold(LG_HALF, MetricKind.DELTA, 2.0, THRESHOLD_SEARCH)
        dtilde = kappa_threshold(LG_HALF, MetricKind.DTILDE, 2.0, THRESHOLD_SEARCH)
        assert delta < dtilde
        assert dtilde - delta < 1e-3

    def test_narrower_theta_window_never_raises_threshold(self):
        # A larger theta_min searches a subset of angles, so S_q can only lose positivity sooner.
        wide = kappa_threshold(LG_HALF, MetricKind.DTILDE, 2.0, THRESHOLD_SEARCH)
        narrow = kappa_threshold(LG_HALF, MetricKind.DTILDE, 2.0,
            dataclasses.replace(THRESHOLD_SEARCH, theta_min=0.05))
        assert narrow <= wide + THRESHOLD_SLACK

    @pytest.mark.parametrize("q", [1.2, 2.0])
    def test_spin_one_is_less_robust(self, q):
        one = kappa_threshold(LG_ONE, MetricKind.DTILDE, q, THRESHOLD_SEARCH)
        half = kappa_threshold(LG_HALF, MetricKind.DTILDE, q, THRESHOLD_SEARCH)
        assert one < half

    def test_absent_threshold(self, caplog):
        cfg = SearchConfig(coarse_steps=100, positivity_epsilon=10.0)
        with caplog.at_level(logging.INFO, logger="qmetric.analysis"):
            assert kappa_threshold(CHSH, MetricKind.DELTA, 1.0, cfg) is None
        assert "no violation" in caplog.text

    def test_censored_threshold(self, caplog):
        cfg = SearchConfig(coarse_steps=200, kappa_max=0.01, kappa_coarse_steps=2)
        with caplog.at_level(logging.WARNING, logger="qmetric.analysis"):
            assert kappa_threshold(CHSH, MetricKind.DELTA, 1.0, cfg) == 0.01
        assert "censored" in caplog.text

    def test_table(self):
        rows = threshold_table(LG_HALF, MetricKind.DELTA, [1.0, 1.5], SearchConfig.fast())
        assert [r.q for r in rows] == [1.0, 1.5]
        assert rows[0].to_row() == {'scenario': 'lg-spin-half-dephasing', 'metric': 'delta', 'q': 1.0,
                                    'kappa_s': rows[0].kappa_s}


class TestNormalizedStrength:
    def test_units(self):
        assert normalized_strength(CHSH, 1.0, math.log(2)) == pytest.approx(1.0)
        assert normalized_strength(LG_ONE, 2.0, 0.5) == pytest.approx(0.5 / q_log(3, 2.0))


class TestScan:
    def test_order_and_shape(self):
        records = scan(LG_HALF, MetricKind.DTILDE, [2.0, 1.0], [0.0, 0.5, 0.1], SearchConfig.fast())
        assert [(r.q, r.kappa) for r in records] == [
            (2.0, 0.0), (2.0, 0.5), (2.0, 0.1), (1.0, 0.0), (1.0, 0.5), (1.0, 0.1)]
        for r in records:
            assert r.positive == (r.s_value > SearchConfig.fast().positivity_epsilon)
            assert r.scenario is LG_HALF and r.metric is MetricKind.DTILDE

    def test_single_cell_matches_s_q(self):
        cfg = SearchConfig.fast()
        [record] = scan(CHSH, MetricKind.DELTA, [1.5], [0.2], cfg)
        assert (record.theta_star, record.s_value) == s_q(CHSH, MetricKind.DELTA, 1.5, 0.2, cfg)
        assert list(record.to_row()) == ['scenario', 'metric', 'q', 'kappa', 'theta_star', 's_value', 'positive']

    def test_parallel_matches_serial(self):
        scanner = Scanner(CHSH, MetricKind.DTILDE, [1.0, 2.0], [0.0, 0.3, 0.6], SearchConfig.fast())
        assert scanner.run_all(workers=2) == scanner.run_all()

    def test_needs_a_grid(self):
        with pytest.raises(ScenarioError):
            Scanner(CHSH, MetricKind.DTILDE, [], [0.0])
        with pytest.raises(ScenarioError):
            Scanner(CHSH, MetricKind.DTILDE, [1.0], [])
