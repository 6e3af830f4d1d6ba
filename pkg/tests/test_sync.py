# Copyright 2026 qfern contributors
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# 1. Redistributions of source code must retain the above copyright notice, this
# list of conditions and the following disclaimer.
#
# 2. Redistributions in binary form must reproduce the above copyright notice,
# this list of conditions and the following disclaimer in the documentation
# and/or other materials provided with the distribution.
#
# 3. Neither the name of the copyright holder nor the names of its contributors
# may be used to endorse or promote products derived from this software without
# specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Tests for :mod:`qfern.sync`."""

import io
import logging
import math

import numpy as np
import pytest

from qfern.core import (
    DirectedGraphError,
    DisconnectedGraphError,
    EmptyReportError,
    GraphParseError,
    InvalidParameterError,
    NonFiniteStateError,
    UncenteredFrequencyError,
    WeightedGraph,
)
from qfern.graph import complete_graph, cycle_graph, path_graph, random_dag, random_tree, star_graph
from qfern.spectral import decompose, laplacian, resistance_matrix
from qfern.sync import (
    FrequencyVector,
    SimulationConfig,
    StabilizerConfig,
    TargetPolicy,
    ThresholdPolicy,
    detect_desync_regions,
    einf_norm_condition,
    kuramoto_simulate,
    load_frequencies,
    parse_frequencies,
    place_stabilizer,
    stabilizer_targets,
    verify_synchronization,
    wrap_phase,
)


def scaled_to(g: WeightedGraph, omega: np.ndarray, target: float) -> FrequencyVector:
    """Rescale `omega` so that its E,∞ norm on `g` equals `target`."""
    einf = einf_norm_condition(g, omega).einf_norm
    return FrequencyVector.from_values(omega * (target / einf))


class TestFrequencyVector:
    def test_centers(self) -> None:
        freqs = FrequencyVector.from_values([1.0, 2.0, 3.0])
        np.testing.assert_allclose(freqs.omega, [-1.0, 0.0, 1.0])
        np.testing.assert_array_equal(freqs.original, [1.0, 2.0, 3.0])
        assert freqs.n == 3

    def test_uncentered(self) -> None:
        with pytest.raises(UncenteredFrequencyError):
            FrequencyVector.from_values([1.0, 2.0], center=False)
        freqs = FrequencyVector.from_values([0.5, -0.5], center=False)
        np.testing.assert_array_equal(freqs.omega, [0.5, -0.5])

    def test_non_finite(self) -> None:
        with pytest.raises(InvalidParameterError):
            FrequencyVector.from_values([0.0, math.inf])

    def test_random(self) -> None:
        freqs = FrequencyVector.random(20, 3)
        assert abs(freqs.omega.sum()) < 1e-12
        assert np.all(np.abs(freqs.original) <= 1.0)
        np.testing.assert_array_equal(freqs.original, FrequencyVector.random(20, 3).original)

    def test_parse(self) -> None:
        freqs = parse_frequencies(io.StringIO("# omega\n0.5\n\n-0.5  # second\n"))
        np.testing.assert_array_equal(freqs.original, [0.5, -0.5])

    def test_parse_error(self) -> None:
        with pytest.raises(GraphParseError) as exc_info:
            parse_frequencies(io.StringIO("0.5\nfast\n"))
        assert exc_info.value.lineno == 2

    def test_load_invalid_utf8(self, tmp_path) -> None:
        path = tmp_path / "omega.txt"
        path.write_bytes(b"0.1\n\xfe\n")
        with pytest.raises(GraphParseError, match="UTF-8") as exc_info:
            load_frequencies(path)
        assert exc_info.value.lineno == 2

    def test_load(self, tmp_path) -> None:
        path = tmp_path / "omega.txt"
        path.write_text("0.25\r\n-0.25\r\n")
        np.testing.assert_array_equal(load_frequencies(path).original, [0.25, -0.25])

    def test_write(self) -> None:
        out = io.StringIO()
        FrequencyVector.from_values([0.1, -0.1]).write(out)
        assert parse_frequencies(io.StringIO(out.getvalue())).original.tolist() == [0.1, -0.1]


class TestEinfNormCondition:
    def test_zero(self, barbell4) -> None:
        analysis = einf_norm_condition(barbell4, np.zeros(8))
        assert analysis.einf_norm == 0.0
        assert analysis.stable
        assert analysis.lambda2_bound == 0.0

    @pytest.mark.parametrize("a, stable", [(0.5, True), (0.99, True), (1.5, False)])
    def test_k2(self, k2, caplog, a: float, stable: bool) -> None:
        with caplog.at_level(logging.WARNING, logger="qfern.sync"):
            analysis = einf_norm_condition(k2, [a, -a])
        np.testing.assert_allclose(analysis.x, [a / 2, -a / 2], atol=1e-12)
        assert analysis.einf_norm == pytest.approx(a, abs=1e-12)
        assert analysis.stable == stable
        assert analysis.lambda2_bound == pytest.approx(a / math.sqrt(2))
        assert not analysis.lambda2_bound_holds
        assert analysis.resistance_bound == pytest.approx(a)
        assert "exceeds" in caplog.text

    def test_p3(self, p3) -> None:
        analysis = einf_norm_condition(p3, [1.0, 0.0, -1.0])
        np.testing.assert_allclose(analysis.x, [1.0, 0.0, -1.0], atol=1e-12)
        assert analysis.edges == ((0, 1), (1, 2))
        np.testing.assert_allclose(analysis.edge_diffs, [1.0, 1.0])

    def test_star_linear_solve(self, rng) -> None:
        g = star_graph(5)
        omega = FrequencyVector.from_values(rng.uniform(-1, 1, 5))
        L = laplacian(g)
        system = np.vstack([L, np.ones(5)])
        x = np.linalg.lstsq(system, np.append(omega.omega, 0.0), rcond=None)[0]
        expected = max(abs(x[e.u] - x[e.v]) for e in g.edges())
        analysis = einf_norm_condition(g, omega)
        assert analysis.einf_norm == pytest.approx(expected, abs=1e-10)
        np.testing.assert_allclose(analysis.x, x, atol=1e-10)

    def test_linear_in_omega(self, random_connected, rng) -> None:
        g = random_connected(9, weighted=True)
        omega = rng.uniform(-1, 1, 9)
        base = einf_norm_condition(g, omega).einf_norm
        for c in (0.5, 2.0, 7.0):
            assert einf_norm_condition(g, c * omega).einf_norm == pytest.approx(c * base)

    def test_resistance_bound(self, random_connected, rng) -> None:
        for _ in range(30):
            g = random_connected(int(rng.integers(3, 12)), weighted=True)
            analysis = einf_norm_condition(g, rng.uniform(-2, 2, g.n))
            assert analysis.einf_norm <= analysis.resistance_bound + 1e-12
            assert analysis.einf_norm == pytest.approx(analysis.edge_diffs.max())

    def test_centering(self, k2) -> None:
        assert einf_norm_condition(k2, [1.0, 1.0]).einf_norm == pytest.approx(0.0, abs=1e-15)
        with pytest.raises(UncenteredFrequencyError):
            einf_norm_condition(k2, [1.0, 1.0], center=False)

    def test_errors(self, k2) -> None:
        with pytest.raises(DisconnectedGraphError):
            einf_norm_condition(WeightedGraph.from_edges(3, [(0, 1, 1.0)]), [0.0] * 3)
        with pytest.raises(DirectedGraphError):
            einf_norm_condition(random_dag(3, 1.0, 0), [0.0] * 3)
        with pytest.raises(InvalidParameterError):
            einf_norm_condition(k2, [0.0] * 3)

    def test_to_dict(self, k2) -> None:
        data = einf_norm_condition(k2, [0.25, -0.25]).to_dict()
        assert data["einf_norm"] == 0.25
        assert data["stable"] is True
        assert data["edge_diffs"] == [[0, 1, 0.25]]


class TestDetectDesyncRegions:
    def test_k4_degenerate(self) -> None:
        policy = ThresholdPolicy.quantile(0.9)
        report = detect_desync_regions(complete_graph(4), np.zeros(4), policy)
        assert report.empty
        assert report.flagged_nodes == frozenset()

    def test_barbell_cross_pairs(self, barbell5) -> None:
        report = detect_desync_regions(barbell5, np.zeros(10), ThresholdPolicy.quantile(0.4))
        cross = {(u, v) for u in range(5) for v in range(5, 10)}
        assert {(u, v) for u, v, _ in report.flagged_pairs} == cross
        assert report.threshold == pytest.approx(0.4)
        assert report.flagged_nodes == frozenset(range(10))
        assert all(r > report.threshold for _, _, r in report.flagged_pairs)

    def test_barbell_high_quantile(self, barbell5) -> None:
        report = detect_desync_regions(barbell5, np.zeros(10), ThresholdPolicy.quantile(0.8))
        assert report.threshold == pytest.approx(1.8)
        assert report.empty

    def test_absolute(self, barbell4) -> None:
        everything = detect_desync_regions(barbell4, np.zeros(8), ThresholdPolicy.absolute(0.0))
        assert len(everything.flagged_pairs) == 28
        nothing = detect_desync_regions(barbell4, np.zeros(8), ThresholdPolicy.absolute(9.0))
        assert nothing.empty

    def test_phase_estimates(self, barbell4) -> None:
        omega = [1.0, 0, 0, 0, 0, 0, 0, -1.0]
        report = detect_desync_regions(barbell4, omega, ThresholdPolicy.absolute(1.5))
        assert report.phase_estimates[0, 7] == pytest.approx(4.0)
        assert report.phase_estimates[1, 6] == pytest.approx(0.0)
        assert {(u, v) for u, v, _ in report.flagged_pairs} == {
            (u, v) for u in range(3) for v in range(5, 8)
        }

    @pytest.mark.parametrize("q", [0.0, 1.0, 1.5, -0.2, math.nan])
    def test_invalid_quantile(self, q: float) -> None:
        with pytest.raises(InvalidParameterError):
            ThresholdPolicy.quantile(q)

    def test_outputs(self, barbell4) -> None:
        report = detect_desync_regions(barbell4, np.zeros(8), ThresholdPolicy.absolute(1.5))
        data = report.to_dict()
        assert data["phase_estimate_kind"] == "heuristic estimate"
        assert len(data["flagged_pairs"]) == 9
        assert data["flagged_pairs"][0] == {"u": 0, "v": 5, "R": 2.0, "phase_estimate": 0.0}
        out = io.StringIO()
        report.write_csv(out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "u,v,R,phase_estimate"
        assert lines[1] == "0,5,2,0"

    def test_disconnected(self) -> None:
        with pytest.raises(DisconnectedGraphError):
            detect_desync_regions(
                WeightedGraph.empty(3), np.zeros(3), ThresholdPolicy.absolute(0.0)
            )


class TestStabilizer:
    @pytest.fixture
    def report(self, barbell4):
        return detect_desync_regions(barbell4, np.zeros(8), ThresholdPolicy.quantile(0.4))

    def test_targets(self, report) -> None:
        assert stabilizer_targets(report, 2) == [0, 5]
        assert stabilizer_targets(report, 2, TargetPolicy.ROW_SUM) == [0, 1]
        assert stabilizer_targets(report, 8, TargetPolicy.SPREAD)[:2] == [0, 5]
        assert sorted(stabilizer_targets(report, 8)) == list(range(8))

    def test_fill_from_unflagged(self, barbell4) -> None:
        report = detect_desync_regions(barbell4, np.zeros(8), ThresholdPolicy.absolute(1.5))
        targets = stabilizer_targets(report, 8)
        assert set(targets[:6]) == {0, 1, 2, 5, 6, 7}
        assert set(targets[6:]) == {3, 4}

    @pytest.mark.parametrize("seed", range(10))
    def test_barbell_decrease(self, barbell4, report, seed: int) -> None:
        weight = float(np.random.default_rng(seed).uniform(0.5, 2.0))
        g2, delta_lambda2, delta_max_r = place_stabilizer(barbell4, report, 2, weight)
        assert g2.n == 9
        assert g2.weights[8, 0] == g2.weights[8, 5] == weight
        assert delta_max_r < 0
        before = report.resistance.values
        after = resistance_matrix(decompose(g2)).values[:8, :8]
        assert np.all(after <= before + 1e-12)
        assert report.max_flagged_resistance(resistance_matrix(decompose(g2))) < 2.0
        assert delta_lambda2 == pytest.approx(decompose(g2).lambda2 - decompose(barbell4).lambda2)

    def test_row_sum_monotone(self, barbell4, report) -> None:
        g2, _, delta_max_r = place_stabilizer(barbell4, report, 2, 1.0, TargetPolicy.ROW_SUM)
        assert delta_max_r <= 1e-12
        after = resistance_matrix(decompose(g2)).values[:8, :8]
        assert np.all(after <= report.resistance.values + 1e-12)

    def test_complete_all_targets(self) -> None:
        g = complete_graph(5)
        report = detect_desync_regions(g, np.zeros(5), ThresholdPolicy.absolute(0.0))
        g2, _, delta_max_r = place_stabilizer(g, report, 5, 1.0)
        after = resistance_matrix(decompose(g2)).values[:5, :5]
        off_diagonal = ~np.eye(5, dtype=bool)
        assert np.all(after[off_diagonal] < report.resistance.values[off_diagonal])
        assert delta_max_r < 0

    def test_tiny_weight(self, barbell4, report) -> None:
        _, delta_lambda2, delta_max_r = place_stabilizer(barbell4, report, 2, 1e-8)
        assert abs(delta_max_r) < 1e-6
        # The new node is almost isolated, so λ₂ collapses towards 0
        assert delta_lambda2 == pytest.approx(-decompose(barbell4).lambda2, abs=1e-6)

    def test_empty_report(self) -> None:
        g = complete_graph(4)
        report = detect_desync_regions(g, np.zeros(4), ThresholdPolicy.absolute(1.0))
        with pytest.raises(EmptyReportError):
            place_stabilizer(g, report, 2, 1.0)

    @pytest.mark.parametrize("k, weight", [(1, 1.0), (9, 1.0), (2, 0.0), (2, -1.0)])
    def test_invalid(self, barbell4, report, k: int, weight: float) -> None:
        with pytest.raises(InvalidParameterError):
            place_stabilizer(barbell4, report, k, weight)

    def test_config(self) -> None:
        assert StabilizerConfig().to_dict() == {"k": 2, "weight": 1.0, "policy": "spread"}
        with pytest.raises(InvalidParameterError):
            StabilizerConfig(k=1)
        with pytest.raises(InvalidParameterError):
            StabilizerConfig(weight=0.0)


class TestKuramoto:
    def test_fixed_point(self, barbell4) -> None:
        result = kuramoto_simulate(barbell4, np.zeros(8), np.zeros(8), 0.01, 1.0)
        assert result.locked
        assert result.max_edge_phase_diff == 0.0
        np.testing.assert_array_equal(result.theta_final, 0.0)

    def test_k2(self, k2) -> None:
        result = kuramoto_simulate(k2, [0.5, -0.5], [0.0, 0.0], 0.05, 100.0)
        assert result.locked
        assert result.max_edge_phase_diff == pytest.approx(math.asin(0.5), abs=1e-6)
        assert result.theta_final[0] - result.theta_final[1] == pytest.approx(math.pi / 6, abs=1e-6)

    def test_k2_drift(self, k2) -> None:
        result = kuramoto_simulate(k2, [1.5, -1.5], None, 0.05, 50.0)
        assert not result.locked
        assert result.frequency_spread > 1e-3

    def test_wrap_phase(self) -> None:
        np.testing.assert_allclose(
            wrap_phase([0.0, math.pi, -math.pi, 3 * math.pi / 2, 2 * math.pi]),
            [0.0, math.pi, math.pi, -math.pi / 2, 0.0],
            atol=1e-12,
        )

    def test_blow_up(self) -> None:
        g = WeightedGraph([[0.0, 1e300], [1e300, 0.0]])
        with pytest.raises(NonFiniteStateError):
            with np.errstate(all="ignore"):
                kuramoto_simulate(g, [0.5, -0.5], [0.1, 0.0], 1e10, 1e11)

    @pytest.mark.parametrize(
        "dt, t_max, theta0",
        [(0.0, 1.0, None), (-0.1, 1.0, None), (0.1, 0.1, None), (0.1, 1.0, [0.0])],
    )
    def test_invalid(self, k2, dt, t_max, theta0) -> None:
        with pytest.raises(InvalidParameterError):
            kuramoto_simulate(k2, [0.0, 0.0], theta0, dt, t_max)

    def test_disconnected(self) -> None:
        with pytest.raises(DisconnectedGraphError):
            kuramoto_simulate(WeightedGraph.empty(2), [0.0, 0.0])

    def test_config(self) -> None:
        config = SimulationConfig()
        assert (config.dt, config.t_max, config.lock_tol) == (0.01, 200.0, 1e-6)
        with pytest.raises(InvalidParameterError):
            SimulationConfig(dt=1.0, t_max=0.5)

    @pytest.mark.slow
    def test_trees_match_einf(self, rng) -> None:
        """On trees the simulator locks exactly when the E,∞ norm is below 1."""
        for instance in range(20):
            g = random_tree(int(rng.integers(4, 8)), seed=instance)
            omega = rng.uniform(-1, 1, g.n)
            for target in (0.5, 0.85, 1.2, 1.5):
                freqs = scaled_to(g, omega, target)
                analysis = einf_norm_condition(g, freqs)
                assert analysis.einf_norm == pytest.approx(target)
                assert analysis.einf_norm <= analysis.resistance_bound + 1e-12
                verification = verify_synchronization(g, freqs, dt=0.05, t_max=200.0)
                assert verification.acyclic
                assert verification.agrees, (instance, target)
                assert verification.stable == (target < 1)
                assert verification.locked == (target < 1)

    @pytest.mark.slow
    def test_cycle_sufficient(self, rng, caplog) -> None:
        g = cycle_graph(5)
        freqs = scaled_to(g, rng.uniform(-1, 1, 5), 0.4)
        with caplog.at_level(logging.WARNING, logger="qfern.sync"):
            verification = verify_synchronization(g, freqs, dt=0.05, t_max=100.0)
        assert not verification.acyclic
        assert verification.stable
        assert verification.locked
        assert verification.agrees
        assert "disagrees" not in caplog.text

    def test_verification_to_dict(self, k2) -> None:
        data = verify_synchronization(k2, [0.5, -0.5], dt=0.05, t_max=100.0).to_dict()
        assert data["stable"] is True
        assert data["locked"] is True
        assert data["agrees"] is True
        assert data["acyclic"] is True

    def test_path_default_step(self) -> None:
        result = kuramoto_simulate(path_graph(3), [0.3, 0.0, -0.3], t_max=60.0)
        assert result.locked
        assert result.max_edge_phase_diff == pytest.approx(math.asin(0.3), abs=1e-6)
