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

"""Tests for :mod:`qfern.spectral`."""

import io
import itertools
import math

import numpy as np
import pytest

from qfern.core import (
    DirectedGraphError,
    DisconnectedGraphError,
    InvalidNodeError,
    NonSymmetricError,
    WeightedGraph,
)
from qfern.graph import complete_graph, path_graph, random_dag
from qfern.spectral import (
    average_resistance,
    decompose,
    effective_resistance,
    eig_sym,
    laplacian,
    laplacian_of,
    pseudoinverse,
    resistance_matrix,
    resistance_via_pseudoinverse,
    total_effective_resistance,
)

SQRT_HALF = math.sqrt(0.5)


def grounded_resistance(g: WeightedGraph, u: int, v: int) -> float:
    """Solve ``L x = e_u − e_v`` with ``Σx = 0`` by least squares."""
    L = laplacian(g)
    rhs = np.zeros(g.n)
    rhs[u] = 1.0
    rhs[v] = -1.0
    system = np.vstack([L, np.ones(g.n)])
    x = np.linalg.lstsq(system, np.append(rhs, 0.0), rcond=None)[0]
    return float(x[u] - x[v])


class TestLaplacian:
    def test_k2(self, k2) -> None:
        np.testing.assert_array_equal(laplacian(k2), [[1, -1], [-1, 1]])

    def test_p3(self, p3) -> None:
        np.testing.assert_array_equal(laplacian(p3), [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])

    def test_random(self, random_connected) -> None:
        L = laplacian(random_connected(8, weighted=True))
        np.testing.assert_allclose(L.sum(axis=1), 0, atol=1e-12)
        np.testing.assert_array_equal(L, L.T)

    def test_directed(self) -> None:
        g = random_dag(4, 1.0, 0)
        with pytest.raises(DirectedGraphError):
            laplacian(g)
        np.testing.assert_array_equal(laplacian_of(g), laplacian_of(g).T)


class TestEigSym:
    def test_k2(self, k2) -> None:
        decomp = eig_sym(laplacian(k2))
        np.testing.assert_allclose(decomp.eigenvalues, [0, 2], atol=1e-12)
        np.testing.assert_allclose(decomp.fiedler, [SQRT_HALF, -SQRT_HALF], atol=1e-12)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_complete(self, n: int) -> None:
        decomp = decompose(complete_graph(n))
        assert decomp.lambda2 == pytest.approx(n)
        np.testing.assert_allclose(decomp.eigenvalues[1:], n)
        assert decomp.degenerate_lambda2

    def test_p3(self, p3) -> None:
        decomp = decompose(p3)
        np.testing.assert_allclose(decomp.eigenvalues, [0, 1, 3], atol=1e-12)
        # Characteristic polynomial of L(P₃) is −λ(λ − 1)(λ − 3)
        for value in decomp.eigenvalues:
            assert np.linalg.det(laplacian(p3) - value * np.eye(3)) == pytest.approx(0, abs=1e-9)
        assert not decomp.degenerate_lambda2

    def test_residuals(self, rng, random_connected) -> None:
        for _ in range(100):
            g = random_connected(int(rng.integers(2, 17)))
            L = laplacian(g)
            decomp = eig_sym(L)
            residual = L @ decomp.eigenvectors - decomp.eigenvectors * decomp.eigenvalues
            assert np.max(np.abs(residual)) <= 1e-8
            np.testing.assert_allclose(
                decomp.eigenvectors.T @ decomp.eigenvectors, np.eye(g.n), atol=1e-10
            )
            assert np.all(np.diff(decomp.eigenvalues) >= -1e-12)

    def test_sign_convention(self, random_connected) -> None:
        decomp = decompose(random_connected(9))
        for column in decomp.eigenvectors.T:
            first = column[np.flatnonzero(np.abs(column) > 1e-12)[0]]
            assert first > 0

    def test_non_symmetric(self) -> None:
        with pytest.raises(NonSymmetricError):
            eig_sym(np.array([[1.0, -1.0], [-0.5, 0.5]]))

    def test_read_only(self, p3) -> None:
        decomp = decompose(p3)
        with pytest.raises(ValueError):
            decomp.eigenvalues[0] = 1.0

    def test_disconnected(self) -> None:
        decomp = decompose(WeightedGraph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]))
        assert decomp.zero_count == 2
        assert not decomp.connected
        assert decomp.lambda2 == pytest.approx(0, abs=1e-12)
        with pytest.raises(DisconnectedGraphError, match="2 components"):
            decomp.require_connected()


class TestPseudoinverse:
    def test_k2(self, k2) -> None:
        L = laplacian(k2)
        lplus = pseudoinverse(L, eig_sym(L))
        np.testing.assert_allclose(lplus, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-12)

    def test_penrose(self, random_connected) -> None:
        g = random_connected(10, weighted=True)
        L = laplacian(g)
        lplus = pseudoinverse(L, eig_sym(L))
        projector = np.eye(g.n) - np.ones((g.n, g.n)) / g.n
        np.testing.assert_allclose(L @ lplus, projector, atol=1e-8)
        np.testing.assert_allclose(L @ lplus @ L, L, atol=1e-8)
        np.testing.assert_allclose(lplus @ L @ lplus, lplus, atol=1e-8)
        np.testing.assert_allclose(lplus, lplus.T, atol=1e-12)
        np.testing.assert_allclose(lplus, np.linalg.pinv(L), atol=1e-8)

    def test_disconnected(self) -> None:
        L = laplacian(WeightedGraph.empty(3))
        with pytest.raises(DisconnectedGraphError):
            pseudoinverse(L, eig_sym(L))


class TestResistance:
    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    def test_path_ends(self, n: int) -> None:
        decomp = decompose(path_graph(n))
        assert effective_resistance(decomp, 0, n - 1) == pytest.approx(n - 1, abs=1e-9)

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_complete(self, n: int) -> None:
        rm = resistance_matrix(decompose(complete_graph(n)))
        for _, _, r in rm.pairs():
            assert r == pytest.approx(2 / n, abs=1e-9)

    def test_k2_matrix(self, k2) -> None:
        rm = resistance_matrix(decompose(k2))
        np.testing.assert_allclose(rm.values, [[0, 1], [1, 0]], atol=1e-12)
        assert total_effective_resistance(rm) == pytest.approx(2.0)

    def test_p3_matrix(self, p3) -> None:
        rm = resistance_matrix(decompose(p3))
        assert rm.values[0, 2] == pytest.approx(2.0)
        assert rm.values[0, 1] == pytest.approx(1.0)
        assert rm.values[1, 2] == pytest.approx(1.0)
        assert total_effective_resistance(rm) == pytest.approx(8.0)
        np.testing.assert_allclose(average_resistance(rm), [1.5, 1.0, 1.5])

    def test_barbell(self, barbell4) -> None:
        rm = resistance_matrix(decompose(barbell4))
        assert rm.values[0, 1] == pytest.approx(0.5)
        assert rm.values[3, 4] == pytest.approx(1.0)
        assert rm.values[0, 7] == pytest.approx(2.0)
        assert sum(r for _, _, r in rm.pairs()) == pytest.approx(34.0)
        assert total_effective_resistance(rm) == pytest.approx(68.0)

    def test_equivalence(self, random_connected) -> None:
        for _ in range(50):
            g = random_connected(7, weighted=True)
            L = laplacian(g)
            decomp = eig_sym(L)
            lplus = pseudoinverse(L, decomp)
            rm = resistance_matrix(decomp)
            for u, v, r in rm.pairs():
                spectral = effective_resistance(decomp, u, v)
                assert resistance_via_pseudoinverse(lplus, u, v) == pytest.approx(
                    spectral, abs=1e-9
                )
                assert r == pytest.approx(spectral, abs=1e-9)
                assert grounded_resistance(g, u, v) == pytest.approx(spectral, abs=1e-8)

    def test_metric(self, random_connected) -> None:
        values = resistance_matrix(decompose(random_connected(8, weighted=True))).values
        np.testing.assert_allclose(values, values.T, atol=1e-12)
        np.testing.assert_array_equal(np.diag(values), 0)
        for a, b, c in itertools.permutations(range(8), 3):
            assert values[a, c] <= values[a, b] + values[b, c] + 1e-9

    def test_kirchhoff(self, random_connected) -> None:
        for n in (5, 8, 11):
            decomp = decompose(random_connected(n, weighted=True))
            rm = resistance_matrix(decomp)
            expected = n * np.sum(1 / decomp.eigenvalues[1:])
            assert rm.off_diagonal().sum() == pytest.approx(expected, rel=1e-9)

    def test_rayleigh_monotonicity(self, random_connected) -> None:
        g = random_connected(8, p=0.3)
        weights = np.array(g.weights)
        u, v = next((u, v) for u in range(8) for v in range(u + 1, 8) if weights[u, v] == 0)
        weights[u, v] = weights[v, u] = 1.0
        before = resistance_matrix(decompose(g)).values
        after = resistance_matrix(decompose(g.with_weights(weights))).values
        assert np.all(after <= before + 1e-12)
        assert after[u, v] < before[u, v]

    def test_invalid_node(self, p3) -> None:
        with pytest.raises(InvalidNodeError):
            effective_resistance(decompose(p3), 0, 3)

    def test_write_csv(self, k2) -> None:
        out = io.StringIO()
        resistance_matrix(decompose(k2)).write_csv(out)
        rows = [[float(x) for x in line.split(",")] for line in out.getvalue().splitlines()]
        np.testing.assert_allclose(rows, [[0, 1], [1, 0]], atol=1e-11)
