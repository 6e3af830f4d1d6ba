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

"""Laplacian, symmetric eigendecomposition, pseudoinverse and effective resistance.

Effective resistance has one canonical definition here: the quadratic form
``(e_u - e_v)ᵀ L⁺ (e_u - e_v)``, which equals the spectral sum
``Σ_{i≥2} (f⁽ⁱ⁾_u − f⁽ⁱ⁾_v)² / λᵢ`` over all non-trivial eigenpairs. The
spectral sum is what :func:`effective_resistance` evaluates;
:func:`resistance_via_pseudoinverse` evaluates the quadratic form so the two can
be cross-checked.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, TextIO, Tuple

import numpy as np
import scipy.linalg
import scipy.spatial.distance

from .core import (
    DEGENERACY_TOL,
    SIGN_TOL,
    SYMMETRY_TOL,
    ZERO_EIGENVALUE_TOL,
    ConvergenceError,
    DirectedGraphError,
    DisconnectedGraphError,
    InvalidNodeError,
    InvalidParameterError,
    Matrix,
    NonSymmetricError,
    Vector,
    WeightedGraph,
    format_float,
)
from .graph import symmetrize

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a symmetric Laplacian in ascending order.

    Column ``i`` of `eigenvectors` is the unit eigenvector for
    ``eigenvalues[i]``. Each column is sign-normalized so that its first
    component with magnitude above :data:`~qfern.core.SIGN_TOL` is positive.
    """

    eigenvalues: Vector
    eigenvectors: Matrix

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def lambda2(self) -> float:
        """Algebraic connectivity (second smallest eigenvalue)"""
        return float(self.eigenvalues[1])

    @property
    def fiedler(self) -> Vector:
        """Eigenvector of :attr:`lambda2`"""
        return self.eigenvectors[:, 1]

    @property
    def zero_count(self) -> int:
        """Number of eigenvalues treated as zero (equals the component count)"""
        return int(np.count_nonzero(self.eigenvalues <= ZERO_EIGENVALUE_TOL))

    @property
    def connected(self) -> bool:
        return self.zero_count == 1

    @property
    def degenerate_lambda2(self) -> bool:
        """Whether λ₂ is repeated, making the Fiedler vector basis-dependent"""
        return self.n > 2 and float(self.eigenvalues[2] - self.eigenvalues[1]) <= DEGENERACY_TOL

    def require_connected(self) -> None:
        """Raise :exc:`~qfern.core.DisconnectedGraphError` unless λ₂ > 0."""
        if self.n < 2 or not self.connected:
            raise DisconnectedGraphError("graph is not connected", self.zero_count)


@dataclass(frozen=True, eq=False)
class ResistanceMatrix:
    """All-pairs effective resistances (symmetric, zero diagonal)."""

    values: Matrix

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def pairs(self) -> Iterator[Tuple[int, int, float]]:
        """Unordered pairs ``(u, v, R_uv)`` with ``u < v``, in row-major order."""
        for u in range(self.n):
            for v in range(u + 1, self.n):
                yield u, v, float(self.values[u, v])

    def off_diagonal(self) -> Vector:
        """R_uv for ``u < v``, in the order of :meth:`pairs`."""
        return self.values[np.triu_indices(self.n, k=1)]

    def row_sums(self) -> Vector:
        return self.values.sum(axis=1)

    def average(self) -> Vector:
        """Average resistance from each node to every other node"""
        return self.row_sums() / max(self.n - 1, 1)

    def write_csv(self, stream: TextIO) -> None:
        """One row per node, comma-separated, 12 significant digits."""
        for row in self.values:
            stream.write(",".join(format_float(value) for value in row) + "\n")


def laplacian(g: WeightedGraph) -> Matrix:
    """Combinatorial Laplacian ``L = D − W``.

    Raises
    ------
    DirectedGraphError
        If `g` is directed (call :func:`~qfern.graph.symmetrize` first).
    """
    if g.directed:
        raise DirectedGraphError("laplacian requires an undirected graph")
    w = np.array(g.weights)
    return np.diag(w.sum(axis=1)) - w


def eig_sym(L: Matrix) -> SpectralDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    Raises
    ------
    NonSymmetricError
        If ``max|L − Lᵀ|`` exceeds :data:`~qfern.core.SYMMETRY_TOL`
    ConvergenceError
        If the LAPACK driver fails to converge
    """
    L = np.asarray(L, dtype=np.float64)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, not {L.shape}")
    asymmetry = float(np.max(np.abs(L - L.T))) if L.size else 0.0
    if asymmetry > SYMMETRY_TOL:
        raise NonSymmetricError(f"matrix is not symmetric (max asymmetry {asymmetry:.3g})")
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh((L + L.T) / 2)
    except np.linalg.LinAlgError as error:
        raise ConvergenceError(f"eigensolver failed: {error}") from error
    logger.debug("Decomposed %dx%d matrix, λ₁=%g", L.shape[0], L.shape[0], eigenvalues[0])
    for i in range(eigenvectors.shape[1]):
        column = eigenvectors[:, i]
        significant = np.flatnonzero(np.abs(column) > SIGN_TOL)
        if significant.size and column[significant[0]] < 0:
            eigenvectors[:, i] = -column
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return SpectralDecomposition(eigenvalues, eigenvectors)


def laplacian_of(g: WeightedGraph) -> Matrix:
    """Laplacian of `g`, symmetrizing directed graphs first."""
    return laplacian(symmetrize(g))


def decompose(g: WeightedGraph) -> SpectralDecomposition:
    """Decompose the Laplacian of `g`, symmetrizing directed graphs first."""
    return eig_sym(laplacian_of(g))


def pseudoinverse(L: Matrix, decomp: SpectralDecomposition) -> Matrix:
    """Moore–Penrose pseudoinverse ``L⁺ = Σ_{i≥2} f⁽ⁱ⁾ f⁽ⁱ⁾ᵀ / λᵢ``.

    Raises
    ------
    DisconnectedGraphError
        If more than one eigenvalue is (numerically) zero
    """
    if np.shape(L) != (decomp.n, decomp.n):
        raise InvalidParameterError(f"L has shape {np.shape(L)}, expected {(decomp.n,) * 2}")
    decomp.require_connected()
    vectors = decomp.eigenvectors[:, 1:]
    return (vectors / decomp.eigenvalues[1:]) @ vectors.T


def effective_resistance(decomp: SpectralDecomposition, u: int, v: int) -> float:
    """Effective resistance ``Σ_{i≥2} (f⁽ⁱ⁾_u − f⁽ⁱ⁾_v)² / λᵢ`` between `u` and `v`.

    Raises
    ------
    DisconnectedGraphError
        If the graph is not connected
    InvalidNodeError
        If `u` or `v` is not a node id
    """
    decomp.require_connected()
    for node in (u, v):
        if not 0 <= node < decomp.n:
            raise InvalidNodeError(f"node {node} is outside [0, {decomp.n})")
    diff = decomp.eigenvectors[u, 1:] - decomp.eigenvectors[v, 1:]
    return float(np.sum(diff * diff / decomp.eigenvalues[1:]))


def resistance_via_pseudoinverse(lplus: Matrix, u: int, v: int) -> float:
    """Evaluate the quadratic form ``(e_u − e_v)ᵀ L⁺ (e_u − e_v)``."""
    return float(lplus[u, u] + lplus[v, v] - 2 * lplus[u, v])


def resistance_matrix(decomp: SpectralDecomposition) -> ResistanceMatrix:
    """All-pairs effective resistance.

    Each node is embedded at ``(f⁽ⁱ⁾_u / √λᵢ)_{i≥2}``; R_uv is the squared
    Euclidean distance between embeddings, which is the spectral sum of
    :func:`effective_resistance` evaluated for every pair at once.
    """
    decomp.require_connected()
    embedding = decomp.eigenvectors[:, 1:] / np.sqrt(decomp.eigenvalues[1:])
    values = scipy.spatial.distance.squareform(
        scipy.spatial.distance.pdist(embedding, "sqeuclidean")
    )
    values.setflags(write=False)
    return ResistanceMatrix(values)


def total_effective_resistance(rm: ResistanceMatrix) -> float:
    """Sum of R_uv over ordered pairs (each unordered pair counted twice)."""
    return float(np.sum(rm.values))


def average_resistance(rm: ResistanceMatrix) -> Vector:
    return rm.average()
