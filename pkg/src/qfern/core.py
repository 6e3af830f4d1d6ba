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

"""Graph representation, error hierarchy and numeric tolerances shared by all modules."""

import logging
import os
from dataclasses import dataclass
from typing import Any, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from typing_extensions import Self, TypeAlias

logger = logging.getLogger(__name__)

#: Eigenvalues at or below this are treated as zero
ZERO_EIGENVALUE_TOL = 1e-9
#: Maximum asymmetry accepted by the symmetric eigensolver
SYMMETRY_TOL = 1e-12
#: Components smaller than this are skipped when fixing eigenvector signs
SIGN_TOL = 1e-12
#: λ₂ is reported as degenerate when λ₃ − λ₂ is at most this
DEGENERACY_TOL = 1e-9
#: Environment variable capping internal thread parallelism
THREADS_ENV = "QFERN_THREADS"
#: Format used for every float written to JSON or CSV (12 significant digits)
FLOAT_FORMAT = ".12g"

Matrix: TypeAlias = np.ndarray
Vector: TypeAlias = np.ndarray


class InvalidParameterError(ValueError):
    """A parameter is outside its documented range."""


class GraphParseError(ValueError):
    """Raised by the graph file parser when encountering a malformed line."""

    def __init__(self, message: str, lineno: int, line: Optional[str] = None) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.line = line


class GraphStructureError(ValueError):
    """The graph does not have the structure an operation requires."""


class DirectedGraphError(GraphStructureError):
    """An undirected graph was required (symmetrize first)."""


class DisconnectedGraphError(GraphStructureError):
    """The graph (or its underlying undirected graph) is not connected.

    Parameters
    ----------
    message
        Description of the failure
    components
        Number of connected components, if known
    """

    def __init__(self, message: str, components: Optional[int] = None) -> None:
        if components is not None:
            message = f"{message} ({components} components)"
        super().__init__(message)
        self.components = components


class NoCandidateEdgesError(GraphStructureError):
    """No absent edge crosses the bipartition, so nothing can be added."""


class EmptyReportError(GraphStructureError):
    """A desynchronization report with no flagged pairs was given."""


class GraphTooLargeError(GraphStructureError):
    """Exhaustive enumeration was requested on a graph that is too large."""


class InvalidNodeError(IndexError):
    """A node id is outside ``[0, n)``."""


class NonSymmetricError(ValueError):
    """A matrix that must be symmetric is not."""


class UncenteredFrequencyError(ValueError):
    """Natural frequencies do not sum to zero and centering was disabled."""


class ConvergenceError(ArithmeticError):
    """The eigensolver failed to converge."""


class NonFiniteStateError(ArithmeticError):
    """A simulated state became NaN or infinite (usually dt is too large)."""


class Edge(NamedTuple):
    """A single weighted edge ``u -> v`` (or ``u -- v`` in an undirected graph)."""

    u: int
    v: int
    w: float


class WeightedGraph:
    """An immutable graph stored as a dense weighted adjacency matrix.

    Parameters
    ----------
    weights
        Square matrix of non-negative, finite edge weights with zero diagonal.
        It is copied, and the copy is made read-only.
    directed
        If false, `weights` must be exactly symmetric.

    Raises
    ------
    InvalidParameterError
        If `weights` violates any of the invariants above.
    """

    __slots__ = ["_weights", "_directed"]

    def __init__(self, weights: Any, directed: bool = False) -> None:
        matrix = np.array(weights, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidParameterError(f"weights must be a square matrix, not {matrix.shape}")
        if matrix.shape[0] < 1:
            raise InvalidParameterError("graph must have at least one node")
        if not np.all(np.isfinite(matrix)):
            raise InvalidParameterError("weights must be finite")
        if np.any(matrix < 0):
            raise InvalidParameterError("weights must be non-negative")
        if np.any(np.diag(matrix) != 0):
            raise InvalidParameterError("self-loops are not allowed")
        if not directed and not np.array_equal(matrix, matrix.T):
            raise InvalidParameterError("undirected graph must have symmetric weights")
        matrix.setflags(write=False)
        self._weights = matrix
        self._directed = bool(directed)

    @property
    def n(self) -> int:
        """Number of nodes"""
        return self._weights.shape[0]

    @property
    def weights(self) -> Matrix:
        """Read-only weighted adjacency matrix"""
        return self._weights

    @property
    def directed(self) -> bool:
        return self._directed

    @classmethod
    def empty(cls, n: int, directed: bool = False) -> Self:
        return cls(np.zeros((n, n)), directed)

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Tuple[int, int, float]], directed: bool = False
    ) -> Self:
        """Build a graph from ``(u, v, w)`` triples.

        For undirected graphs each edge sets both ``weights[u][v]`` and
        ``weights[v][u]``.

        Raises
        ------
        InvalidNodeError
            If a node id is out of range
        InvalidParameterError
            If an edge is repeated or is a self-loop
        """
        matrix = np.zeros((n, n))
        seen = set()
        for u, v, w in edges:
            u = _check_node(u, n)
            v = _check_node(v, n)
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in seen:
                raise InvalidParameterError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            if u == v:
                raise InvalidParameterError(f"self-loop on node {u}")
            matrix[u, v] = w
            if not directed:
                matrix[v, u] = w
        return cls(matrix, directed)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, weight: str = "weight") -> Self:
        """Convert a networkx graph. Nodes are renumbered in sorted order.

        Edges without a `weight` attribute get weight 1.
        """
        nodelist = sorted(graph.nodes())
        matrix = nx.to_numpy_array(graph, nodelist=nodelist, weight=weight, dtype=np.float64)
        return cls(matrix, graph.is_directed())

    def to_networkx(self) -> nx.Graph:
        create_using = nx.DiGraph if self._directed else nx.Graph
        return nx.from_numpy_array(self._weights, create_using=create_using)

    def edges(self) -> List[Edge]:
        """Edges with non-zero weight, in row-major order.

        Undirected edges are listed once, with ``u < v``.
        """
        if self._directed:
            rows, cols = np.nonzero(self._weights)
        else:
            rows, cols = np.nonzero(np.triu(self._weights))
        return [Edge(int(u), int(v), float(self._weights[u, v])) for u, v in zip(rows, cols)]

    @property
    def num_edges(self) -> int:
        if self._directed:
            return int(np.count_nonzero(self._weights))
        return int(np.count_nonzero(np.triu(self._weights)))

    def degrees(self) -> Vector:
        """Weighted (out-)degree of each node"""
        return self._weights.sum(axis=1)

    def with_weights(self, weights: Any) -> Self:
        """Return a graph with the same directedness and new weights."""
        return type(self)(weights, self._directed)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._directed == other._directed and np.array_equal(
            self._weights, other._weights
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self) -> int:
        return hash((self._directed, self._weights.shape, self._weights.tobytes()))

    def __repr__(self) -> str:
        kind = "directed" if self._directed else "undirected"
        return f"<WeightedGraph n={self.n} edges={self.num_edges} {kind}>"


@dataclass(frozen=True)
class EdgeList:
    """Serialization form of a :class:`WeightedGraph`.

    Raises
    ------
    InvalidNodeError
        If a node id is outside ``[0, n)``
    InvalidParameterError
        If a ``(u, v)`` pair is repeated
    """

    n: int
    edges: Tuple[Edge, ...]
    directed: bool = False

    def __post_init__(self) -> None:
        seen = set()
        for edge in self.edges:
            _check_node(edge.u, self.n)
            _check_node(edge.v, self.n)
            key = (edge.u, edge.v) if self.directed else tuple(sorted((edge.u, edge.v)))
            if key in seen:
                raise InvalidParameterError(f"duplicate edge ({edge.u}, {edge.v})")
            seen.add(key)

    @classmethod
    def from_graph(cls, g: WeightedGraph) -> Self:
        return cls(g.n, tuple(g.edges()), g.directed)

    def to_graph(self) -> WeightedGraph:
        return WeightedGraph.from_edges(self.n, self.edges, self.directed)


def _check_node(node: Any, n: int) -> int:
    node = int(node)
    if not 0 <= node < n:
        raise InvalidNodeError(f"node {node} is outside [0, {n})")
    return node


def check_nodes(g: WeightedGraph, nodes: Sequence[int]) -> List[int]:
    """Validate node ids against `g`, returning them as plain ints."""
    return [_check_node(node, g.n) for node in nodes]


def thread_limit() -> int:
    """Maximum number of worker threads, from :envvar:`QFERN_THREADS`.

    Defaults to the CPU count. Invalid values fall back to 1 with a warning.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
        if value < 1:
            raise ValueError(raw)
    except ValueError:
        logger.warning("Ignoring invalid %s=%r, using 1 thread", THREADS_ENV, raw)
        return 1
    return value


def format_float(value: float) -> str:
    """Format a float for JSON/CSV output with :data:`FLOAT_FORMAT`."""
    return format(float(value), FLOAT_FORMAT)


def round_float(value: float) -> float:
    """Round `value` to the precision written by :func:`format_float`."""
    return float(format_float(value))
