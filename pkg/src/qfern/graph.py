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

"""Graph generation, symmetrization, connectivity, file I/O and DOT export.

Graph file format
-----------------
Text, one record per line. ``#`` starts a comment and blank lines are
ignored. The first record is the header ``n <count> directed|undirected``;
each following record is an edge ``u v w``. Undirected edges are written once
(``u < v``). Weights are written with :func:`repr` so that
``load_graph(save_graph(g))`` reproduces `g` bit for bit.
"""

import io
import logging
import math
import os
from pathlib import Path
from typing import Collection, Iterable, Iterator, List, Optional, Sequence, TextIO, Union

import networkx as nx
import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from .core import (
    EdgeList,
    GraphParseError,
    InvalidParameterError,
    WeightedGraph,
    check_nodes,
)

logger = logging.getLogger(__name__)
PathLike = Union[str, "os.PathLike[str]"]
#: Number of colour buckets used by :func:`export_dot`
DOT_BUCKETS = 5
#: Largest node count accepted in a graph file header
MAX_FILE_NODES = 10_000
_HEADER_HINT = "expected header 'n <count> directed|undirected'"


def random_dag(n: int, p: float, seed: int) -> WeightedGraph:
    """Generate a random directed acyclic graph.

    Each edge ``i -> j`` with ``i < j`` is present with weight 1 independently
    with probability `p`. The adjacency matrix is strictly upper triangular,
    so the result is acyclic by construction. The same ``(n, p, seed)``
    always produces the same graph.

    Raises
    ------
    InvalidParameterError
        If ``n < 2``, `p` is outside [0, 1] or `seed` is negative.
    """
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2, not {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must be in [0, 1], not {p}")
    if seed < 0:
        raise InvalidParameterError(f"seed must be non-negative, not {seed}")
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    return WeightedGraph(np.triu(mask, k=1).astype(np.float64), directed=True)


def random_tree(n: int, seed: int, weight: float = 1.0) -> WeightedGraph:
    """Random recursive tree: node ``i`` attaches to a uniform node in ``[0, i)``."""
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2, not {n}")
    rng = np.random.default_rng(seed)
    edges = [(int(rng.integers(0, i)), i, weight) for i in range(1, n)]
    return WeightedGraph.from_edges(n, edges)


def symmetrize(g: WeightedGraph) -> WeightedGraph:
    """Return the undirected graph with weights ``(W + Wᵀ) / 2``."""
    if not g.directed:
        return g
    w = g.weights
    return WeightedGraph((w + w.T) / 2, directed=False)


def connected_components(g: WeightedGraph) -> np.ndarray:
    """Component label of each node in the underlying undirected graph.

    Labels are numbered in order of first appearance, so node 0 always has
    label 0.
    """
    adjacency = scipy.sparse.csr_matrix(g.weights)
    _, labels = scipy.sparse.csgraph.connected_components(
        adjacency, directed=True, connection="weak"
    )
    # Renumber so that labels follow node order
    order = {}
    for label in labels:
        order.setdefault(int(label), len(order))
    return np.array([order[int(label)] for label in labels], dtype=np.intp)


def component_count(g: WeightedGraph) -> int:
    return int(connected_components(g).max()) + 1


def is_connected(g: WeightedGraph) -> bool:
    """Whether the underlying undirected graph has a single component."""
    return component_count(g) == 1


def add_node(g: WeightedGraph, neighbours: Collection[int], weight: float) -> WeightedGraph:
    """Grow `g` by one node (id ``g.n``) joined to `neighbours` with `weight`.

    For directed graphs the new edges point from the new node.
    """
    if weight <= 0:
        raise InvalidParameterError(f"weight must be positive, not {weight}")
    targets = check_nodes(g, list(neighbours))
    n = g.n
    grown = np.zeros((n + 1, n + 1))
    grown[:n, :n] = g.weights
    for target in targets:
        grown[n, target] = weight
        if not g.directed:
            grown[target, n] = weight
    return g.with_weights(grown)


def edge_list(g: WeightedGraph) -> EdgeList:
    return EdgeList.from_graph(g)


def from_edge_list(edges: EdgeList) -> WeightedGraph:
    return edges.to_graph()


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.path_graph(n))


def cycle_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.cycle_graph(n))


def complete_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.complete_graph(n))


def star_graph(n: int) -> WeightedGraph:
    """Star with `n` nodes in total; node 0 is the hub."""
    return WeightedGraph.from_networkx(nx.star_graph(n - 1))


def barbell_graph(m: int) -> WeightedGraph:
    """Two copies of ``K_m`` (nodes ``0..m-1`` and ``m..2m-1``) joined by edge ``(m-1, m)``."""
    return WeightedGraph.from_networkx(nx.barbell_graph(m, 0))


def format_graph(g: WeightedGraph) -> str:
    """Serialize `g` in the graph file format."""
    out = io.StringIO()
    write_graph(g, out)
    return out.getvalue()


def write_graph(g: WeightedGraph, stream: TextIO) -> None:
    kind = "directed" if g.directed else "undirected"
    stream.write(f"n {g.n} {kind}\n")
    for edge in g.edges():
        stream.write(f"{edge.u} {edge.v} {edge.w!r}\n")


def save_graph(g: WeightedGraph, path: PathLike) -> None:
    """Write `g` to `path`.

    Raises
    ------
    OSError
        If the file cannot be written
    """
    with open(path, "w", encoding="utf-8") as f:
        write_graph(g, f)


def parse_graph(lines: Iterable[str]) -> WeightedGraph:
    """Parse the graph file format.

    Raises
    ------
    GraphParseError
        If a line is malformed or the header names more than
        :data:`MAX_FILE_NODES` nodes, with the 1-based line number.
    """
    n: Optional[int] = None
    directed = False
    matrix: Optional[np.ndarray] = None
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 3 or fields[0] != "n":
                raise GraphParseError(_HEADER_HINT, lineno, raw)
            try:
                n = int(fields[1])
            except ValueError:
                raise GraphParseError(f"invalid node count {fields[1]!r}", lineno, raw) from None
            if n < 1:
                raise GraphParseError(f"node count must be positive, not {n}", lineno, raw)
            if n > MAX_FILE_NODES:
                raise GraphParseError(
                    f"node count {n} exceeds the limit of {MAX_FILE_NODES}", lineno, raw
                )
            if fields[2] not in {"directed", "undirected"}:
                raise GraphParseError(f"invalid graph kind {fields[2]!r}", lineno, raw)
            directed = fields[2] == "directed"
            matrix = np.zeros((n, n))
            continue
        assert matrix is not None
        if len(fields) != 3:
            raise GraphParseError(f"expected 'u v w', got {len(fields)} fields", lineno, raw)
        try:
            u = int(fields[0])
            v = int(fields[1])
            w = float(fields[2])
        except ValueError as error:
            raise GraphParseError(str(error), lineno, raw) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"node id outside [0, {n})", lineno, raw)
        if u == v:
            raise GraphParseError(f"self-loop on node {u}", lineno, raw)
        if not math.isfinite(w) or w < 0:
            raise GraphParseError(f"weight must be finite and non-negative, not {w}", lineno, raw)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge ({u}, {v})", lineno, raw)
        seen.add(key)
        matrix[u, v] = w
        if not directed:
            matrix[v, u] = w
    if matrix is None:
        raise GraphParseError("missing header", 1)
    return WeightedGraph(matrix, directed)


def read_lines(path: PathLike) -> Iterator[str]:
    """Yield the lines of a UTF-8 text file.

    Raises
    ------
    GraphParseError
        If a line is not valid UTF-8, with its 1-based line number
    OSError
        If the file cannot be read
    """
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError as error:
                raise GraphParseError(f"invalid UTF-8 ({error.reason})", lineno) from None


def load_graph(path: PathLike) -> WeightedGraph:
    """Read a graph file.

    Raises
    ------
    GraphParseError
        If the file is malformed
    OSError
        If the file cannot be read
    """
    g = parse_graph(read_lines(path))
    logger.debug("Loaded %r from %s", g, Path(path))
    return g


def quantile_buckets(values: Sequence[float], buckets: int = DOT_BUCKETS) -> List[int]:
    """Assign each value a bucket in ``1..buckets`` by quantile binning."""
    data = np.asarray(values, dtype=np.float64)
    cuts = np.quantile(data, np.arange(1, buckets) / buckets)
    return [int(b) + 1 for b in np.searchsorted(cuts, data, side="left")]


def export_dot(
    g: WeightedGraph,
    node_attrs: Optional[Sequence[float]] = None,
    *,
    highlight: Collection[int] = (),
    stabilizers: Collection[int] = (),
    name: str = "G",
) -> str:
    """Render `g` as Graphviz DOT text.

    Parameters
    ----------
    g
        Graph to render
    node_attrs
        Optional scalar per node (e.g. average effective resistance). Each node
        is then labelled with its value and filled with one of
        :data:`DOT_BUCKETS` colours chosen by quantile binning.
    highlight
        Nodes drawn with a thick red outline (e.g. flagged desync nodes)
    stabilizers
        Nodes drawn as double circles (inserted stabilizer nodes)
    name
        Graph identifier

    Raises
    ------
    InvalidParameterError
        If `node_attrs` does not have one entry per node
    """
    if node_attrs is not None and len(node_attrs) != g.n:
        raise InvalidParameterError(f"node_attrs has {len(node_attrs)} entries, expected {g.n}")
    highlight = set(check_nodes(g, list(highlight)))
    stabilizers = set(check_nodes(g, list(stabilizers)))
    keyword, connector = ("digraph", "->") if g.directed else ("graph", "--")
    lines = [f"{keyword} {name} {{", "  node [shape=circle];"]
    buckets = quantile_buckets(node_attrs) if node_attrs is not None else None
    for node in range(g.n):
        attrs = []
        if node_attrs is not None and buckets is not None:
            attrs.append(f'label="{node}\\n{float(node_attrs[node]):.4g}"')
            attrs.append(f"colorscheme=ylorrd{DOT_BUCKETS}")
            attrs.append("style=filled")
            attrs.append(f"fillcolor={buckets[node]}")
        if node in highlight:
            attrs.extend(["color=red", "penwidth=3"])
        if node in stabilizers:
            attrs.extend(["shape=doublecircle", 'xlabel="stabilizer"'])
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {node}{suffix};")
    edges = g.edges()
    max_weight = max((edge.w for edge in edges), default=0.0)
    uniform = all(edge.w == max_weight for edge in edges)
    for edge in edges:
        if uniform:
            lines.append(f"  {edge.u} {connector} {edge.v};")
        else:
            width = 0.5 + 2.5 * edge.w / max_weight
            lines.append(
                f'  {edge.u} {connector} {edge.v} [label="{edge.w:.3g}", penwidth={width:.3g}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
