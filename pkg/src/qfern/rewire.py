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

"""Fiedler-gradient soft adjacency update and the Cheeger/resistance rewiring loop.

The soft update is a single projected gradient step on the adjacency
matrix: ``A_soft ← A + α·G`` with ``G[i][j] = −f[i]·f[j]`` for the Fiedler
vector ``f``, followed by projection back onto symmetric, non-negative,
zero-diagonal matrices. Across the Fiedler cut ``f[i]·f[j] < 0``, so the
step adds weight exactly where the bottleneck is.

The rewiring loop swaps one edge per iteration: a random edge is removed and
the absent edge across the Fiedler bipartition that maximizes the Cheeger
constant is added. The swap is kept only if the graph stays connected and
``(h, −R_total)`` improves lexicographically.
"""

import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, TextIO, Tuple

import numpy as np

from .core import (
    DisconnectedGraphError,
    InvalidParameterError,
    Matrix,
    NoCandidateEdgesError,
    Vector,
    WeightedGraph,
    format_float,
    round_float,
)
from .cuts import MAX_EXACT_NODES, cheeger, cheeger_after_addition, fiedler_bipartition
from .graph import component_count, connected_components, symmetrize
from .spectral import decompose, resistance_matrix, total_effective_resistance

logger = logging.getLogger(__name__)
#: Relative tolerance under which two Cheeger values count as equal
_H_TOL = 1e-12


class GradientMode(enum.Enum):
    """Form of the Fiedler gradient: ``−f[i]·f[j]`` or ``−|f[i]·f[j]|``."""

    SIGNED = "signed"
    ABS = "abs"


class CandidatePolicy(enum.Enum):
    """Which absent edges may be added during rewiring."""

    CROSS_PARTITION = "cross-partition"
    ALL_NON_EDGES = "all-non-edges"


@dataclass(frozen=True)
class RewiringConfig:
    """Parameters of :func:`qfern_once` and :func:`rewire_optimize`.

    Parameters
    ----------
    alpha
        Step size of the soft adjacency update. Zero gives the identity step.
    gradient_mode
        Form of the Fiedler gradient
    max_iterations
        Upper bound on rewiring iterations
    patience
        Stop after this many consecutive rejected swaps (0 disables this)
    seed
        Seed for the edge-removal PRNG
    candidate_policy
        Which absent edges are eligible for addition
    """

    alpha: float = 0.05
    gradient_mode: GradientMode = GradientMode.SIGNED
    max_iterations: int = 50
    patience: int = 0
    seed: int = 0
    candidate_policy: CandidatePolicy = CandidatePolicy.CROSS_PARTITION

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise InvalidParameterError(f"alpha must be non-negative, not {self.alpha}")
        if self.max_iterations < 1:
            raise InvalidParameterError(
                f"max_iterations must be at least 1, not {self.max_iterations}"
            )
        if self.patience < 0:
            raise InvalidParameterError(f"patience must be non-negative, not {self.patience}")
        if self.seed < 0:
            raise InvalidParameterError(f"seed must be non-negative, not {self.seed}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": round_float(self.alpha),
            "gradient_mode": self.gradient_mode.value,
            "max_iterations": self.max_iterations,
            "patience": self.patience,
            "seed": self.seed,
            "candidate_policy": self.candidate_policy.value,
        }


class QfernStep(NamedTuple):
    """Result of :func:`qfern_once`."""

    asoft: WeightedGraph
    lambda2_before: float
    lambda2_after: float


@dataclass(frozen=True)
class IterationRecord:
    """One iteration of :func:`rewire_optimize`.

    `h`, `lambda2` and `r_total` describe the graph after the step (the
    swapped graph if accepted, otherwise the unchanged one).
    """

    step: int
    removed_edge: Optional[Tuple[int, int]]
    added_edge: Optional[Tuple[int, int]]
    accepted: bool
    h: float
    lambda2: float
    r_total: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step": self.step,
            "removed_edge": list(self.removed_edge) if self.removed_edge else None,
            "added_edge": list(self.added_edge) if self.added_edge else None,
            "accepted": self.accepted,
            "h": round_float(self.h),
            "lambda2": round_float(self.lambda2),
            "r_total": round_float(self.r_total),
        }


@dataclass(frozen=True)
class GraphMetrics:
    h: float
    lambda2: float
    r_total: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": round_float(self.h),
            "lambda2": round_float(self.lambda2),
            "r_total": round_float(self.r_total),
        }


@dataclass
class RewiringReport:
    """Trace and outcome of :func:`rewire_optimize`."""

    config: RewiringConfig
    initial: WeightedGraph
    final: WeightedGraph
    asoft: WeightedGraph
    initial_metrics: GraphMetrics
    final_metrics: GraphMetrics
    iterations: List[IterationRecord] = field(default_factory=list)

    @property
    def accepted_moves(self) -> int:
        return sum(record.accepted for record in self.iterations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "initial": {**self.initial_metrics.to_dict(), "edges": _edge_rows(self.initial)},
            "final": {**self.final_metrics.to_dict(), "edges": _edge_rows(self.final)},
            "accepted_moves": self.accepted_moves,
            "iterations": [record.to_dict() for record in self.iterations],
        }

    def write_trace_csv(self, stream: TextIO) -> None:
        stream.write("step,h,lambda2,r_total,accepted\n")
        for record in self.iterations:
            fields = [
                str(record.step),
                format_float(record.h),
                format_float(record.lambda2),
                format_float(record.r_total),
                "1" if record.accepted else "0",
            ]
            stream.write(",".join(fields) + "\n")


def _edge_rows(g: WeightedGraph) -> List[List[Any]]:
    return [[edge.u, edge.v, round_float(edge.w)] for edge in g.edges()]


def fiedler_gradient(fiedler: Vector, mode: GradientMode = GradientMode.SIGNED) -> Matrix:
    """Gradient ``G[i][j] = −f[i]·f[j]`` (or ``−|f[i]·f[j]|``) with zero diagonal."""
    f = np.asarray(fiedler, dtype=np.float64)
    gradient = -np.outer(f, f)
    if mode is GradientMode.ABS:
        gradient = -np.abs(gradient)
    np.fill_diagonal(gradient, 0.0)
    return gradient


def asoft_update(a: Matrix, gradient: Matrix, alpha: float) -> Matrix:
    """One projected step: ``a + α·gradient``, symmetrized, clamped at 0, zero diagonal."""
    m = np.asarray(a, dtype=np.float64) + alpha * np.asarray(gradient, dtype=np.float64)
    m = (m + m.T) / 2
    m = np.maximum(m, 0.0)
    np.fill_diagonal(m, 0.0)
    return m


def qfern_once(g: WeightedGraph, config: RewiringConfig) -> QfernStep:
    """Apply the soft adjacency update once to the symmetrized graph.

    Raises
    ------
    DisconnectedGraphError
        If the symmetrized graph is not connected
    """
    undirected = symmetrize(g)
    before = decompose(undirected)
    before.require_connected()
    gradient = fiedler_gradient(before.fiedler, config.gradient_mode)
    asoft = undirected.with_weights(asoft_update(undirected.weights, gradient, config.alpha))
    after = decompose(asoft)
    logger.debug("Soft update α=%g: λ₂ %g -> %g", config.alpha, before.lambda2, after.lambda2)
    return QfernStep(asoft, before.lambda2, after.lambda2)


def _metrics(g: WeightedGraph) -> GraphMetrics:
    decomp = decompose(g)
    h = cheeger(g, decomp).ratio
    r_total = total_effective_resistance(resistance_matrix(decomp))
    return GraphMetrics(h, decomp.lambda2, r_total)


def _bipartition(g: WeightedGraph, removed: Tuple[int, int]) -> Tuple[FrozenSet[int], ...]:
    """Fiedler bipartition, or the component split if the removal disconnected `g`."""
    if component_count(g) == 1:
        return fiedler_bipartition(decompose(g))
    labels = connected_components(g)
    side_a = frozenset(int(i) for i in np.flatnonzero(labels == labels[removed[0]]))
    return side_a, frozenset(range(g.n)) - side_a


def _candidates(
    weights: Matrix,
    sides: Tuple[FrozenSet[int], ...],
    removed: Tuple[int, int],
    policy: CandidatePolicy,
) -> List[Tuple[int, int]]:
    n = weights.shape[0]
    result = []
    for i in range(n):
        for j in range(i + 1, n):
            if weights[i, j] != 0 or (i, j) == removed:
                continue
            if policy is CandidatePolicy.CROSS_PARTITION:
                if (i in sides[0]) == (j in sides[0]):
                    continue
            result.append((i, j))
    return result


def _score_additions(
    pruned: WeightedGraph, pairs: List[Tuple[int, int]], weight: float
) -> List[Optional[float]]:
    """Cheeger ratio after adding each pair to `pruned`, or None if still disconnected."""
    labels = connected_components(pruned)
    n_components = int(labels.max()) + 1
    connects = [
        n_components == 1 or (n_components == 2 and labels[i] != labels[j]) for i, j in pairs
    ]
    if pruned.n <= MAX_EXACT_NODES:
        scores = cheeger_after_addition(pruned, pairs, weight)
        return [float(h) if ok else None for h, ok in zip(scores, connects)]
    result: List[Optional[float]] = []
    for (i, j), ok in zip(pairs, connects):
        if not ok:
            result.append(None)
            continue
        trial = np.array(pruned.weights)
        trial[i, j] = trial[j, i] = weight
        result.append(cheeger(pruned.with_weights(trial)).ratio)
    return result


def _improves(old: GraphMetrics, new: GraphMetrics) -> bool:
    tol = _H_TOL * max(1.0, abs(old.h))
    if new.h > old.h + tol:
        return True
    return abs(new.h - old.h) <= tol and new.r_total < old.r_total - _H_TOL * old.r_total


def rewire_optimize(g: WeightedGraph, config: RewiringConfig) -> RewiringReport:
    """Edge-swap optimization of the Cheeger constant and total resistance.

    Each iteration removes a uniformly random edge (seeded by
    ``config.seed``), bipartitions the remaining graph by its Fiedler vector,
    adds the candidate edge that maximizes the new Cheeger constant (ties go
    to the lexicographically smallest pair) with the removed edge's weight,
    and keeps the swap only if the graph is connected and either ``h``
    strictly increases, or ``h`` ties and the total resistance strictly
    decreases.

    Raises
    ------
    DisconnectedGraphError
        If the symmetrized input is not connected
    NoCandidateEdgesError
        If the input is a complete graph
    """
    current = symmetrize(g)
    components = component_count(current)
    if components > 1:
        raise DisconnectedGraphError("rewiring requires a connected graph", components)
    if current.num_edges == current.n * (current.n - 1) // 2:
        raise NoCandidateEdgesError("graph is complete, so no edge can be added")
    rng = np.random.default_rng(config.seed)
    metrics = _metrics(current)
    initial_metrics = metrics
    records: List[IterationRecord] = []
    rejected_run = 0
    for step in range(1, config.max_iterations + 1):
        edges = current.edges()
        removed_edge = edges[int(rng.integers(len(edges)))]
        removed = (removed_edge.u, removed_edge.v)
        weights = np.array(current.weights)
        weights[removed] = weights[removed[::-1]] = 0.0
        pruned = current.with_weights(weights)
        sides = _bipartition(pruned, removed)
        best: Optional[Tuple[float, Tuple[int, int], WeightedGraph]] = None
        pairs = _candidates(weights, sides, removed, config.candidate_policy)
        for (i, j), h in zip(pairs, _score_additions(pruned, pairs, removed_edge.w)):
            if h is None:
                continue
            if best is None or h > best[0] + _H_TOL * max(1.0, abs(best[0])):
                trial = weights.copy()
                trial[i, j] = trial[j, i] = removed_edge.w
                best = (h, (i, j), current.with_weights(trial))
        accepted = False
        added = None
        if best is not None:
            added = best[1]
            candidate_metrics = _metrics(best[2])
            if _improves(metrics, candidate_metrics):
                accepted = True
                current = best[2]
                metrics = candidate_metrics
        records.append(
            IterationRecord(
                step, removed, added, accepted, metrics.h, metrics.lambda2, metrics.r_total
            )
        )
        if accepted:
            rejected_run = 0
            logger.info(
                "Step %d: swapped %s for %s, h=%g R_total=%g",
                step,
                removed,
                added,
                metrics.h,
                metrics.r_total,
            )
        else:
            rejected_run += 1
            logger.debug("Step %d: rejected removal of %s (best addition %s)", step, removed, added)
            if config.patience and rejected_run >= config.patience:
                logger.info("Stopping after %d consecutive rejected swaps", rejected_run)
                break
    asoft = qfern_once(current, config).asoft
    return RewiringReport(
        config=config,
        initial=symmetrize(g),
        final=current,
        asoft=asoft,
        initial_metrics=initial_metrics,
        final_metrics=metrics,
        iterations=records,
    )
