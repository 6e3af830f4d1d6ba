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

"""Cheeger constant (exhaustive and Fiedler sweep), bipartitions and the Cheeger inequality."""

import concurrent.futures
import enum
import functools
import logging
from dataclasses import dataclass
from typing import (
    Any,
    Callable,
    Collection,
    Dict,
    FrozenSet,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
)

import numpy as np

from .core import (
    DirectedGraphError,
    DisconnectedGraphError,
    GraphTooLargeError,
    InvalidParameterError,
    Matrix,
    WeightedGraph,
    check_nodes,
    round_float,
    thread_limit,
)
from .graph import component_count
from .spectral import SpectralDecomposition, decompose

logger = logging.getLogger(__name__)
#: Largest graph accepted by :func:`cheeger_exact`
MAX_EXACT_NODES = 24
#: Number of subsets evaluated per work item in :func:`cheeger_exact`
_CHUNK_SIZE = 1 << 14
#: Candidate edges scored together by :func:`cheeger_after_addition`
_PAIR_BLOCK = 64
#: Relative tolerance under which two cut ratios are considered tied
_TIE_TOL = 1e-12
#: Tolerance for the inequality checks
INEQUALITY_TOL = 1e-9

_R = TypeVar("_R")


class Normalization(enum.Enum):
    """Denominator of the Cheeger ratio.

    For a cut ``{A, B}``, ``MIN_SIDE`` divides the boundary weight by
    ``min(|A|, |B|)``. ``SIZE_ONLY`` is ``min_S |∂S| / |S|`` over both
    orientations of the cut, which is attained by the larger side, so it
    divides by ``max(|A|, |B|)``.
    """

    SIZE_ONLY = "size-only"
    MIN_SIDE = "min-side"

    def denominator(self, size_a: int, size_b: int) -> int:
        if self is Normalization.MIN_SIDE:
            return min(size_a, size_b)
        return max(size_a, size_b)


@dataclass(frozen=True)
class CutResult:
    """A two-way cut and its Cheeger ratio. `side_a` always contains node 0."""

    side_a: FrozenSet[int]
    side_b: FrozenSet[int]
    boundary_weight: float
    ratio: float
    normalization: Normalization

    def to_dict(self) -> Dict[str, Any]:
        return {
            "side_a": sorted(self.side_a),
            "ratio": round_float(self.ratio),
            "boundary_weight": round_float(self.boundary_weight),
            "normalization": self.normalization.value,
        }


@dataclass(frozen=True)
class CheegerCheck:
    """Outcome of :func:`check_cheeger_inequality`.

    The margins are positive when the corresponding inequality holds.
    `scaled_lower_margin` is only present when a maximum degree was given.
    """

    holds: bool
    h: float
    lambda2: float
    lower_margin: float
    upper_margin: float
    scaled_lower_margin: Optional[float] = None

    @property
    def scaled_holds(self) -> Optional[bool]:
        """Whether ``h²/(2·d_max) ≤ λ₂ ≤ 2h`` holds, if `d_max` was given"""
        if self.scaled_lower_margin is None:
            return None
        return self.scaled_lower_margin >= -INEQUALITY_TOL and self.upper_margin >= -INEQUALITY_TOL

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "holds": self.holds,
            "h": round_float(self.h),
            "lambda2": round_float(self.lambda2),
            "lower_margin": round_float(self.lower_margin),
            "upper_margin": round_float(self.upper_margin),
        }
        if self.scaled_lower_margin is not None:
            result["scaled_lower_margin"] = round_float(self.scaled_lower_margin)
            result["scaled_holds"] = self.scaled_holds
        return result


def _require_undirected(g: WeightedGraph) -> None:
    if g.directed:
        raise DirectedGraphError("cuts require an undirected graph")
    if g.n < 2:
        raise InvalidParameterError("cuts require at least 2 nodes")


def cut_ratio(
    g: WeightedGraph,
    side: Collection[int],
    normalization: Normalization = Normalization.MIN_SIDE,
) -> CutResult:
    """Evaluate the cut between `side` and its complement."""
    _require_undirected(g)
    members = set(check_nodes(g, list(side)))
    if not members or len(members) == g.n:
        raise InvalidParameterError("both sides of a cut must be non-empty")
    if 0 not in members:
        members = set(range(g.n)) - members
    side_a = frozenset(members)
    side_b = frozenset(range(g.n)) - side_a
    a = sorted(side_a)
    b = sorted(side_b)
    boundary = float(g.weights[np.ix_(a, b)].sum())
    denominator = normalization.denominator(len(a), len(b))
    return CutResult(side_a, side_b, boundary, boundary / denominator, normalization)


@functools.lru_cache(maxsize=8)
def _bit_shifts(bits: int) -> np.ndarray:
    return np.arange(bits, dtype=np.int64)


def _chunk_cuts(
    weights: Matrix, start: int, stop: int, normalization: Normalization
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Side indicators, boundary weights and denominators for masks ``[start, stop)``.

    Bit ``k`` of a mask puts node ``k + 1`` on the same side as node 0.
    """
    n = weights.shape[0]
    masks = np.arange(start, stop, dtype=np.int64)
    indicator = np.empty((len(masks), n))
    indicator[:, 0] = 1.0
    indicator[:, 1:] = (masks[:, None] >> _bit_shifts(n - 1)) & 1
    boundary = ((indicator @ weights) * (1.0 - indicator)).sum(axis=1)
    size_a = indicator.sum(axis=1)
    size_b = n - size_a
    if normalization is Normalization.MIN_SIDE:
        denominator = np.minimum(size_a, size_b)
    else:
        denominator = np.maximum(size_a, size_b)
    return indicator, boundary, denominator


def _best_in_chunk(
    weights: Matrix, start: int, stop: int, normalization: Normalization
) -> Tuple[float, Tuple[int, ...]]:
    """Best cut among subset masks ``[start, stop)``."""
    indicator, boundary, denominator = _chunk_cuts(weights, start, stop, normalization)
    ratios = boundary / denominator
    best = float(ratios.min())
    tied = np.flatnonzero(ratios <= best + _TIE_TOL * max(1.0, abs(best)))
    sides = [tuple(int(i) for i in np.flatnonzero(indicator[row])) for row in tied]
    return best, min(sides)


def _map_chunks(n: int, func: Callable[[int, int], _R]) -> List[_R]:
    """Apply `func` to fixed-size ranges of the cut masks of an `n`-node graph.

    Up to :func:`~qfern.core.thread_limit` threads are used. Results are in
    chunk order.
    """
    total = (1 << (n - 1)) - 1  # the all-ones mask leaves side_b empty
    bounds = [(start, min(start + _CHUNK_SIZE, total)) for start in range(0, total, _CHUNK_SIZE)]
    workers = min(thread_limit(), len(bounds))
    logger.debug("Enumerating %d cuts in %d chunks on %d threads", total, len(bounds), workers)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda b: func(b[0], b[1]), bounds))
    return [func(start, stop) for start, stop in bounds]


def cheeger_exact(
    g: WeightedGraph, normalization: Normalization = Normalization.MIN_SIDE
) -> CutResult:
    """Cheeger constant by exhaustive enumeration.

    Every cut is visited once, as the subsets containing node 0. Ties are
    broken by the lexicographically smallest `side_a`. Work is split into
    fixed-size chunks evaluated on up to :func:`~qfern.core.thread_limit`
    threads, so the result does not depend on the thread count.

    Raises
    ------
    GraphTooLargeError
        If the graph has more than :data:`MAX_EXACT_NODES` nodes
    DisconnectedGraphError
        If the graph is not connected
    """
    _require_undirected(g)
    if g.n > MAX_EXACT_NODES:
        raise GraphTooLargeError(
            f"exhaustive Cheeger enumeration is limited to {MAX_EXACT_NODES} nodes, not {g.n}"
        )
    components = component_count(g)
    if components > 1:
        raise DisconnectedGraphError("Cheeger constant requires a connected graph", components)
    weights = np.array(g.weights)
    results = _map_chunks(
        g.n, lambda start, stop: _best_in_chunk(weights, start, stop, normalization)
    )
    best = min(ratio for ratio, _ in results)
    side = min(side for ratio, side in results if ratio <= best + _TIE_TOL * max(1.0, abs(best)))
    return cut_ratio(g, side, normalization)


def _additions_in_chunk(
    weights: Matrix,
    start: int,
    stop: int,
    normalization: Normalization,
    pairs: np.ndarray,
    weight: float,
) -> np.ndarray:
    """Smallest cut ratio in masks ``[start, stop)`` after adding each edge in `pairs`."""
    indicator, boundary, denominator = _chunk_cuts(weights, start, stop, normalization)
    best = np.empty(len(pairs))
    for block in range(0, len(pairs), _PAIR_BLOCK):
        chosen = pairs[block : block + _PAIR_BLOCK]
        crossing = indicator[:, chosen[:, 0]] != indicator[:, chosen[:, 1]]
        ratios = (boundary[:, None] + weight * crossing) / denominator[:, None]
        best[block : block + len(chosen)] = ratios.min(axis=0)
    return best


def cheeger_after_addition(
    g: WeightedGraph,
    pairs: Sequence[Tuple[int, int]],
    weight: float,
    normalization: Normalization = Normalization.MIN_SIDE,
) -> np.ndarray:
    """Exact Cheeger ratio of `g` with one extra edge, for each edge in `pairs`.

    Entry ``k`` is the ratio :func:`cheeger_exact` would return for `g` plus
    edge ``pairs[k]`` with weight `weight`. Adding an edge only raises the
    boundary of the cuts it crosses, so every candidate is scored in a single
    pass over the cuts of `g`. `g` itself may be disconnected; a candidate
    that leaves it disconnected scores 0.

    Raises
    ------
    GraphTooLargeError
        If the graph has more than :data:`MAX_EXACT_NODES` nodes
    InvalidParameterError
        If `weight` is negative or a pair is a self-loop
    """
    _require_undirected(g)
    if g.n > MAX_EXACT_NODES:
        raise GraphTooLargeError(
            f"exhaustive Cheeger enumeration is limited to {MAX_EXACT_NODES} nodes, not {g.n}"
        )
    if not weight >= 0:
        raise InvalidParameterError(f"weight must be non-negative, not {weight}")
    for u, v in pairs:
        check_nodes(g, [u, v])
        if u == v:
            raise InvalidParameterError(f"cannot add self-loop on node {u}")
    if not pairs:
        return np.empty(0)
    index = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    weights = np.array(g.weights)
    results = _map_chunks(
        g.n,
        lambda start, stop: _additions_in_chunk(
            weights, start, stop, normalization, index, weight
        ),
    )
    return np.min(np.stack(results), axis=0)


def fiedler_sweep(
    g: WeightedGraph,
    decomp: SpectralDecomposition,
    normalization: Normalization = Normalization.MIN_SIDE,
) -> CutResult:
    """Best of the ``n − 1`` prefix cuts of the nodes sorted by Fiedler component.

    Raises
    ------
    DisconnectedGraphError
        If the graph is not connected
    """
    _require_undirected(g)
    decomp.require_connected()
    weights = np.asarray(g.weights)
    degrees = weights.sum(axis=1)
    order = np.argsort(decomp.fiedler, kind="stable")
    n = g.n
    in_prefix = np.zeros(n, dtype=bool)
    boundary = 0.0
    candidates: List[Tuple[float, Tuple[int, ...]]] = []
    for k in range(1, n):
        node = order[k - 1]
        boundary += degrees[node] - 2.0 * weights[node, in_prefix].sum()
        in_prefix[node] = True
        ratio = boundary / normalization.denominator(k, n - k)
        prefix = set(int(i) for i in order[:k])
        side = prefix if 0 in prefix else set(range(n)) - prefix
        candidates.append((ratio, tuple(sorted(side))))
    best = min(ratio for ratio, _ in candidates)
    side = min(s for ratio, s in candidates if ratio <= best + _TIE_TOL * max(1.0, abs(best)))
    return cut_ratio(g, side, normalization)


def cheeger(g: WeightedGraph, decomp: Optional[SpectralDecomposition] = None) -> CutResult:
    """MIN_SIDE Cheeger cut: exact up to :data:`MAX_EXACT_NODES` nodes, else the sweep."""
    if g.n <= MAX_EXACT_NODES:
        return cheeger_exact(g, Normalization.MIN_SIDE)
    if decomp is None:
        decomp = decompose(g)
    return fiedler_sweep(g, decomp, Normalization.MIN_SIDE)


def check_cheeger_inequality(
    h: float, lambda2: float, d_max: Optional[float] = None
) -> CheegerCheck:
    """Check ``h²/2 ≤ λ₂ ≤ 2h`` within :data:`INEQUALITY_TOL`.

    The lower bound in this form is not a theorem for the unnormalized
    Laplacian: it fails on dense graphs (``K₉`` has ``h = 5``, ``λ₂ = 9``).
    When `d_max` (maximum weighted degree) is given, the report also carries
    the degree-scaled lower bound ``h²/(2·d_max) ≤ λ₂``, which always holds.
    """
    lower_margin = lambda2 - h * h / 2
    upper_margin = 2 * h - lambda2
    holds = lower_margin >= -INEQUALITY_TOL and upper_margin >= -INEQUALITY_TOL
    scaled = None
    if d_max is not None:
        if d_max <= 0:
            raise InvalidParameterError(f"d_max must be positive, not {d_max}")
        scaled = lambda2 - h * h / (2 * d_max)
    if not holds:
        logger.warning(
            "Cheeger inequality h²/2 ≤ λ₂ ≤ 2h violated: h=%g λ₂=%g (margins %g, %g)",
            h,
            lambda2,
            lower_margin,
            upper_margin,
        )
    return CheegerCheck(holds, h, lambda2, lower_margin, upper_margin, scaled)


def fiedler_bipartition(decomp: SpectralDecomposition) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Split nodes by the sign of their Fiedler component (``≥ 0`` goes to A).

    If one side would be empty, fall back to splitting at the median of the
    Fiedler order (the upper half goes to A).
    """
    fiedler = decomp.fiedler
    side_a = frozenset(int(i) for i in np.flatnonzero(fiedler >= 0))
    if not side_a or len(side_a) == decomp.n:
        order = np.argsort(fiedler, kind="stable")
        side_a = frozenset(int(i) for i in order[decomp.n // 2 :])
    return side_a, frozenset(range(decomp.n)) - side_a
