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

"""Kuramoto synchronization analysis on weighted graphs.

For the Kuramoto model ``θ̇ᵢ = ωᵢ + Σⱼ Wᵢⱼ sin(θⱼ − θᵢ)`` on a connected
graph, the vector ``x = L⁺ω`` predicts the locked phase differences:
``sin(θᵤ − θᵥ) ≈ xᵤ − xᵥ`` on every edge, exactly so on trees. The
condition ``‖L⁺ω‖_{E,∞} = max_edges |xᵤ − xᵥ| < 1`` is therefore the
synchronization test (necessary and sufficient on trees).

Desynchronization regions are node pairs whose effective resistance exceeds
a threshold; a stabilizer node wired into such a region lowers the
resistances by Rayleigh monotonicity.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    TextIO,
    Tuple,
    Union,
)

import numpy as np
from typing_extensions import Self

from .core import (
    DirectedGraphError,
    DisconnectedGraphError,
    EmptyReportError,
    GraphParseError,
    InvalidParameterError,
    Matrix,
    NonFiniteStateError,
    UncenteredFrequencyError,
    Vector,
    WeightedGraph,
    format_float,
    round_float,
)
from .graph import add_node, is_connected, read_lines
from .spectral import (
    ResistanceMatrix,
    SpectralDecomposition,
    eig_sym,
    laplacian,
    resistance_matrix,
)

logger = logging.getLogger(__name__)
#: Maximum |Σω| accepted when centering is disabled
CENTERING_TOL = 1e-9
#: Pairs are flagged only when R_uv exceeds the threshold by more than this
FLAG_TOL = 1e-9
DEFAULT_DT = 0.01
DEFAULT_T_MAX = 200.0
DEFAULT_LOCK_TOL = 1e-6
#: Digits kept when comparing floats for tie-breaking between nodes
_TIE_DIGITS = 9


@dataclass(frozen=True)
class SimulationConfig:
    """Integration settings for :func:`kuramoto_simulate`."""

    dt: float = DEFAULT_DT
    t_max: float = DEFAULT_T_MAX
    lock_tol: float = DEFAULT_LOCK_TOL

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise InvalidParameterError(f"dt must be positive, not {self.dt}")
        if not self.t_max > self.dt:
            raise InvalidParameterError(f"t_max must exceed dt, not {self.t_max}")
        if not self.lock_tol > 0:
            raise InvalidParameterError(f"lock_tol must be positive, not {self.lock_tol}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dt": round_float(self.dt),
            "t_max": round_float(self.t_max),
            "lock_tol": round_float(self.lock_tol),
        }


@dataclass(frozen=True, eq=False)
class FrequencyVector:
    """Natural frequencies, stored centered (``Σω = 0``) with the original kept.

    Use :meth:`from_values` rather than the constructor.
    """

    omega: Vector
    original: Vector

    @classmethod
    def from_values(cls, values: Iterable[float], center: bool = True) -> Self:
        """Build from raw frequencies.

        Raises
        ------
        UncenteredFrequencyError
            If `center` is false and the values do not sum to zero
        """
        original = np.array(list(values), dtype=np.float64)
        if original.ndim != 1 or not np.all(np.isfinite(original)):
            raise InvalidParameterError("frequencies must be a finite 1-D sequence")
        total = float(original.sum())
        if not center and abs(total) > CENTERING_TOL:
            raise UncenteredFrequencyError(f"frequencies sum to {total:.3g}, not 0")
        omega = original - original.mean() if original.size else original.copy()
        omega.setflags(write=False)
        original.setflags(write=False)
        return cls(omega, original)

    @classmethod
    def random(cls, n: int, seed: int) -> Self:
        """Uniform draws from [−1, 1], then centered."""
        rng = np.random.default_rng(seed)
        return cls.from_values(rng.uniform(-1.0, 1.0, size=n))

    @property
    def n(self) -> int:
        return len(self.omega)

    def scaled(self, factor: float) -> Self:
        return type(self).from_values(self.original * factor)

    def write(self, stream: TextIO) -> None:
        """Write the original values, one per line."""
        for value in self.original:
            stream.write(f"{float(value)!r}\n")


def parse_frequencies(lines: Iterable[str]) -> FrequencyVector:
    """Parse one frequency per line (``#`` comments and blank lines allowed)."""
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise GraphParseError(f"invalid frequency {line!r}", lineno, raw) from None
    return FrequencyVector.from_values(values)


def load_frequencies(path: Any) -> FrequencyVector:
    return parse_frequencies(read_lines(path))


OmegaLike = Union[FrequencyVector, Sequence[float], np.ndarray]


def _as_frequencies(omega: OmegaLike, n: int, center: bool = True) -> FrequencyVector:
    if not isinstance(omega, FrequencyVector):
        omega = FrequencyVector.from_values(omega, center=center)
    if omega.n != n:
        raise InvalidParameterError(f"expected {n} frequencies, got {omega.n}")
    return omega


def _decompose_undirected(g: WeightedGraph) -> SpectralDecomposition:
    if g.directed:
        raise DirectedGraphError("synchronization analysis requires an undirected graph")
    decomp = eig_sym(laplacian(g))
    decomp.require_connected()
    return decomp


@dataclass(frozen=True, eq=False)
class SyncAnalysis:
    """Result of :func:`einf_norm_condition`.

    Attributes
    ----------
    x
        ``L⁺ω``
    edges
        Undirected edges ``(u, v)`` in the order of `edge_diffs`
    edge_diffs
        ``|x_u − x_v|`` per edge
    einf_norm
        Maximum of `edge_diffs`
    lambda2_bound
        ``max_{i≥2} |f⁽ⁱ⁾ᵀω| / λ₂``. This is not a valid upper bound in
        general (see `lambda2_bound_holds`).
    resistance_bound
        ``√(max_edge R_uv · ωᵀL⁺ω)``, a proven upper bound on `einf_norm`
    stable
        ``einf_norm < 1``
    degenerate_lambda2
        Whether λ₂ is repeated
    """

    x: Vector
    edges: Tuple[Tuple[int, int], ...]
    edge_diffs: Vector
    einf_norm: float
    lambda2_bound: float
    resistance_bound: float
    stable: bool
    degenerate_lambda2: bool

    @property
    def lambda2_bound_holds(self) -> bool:
        return self.einf_norm <= self.lambda2_bound + FLAG_TOL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x": [round_float(value) for value in self.x],
            "edge_diffs": [
                [u, v, round_float(diff)] for (u, v), diff in zip(self.edges, self.edge_diffs)
            ],
            "einf_norm": round_float(self.einf_norm),
            "lambda2_bound": round_float(self.lambda2_bound),
            "lambda2_bound_holds": self.lambda2_bound_holds,
            "resistance_bound": round_float(self.resistance_bound),
            "stable": self.stable,
            "degenerate_lambda2": self.degenerate_lambda2,
        }


def einf_norm_condition(g: WeightedGraph, omega: OmegaLike, *, center: bool = True) -> SyncAnalysis:
    """Evaluate the synchronization condition ``‖L⁺ω‖_{E,∞} < 1``.

    ``L⁺ω`` is computed as ``V diag(0, 1/λ₂, …, 1/λₙ) Vᵀ ω``.

    Raises
    ------
    DisconnectedGraphError
        If `g` is not connected
    UncenteredFrequencyError
        If `center` is false and `omega` does not sum to zero
    """
    if g.num_edges < 1:
        raise InvalidParameterError("graph has no edges")
    decomp = _decompose_undirected(g)
    freqs = _as_frequencies(omega, g.n, center)
    vectors = decomp.eigenvectors[:, 1:]
    eigenvalues = decomp.eigenvalues[1:]
    coefficients = vectors.T @ freqs.omega
    x = vectors @ (coefficients / eigenvalues)
    edges = tuple((edge.u, edge.v) for edge in g.edges())
    us = np.array([u for u, _ in edges])
    vs = np.array([v for _, v in edges])
    diffs = np.abs(x[us] - x[vs])
    einf = float(diffs.max())
    lambda2_bound = float(np.max(np.abs(coefficients)) / decomp.lambda2)
    embedding = vectors / np.sqrt(eigenvalues)
    edge_resistance = np.sum((embedding[us] - embedding[vs]) ** 2, axis=1)
    energy = float(np.sum(coefficients**2 / eigenvalues))
    resistance_bound = math.sqrt(float(edge_resistance.max()) * energy)
    analysis = SyncAnalysis(
        x=x,
        edges=edges,
        edge_diffs=diffs,
        einf_norm=einf,
        lambda2_bound=lambda2_bound,
        resistance_bound=resistance_bound,
        stable=einf < 1.0,
        degenerate_lambda2=decomp.degenerate_lambda2,
    )
    if not analysis.lambda2_bound_holds:
        logger.warning(
            "‖L⁺ω‖_E,∞ = %g exceeds max|fᵀω|/λ₂ = %g", einf, lambda2_bound
        )
    return analysis


class ThresholdKind(enum.Enum):
    ABSOLUTE = "absolute"
    QUANTILE = "quantile"


@dataclass(frozen=True)
class ThresholdPolicy:
    """How :func:`detect_desync_regions` chooses its resistance threshold.

    Raises
    ------
    InvalidParameterError
        If a quantile is outside (0, 1) or an absolute threshold is NaN
    """

    kind: ThresholdKind
    value: float

    def __post_init__(self) -> None:
        if math.isnan(self.value):
            raise InvalidParameterError("threshold must not be NaN")
        if self.kind is ThresholdKind.QUANTILE and not 0.0 < self.value < 1.0:
            raise InvalidParameterError(f"quantile must be in (0, 1), not {self.value}")

    @classmethod
    def absolute(cls, threshold: float) -> Self:
        return cls(ThresholdKind.ABSOLUTE, threshold)

    @classmethod
    def quantile(cls, q: float) -> Self:
        return cls(ThresholdKind.QUANTILE, q)

    def resolve(self, rm: ResistanceMatrix) -> float:
        if self.kind is ThresholdKind.ABSOLUTE:
            return float(self.value)
        return float(np.quantile(rm.off_diagonal(), self.value))


@dataclass(frozen=True, eq=False)
class DesyncReport:
    """Node pairs whose effective resistance exceeds a threshold.

    `phase_estimates` holds ``R_uv·|ω_u − ω_v|``, a heuristic ranking of
    expected phase disparity with unit proportionality constant, not a
    calibrated phase.
    """

    resistance: ResistanceMatrix
    threshold: float
    flagged_pairs: Tuple[Tuple[int, int, float], ...]
    flagged_nodes: FrozenSet[int]
    phase_estimates: Matrix

    @property
    def empty(self) -> bool:
        return not self.flagged_pairs

    def max_flagged_resistance(self, rm: Optional[ResistanceMatrix] = None) -> float:
        """Largest R_uv among flagged pairs, read from `rm` (default: this report's)."""
        values = (rm or self.resistance).values
        return max((float(values[u, v]) for u, v, _ in self.flagged_pairs), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "threshold": round_float(self.threshold),
            "flagged_pairs": [
                {
                    "u": u,
                    "v": v,
                    "R": round_float(r),
                    "phase_estimate": round_float(self.phase_estimates[u, v]),
                }
                for u, v, r in self.flagged_pairs
            ],
            "flagged_nodes": sorted(self.flagged_nodes),
            "phase_estimate_kind": "heuristic estimate",
        }

    def write_csv(self, stream: TextIO) -> None:
        stream.write("u,v,R,phase_estimate\n")
        for u, v, r in self.flagged_pairs:
            fields = [str(u), str(v), format_float(r), format_float(self.phase_estimates[u, v])]
            stream.write(",".join(fields) + "\n")


def detect_desync_regions(
    g: WeightedGraph, omega: OmegaLike, threshold_policy: ThresholdPolicy
) -> DesyncReport:
    """Flag node pairs with effective resistance strictly above a threshold.

    Quantile thresholds are taken over the unordered off-diagonal
    resistances with linear interpolation. A pair is flagged when
    ``R_uv > threshold + FLAG_TOL``, so equal resistances never flag.

    Raises
    ------
    DisconnectedGraphError
        If `g` is not connected
    """
    decomp = _decompose_undirected(g)
    freqs = _as_frequencies(omega, g.n)
    rm = resistance_matrix(decomp)
    threshold = threshold_policy.resolve(rm)
    flagged = tuple((u, v, r) for u, v, r in rm.pairs() if r > threshold + FLAG_TOL)
    nodes = frozenset(node for u, v, _ in flagged for node in (u, v))
    spread = np.abs(freqs.omega[:, None] - freqs.omega[None, :])
    phase_estimates = rm.values * spread
    phase_estimates.setflags(write=False)
    logger.debug("Threshold %g flags %d pairs over %d nodes", threshold, len(flagged), len(nodes))
    return DesyncReport(rm, threshold, flagged, nodes, phase_estimates)


class TargetPolicy(enum.Enum):
    """How :func:`stabilizer_targets` picks the nodes a stabilizer connects to.

    ``ROW_SUM`` takes the nodes with the largest resistance row-sums over
    the flagged nodes. ``SPREAD`` starts from the largest row-sum and then
    repeatedly adds the node farthest (in resistance) from those already
    chosen, so that the targets straddle the bottleneck.
    """

    ROW_SUM = "row-sum"
    SPREAD = "spread"


@dataclass(frozen=True)
class StabilizerConfig:
    """Parameters of :func:`place_stabilizer`."""

    k: int = 2
    weight: float = 1.0
    policy: TargetPolicy = TargetPolicy.SPREAD

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InvalidParameterError(f"k must be at least 2, not {self.k}")
        if not self.weight > 0 or not math.isfinite(self.weight):
            raise InvalidParameterError(f"weight must be positive, not {self.weight}")

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "weight": round_float(self.weight), "policy": self.policy.value}


class StabilizerResult(NamedTuple):
    """Result of :func:`place_stabilizer`."""

    g2: WeightedGraph
    delta_lambda2: float
    delta_max_r: float


def _key(value: float) -> float:
    return round(float(value), _TIE_DIGITS)


def stabilizer_targets(
    report: DesyncReport, k: int, policy: TargetPolicy = TargetPolicy.SPREAD
) -> List[int]:
    """Choose `k` target nodes, flagged nodes first.

    If fewer than `k` nodes are flagged, the remainder is chosen by the same
    rule from the unflagged nodes using the full resistance matrix. Ties go
    to the lower node id.

    Raises
    ------
    EmptyReportError
        If nothing was flagged
    InvalidParameterError
        If `k` is outside ``[2, n]``
    """
    if report.empty:
        raise EmptyReportError("no flagged pairs to stabilize")
    n = report.resistance.n
    if not 2 <= k <= n:
        raise InvalidParameterError(f"k must be in [2, {n}], not {k}")
    values = report.resistance.values
    flagged = sorted(report.flagged_nodes)
    others = [node for node in range(n) if node not in report.flagged_nodes]
    chosen: List[int] = []
    for pool, columns in ((flagged, flagged), (others, list(range(n)))):
        row_sums = {node: float(values[node, columns].sum()) for node in pool}
        remaining = list(pool)
        while remaining and len(chosen) < k:
            if policy is TargetPolicy.ROW_SUM or not chosen:
                best = min(remaining, key=lambda node: (-_key(row_sums[node]), node))
            else:
                best = min(
                    remaining,
                    key=lambda node: (
                        -_key(min(values[node, c] for c in chosen)),
                        -_key(row_sums[node]),
                        node,
                    ),
                )
            chosen.append(best)
            remaining.remove(best)
    return chosen


def place_stabilizer(
    g: WeightedGraph,
    report: DesyncReport,
    k: int,
    weight: float,
    policy: TargetPolicy = TargetPolicy.SPREAD,
) -> StabilizerResult:
    """Add a stabilizer node (id ``g.n``) wired to `k` high-resistance nodes.

    Returns the grown graph, the change in λ₂ and the change in the largest
    resistance among the previously flagged pairs. Neither delta is
    guaranteed to have a particular sign for λ₂: a weakly attached node can
    lower the algebraic connectivity even though no resistance increases.

    Raises
    ------
    EmptyReportError
        If nothing was flagged
    InvalidParameterError
        If `k` is outside ``[2, n]`` or `weight` is not positive
    """
    if not weight > 0:
        raise InvalidParameterError(f"weight must be positive, not {weight}")
    if report.resistance.n != g.n:
        raise InvalidParameterError("report was computed for a different graph")
    targets = stabilizer_targets(report, k, policy)
    before = _decompose_undirected(g)
    g2 = add_node(g, targets, weight)
    after = _decompose_undirected(g2)
    rm2 = resistance_matrix(after)
    delta_lambda2 = after.lambda2 - before.lambda2
    delta_max_r = report.max_flagged_resistance(rm2) - report.max_flagged_resistance()
    logger.info(
        "Stabilizer %d -> %s: Δλ₂=%g, Δmax R=%g", g.n, targets, delta_lambda2, delta_max_r
    )
    return StabilizerResult(g2, delta_lambda2, delta_max_r)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Final state of :func:`kuramoto_simulate`."""

    theta_final: Vector
    locked: bool
    max_edge_phase_diff: float
    frequency_spread: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta_final": [round_float(value) for value in self.theta_final],
            "locked": self.locked,
            "max_edge_phase_diff": round_float(self.max_edge_phase_diff),
            "frequency_spread": round_float(self.frequency_spread),
        }


def _kuramoto_rhs(theta: Vector, omega: Vector, weights: Matrix) -> Vector:
    # diff[i, j] = θⱼ − θᵢ
    diff = theta[None, :] - theta[:, None]
    return omega + np.sum(weights * np.sin(diff), axis=1)


def wrap_phase(delta: Any) -> Any:
    """Map phase differences to (−π, π]."""
    return np.pi - np.mod(np.pi - np.asarray(delta), 2 * np.pi)


def kuramoto_simulate(
    g: WeightedGraph,
    omega: OmegaLike,
    theta0: Optional[Sequence[float]] = None,
    dt: float = DEFAULT_DT,
    t_max: float = DEFAULT_T_MAX,
    *,
    lock_tol: float = DEFAULT_LOCK_TOL,
) -> SimulationResult:
    """Integrate the Kuramoto model with fixed-step classical RK4.

    The run is `locked` if at `t_max` every instantaneous frequency is within
    `lock_tol` of the mean frequency.

    Raises
    ------
    DisconnectedGraphError
        If `g` is not connected
    NonFiniteStateError
        If the state blows up (`dt` too large)
    """
    if g.directed:
        raise DirectedGraphError("simulation requires an undirected graph")
    if not is_connected(g):
        raise DisconnectedGraphError("simulation requires a connected graph")
    if not dt > 0:
        raise InvalidParameterError(f"dt must be positive, not {dt}")
    if not t_max > dt:
        raise InvalidParameterError(f"t_max must exceed dt, got t_max={t_max}, dt={dt}")
    freqs = _as_frequencies(omega, g.n)
    weights = np.array(g.weights)
    w = freqs.omega
    theta = np.zeros(g.n) if theta0 is None else np.array(theta0, dtype=np.float64)
    if theta.shape != (g.n,):
        raise InvalidParameterError(f"theta0 must have {g.n} entries")
    steps = int(math.ceil(t_max / dt - 1e-9))
    for step in range(steps):
        k1 = _kuramoto_rhs(theta, w, weights)
        k2 = _kuramoto_rhs(theta + 0.5 * dt * k1, w, weights)
        k3 = _kuramoto_rhs(theta + 0.5 * dt * k2, w, weights)
        k4 = _kuramoto_rhs(theta + dt * k3, w, weights)
        theta = theta + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % 64 == 0 and not np.all(np.isfinite(theta)):
            raise NonFiniteStateError(f"state became non-finite at t={(step + 1) * dt:g}")
    if not np.all(np.isfinite(theta)):
        raise NonFiniteStateError("state became non-finite")
    velocity = _kuramoto_rhs(theta, w, weights)
    spread = float(np.max(np.abs(velocity - velocity.mean())))
    edges = g.edges()
    if edges:
        us = np.array([edge.u for edge in edges])
        vs = np.array([edge.v for edge in edges])
        max_diff = float(np.max(np.abs(wrap_phase(theta[us] - theta[vs]))))
    else:
        max_diff = 0.0
    locked = spread < lock_tol
    logger.debug("Simulated %d RK4 steps: spread=%g locked=%s", steps, spread, locked)
    return SimulationResult(theta, locked, max_diff, spread)


@dataclass(frozen=True)
class SyncVerification:
    """Paired outcome of the spectral test and the simulator."""

    einf_norm: float
    stable: bool
    locked: bool
    max_edge_phase_diff: float
    acyclic: bool

    @property
    def agrees(self) -> bool:
        """Whether the simulator confirms the spectral verdict.

        On trees both directions are checked; on graphs with cycles only
        ``stable ⟹ locked`` is required.
        """
        if self.acyclic:
            return self.stable == (self.locked and self.max_edge_phase_diff < math.pi / 2)
        return self.locked or not self.stable

    def to_dict(self) -> Dict[str, Any]:
        return {
            "einf_norm": round_float(self.einf_norm),
            "stable": self.stable,
            "locked": self.locked,
            "max_edge_phase_diff": round_float(self.max_edge_phase_diff),
            "acyclic": self.acyclic,
            "agrees": self.agrees,
        }


def verify_synchronization(
    g: WeightedGraph,
    omega: OmegaLike,
    theta0: Optional[Sequence[float]] = None,
    dt: float = DEFAULT_DT,
    t_max: float = DEFAULT_T_MAX,
    *,
    lock_tol: float = DEFAULT_LOCK_TOL,
) -> SyncVerification:
    """Run :func:`einf_norm_condition` and :func:`kuramoto_simulate` side by side.

    Disagreements are logged as warnings, including the ``locked ⟹ stable``
    direction on graphs with cycles, where the spectral test is not known to
    be necessary.
    """
    analysis = einf_norm_condition(g, omega)
    result = kuramoto_simulate(g, omega, theta0, dt, t_max, lock_tol=lock_tol)
    verification = SyncVerification(
        einf_norm=analysis.einf_norm,
        stable=analysis.stable,
        locked=result.locked,
        max_edge_phase_diff=result.max_edge_phase_diff,
        acyclic=g.num_edges == g.n - 1,
    )
    if not verification.agrees:
        logger.warning(
            "Simulator disagrees with spectral test: einf_norm=%g locked=%s",
            analysis.einf_norm,
            result.locked,
        )
    elif not verification.acyclic and result.locked and not analysis.stable:
        logger.warning(
            "Cyclic graph locked although einf_norm=%g ≥ 1 (counterexample to the converse)",
            analysis.einf_norm,
        )
    return verification
