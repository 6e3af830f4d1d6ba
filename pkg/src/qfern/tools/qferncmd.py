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

"""Command-line front end: ``qfern generate|analyze|rewire|sync``.

Exit status is 0 on success, 2 for invalid arguments, 3 for unreadable or
malformed input and unwritable output, and 4 when the graph does not have the
structure a command needs (e.g. it is disconnected).
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Optional, Sequence, Tuple

from decorator import decorator

from .. import __version__
from ..core import (
    DisconnectedGraphError,
    GraphParseError,
    GraphStructureError,
    InvalidNodeError,
    InvalidParameterError,
    WeightedGraph,
)
from ..cuts import MAX_EXACT_NODES, check_cheeger_inequality, cheeger
from ..graph import component_count, export_dot, load_graph, random_dag, save_graph, symmetrize
from ..output import RunManifest, save_matrix_csv, write_json
from ..rewire import CandidatePolicy, GradientMode, RewiringConfig, rewire_optimize
from ..spectral import (
    ResistanceMatrix,
    decompose,
    laplacian,
    resistance_matrix,
    total_effective_resistance,
)
from ..sync import (
    FrequencyVector,
    SimulationConfig,
    StabilizerConfig,
    TargetPolicy,
    ThresholdPolicy,
    detect_desync_regions,
    einf_norm_condition,
    load_frequencies,
    place_stabilizer,
    stabilizer_targets,
    verify_synchronization,
)

logger = logging.getLogger("qfern.tools.qferncmd")
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_STRUCTURE = 4


@decorator
def _exit_status(func, *args, **kwargs) -> int:
    """Map library exceptions to the documented exit codes."""
    try:
        return func(*args, **kwargs)
    except (InvalidParameterError, InvalidNodeError) as error:
        logger.error("Invalid argument: %s", error)
        return EXIT_USAGE
    except GraphParseError as error:
        logger.error("Malformed input: %s", error)
        return EXIT_IO
    except OSError as error:
        logger.error("I/O error: %s", error)
        return EXIT_IO
    except GraphStructureError as error:
        logger.error("Unsuitable graph: %s", error)
        return EXIT_STRUCTURE


def _manifest(command: str, args: argparse.Namespace, seed: Optional[int] = None) -> RunManifest:
    params = {
        key: str(value) if isinstance(value, Path) else value
        for key, value in vars(args).items()
        if key not in {"func", "verbose"}
    }
    return RunManifest(command, params, seed)


def _load_undirected(path: Path, manifest: RunManifest) -> Tuple[WeightedGraph, bool]:
    """Load, digest and symmetrize the input graph, requiring connectivity."""
    g = load_graph(path)
    manifest.add_input(path)
    if g.directed:
        logger.info("Symmetrizing directed input %s", path)
    undirected = symmetrize(g)
    components = component_count(undirected)
    if components > 1:
        raise DisconnectedGraphError(f"{path} is not connected", components)
    return undirected, g.directed


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _write_resistance(rm: ResistanceMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        rm.write_csv(f)


def _dot(g: WeightedGraph, name: str, **kwargs: Any) -> str:
    averages = resistance_matrix(decompose(g)).average()
    return export_dot(g, averages, name=name, **kwargs)


@_exit_status
def cmd_generate(args: argparse.Namespace) -> int:
    g = random_dag(args.n, args.p, args.seed)
    save_graph(g, args.output)
    _manifest("generate", args, args.seed).save(f"{args.output}.manifest.json")
    logger.info("Wrote %r to %s", g, args.output)
    return EXIT_OK


@_exit_status
def cmd_analyze(args: argparse.Namespace) -> int:
    manifest = _manifest("analyze", args)
    g, symmetrized = _load_undirected(args.graph, manifest)
    decomp = decompose(g)
    cut = cheeger(g, decomp)
    check = check_cheeger_inequality(cut.ratio, decomp.lambda2, float(g.degrees().max()))
    rm = resistance_matrix(decomp)
    if decomp.degenerate_lambda2:
        logger.warning("λ₂ is degenerate; the Fiedler vector is not unique")
    report = {
        "n": g.n,
        "num_edges": g.num_edges,
        "symmetrized": symmetrized,
        "lambda2": decomp.lambda2,
        "fiedler": decomp.fiedler,
        "degenerate_lambda2": decomp.degenerate_lambda2,
        "cheeger": {**cut.to_dict(), "method": "exact" if g.n <= MAX_EXACT_NODES else "sweep"},
        "cheeger_inequality_ok": check.holds,
        "cheeger_inequality": check.to_dict(),
        "r_total": total_effective_resistance(rm),
        "average_resistance": rm.average(),
    }
    write_json(report, args.output)
    _write_resistance(rm, f"{args.output}.resistance.csv")
    if args.dot:
        _write_text(args.dot, _dot(g, "analysis"))
    manifest.save(f"{args.output}.manifest.json")
    return EXIT_OK


@_exit_status
def cmd_rewire(args: argparse.Namespace) -> int:
    config = RewiringConfig(
        alpha=args.alpha,
        gradient_mode=GradientMode(args.mode),
        max_iterations=args.iters,
        patience=args.patience,
        seed=args.seed,
        candidate_policy=CandidatePolicy(args.candidates),
    )
    manifest = _manifest("rewire", args, args.seed)
    g = _load_undirected(args.graph, manifest)[0]
    report = rewire_optimize(g, config)
    prefix = args.output
    save_graph(report.final, f"{prefix}.final.txt")
    save_matrix_csv(report.asoft.weights, f"{prefix}.asoft.csv")
    save_matrix_csv(laplacian(report.final), f"{prefix}.laplacian.csv")
    save_matrix_csv(laplacian(report.asoft), f"{prefix}.asoft-laplacian.csv")
    for suffix, graph in [("before", report.initial), ("after", report.final)]:
        _write_resistance(resistance_matrix(decompose(graph)), f"{prefix}.resistance.{suffix}.csv")
    write_json(report.to_dict(), f"{prefix}.report.json")
    with open(f"{prefix}.trace.csv", "w", encoding="utf-8") as f:
        report.write_trace_csv(f)
    _write_text(f"{prefix}.before.dot", _dot(report.initial, "before"))
    _write_text(f"{prefix}.after.dot", _dot(report.final, "after"))
    manifest.save(f"{prefix}.manifest.json")
    logger.info(
        "Accepted %d of %d swaps: h %g -> %g",
        report.accepted_moves,
        len(report.iterations),
        report.initial_metrics.h,
        report.final_metrics.h,
    )
    return EXIT_OK


@_exit_status
def cmd_sync(args: argparse.Namespace) -> int:
    if args.threshold is not None:
        policy = ThresholdPolicy.absolute(args.threshold)
    else:
        policy = ThresholdPolicy.quantile(args.quantile)
    stabilizer = StabilizerConfig(args.k, args.weight, TargetPolicy(args.policy))
    simulation = SimulationConfig(args.dt, args.t_max)
    seed = args.omega_seed if args.omega is None else None
    manifest = _manifest("sync", args, seed)
    g = _load_undirected(args.graph, manifest)[0]
    if args.omega is not None:
        omega = load_frequencies(args.omega)
        manifest.add_input(args.omega)
    else:
        omega = FrequencyVector.random(g.n, args.omega_seed)
    if omega.n != g.n:
        raise InvalidParameterError(f"expected {g.n} frequencies, got {omega.n}")
    if stabilizer.k > g.n:
        raise InvalidParameterError(f"k must be in [2, {g.n}], not {stabilizer.k}")

    prefix = args.output
    analysis = einf_norm_condition(g, omega)
    write_json(analysis.to_dict(), f"{prefix}.analysis.json")
    report = detect_desync_regions(g, omega, policy)
    write_json(report.to_dict(), f"{prefix}.desync.json")
    with open(f"{prefix}.desync.csv", "w", encoding="utf-8") as f:
        report.write_csv(f)
    _write_text(f"{prefix}.before.dot", _dot(g, "before", highlight=report.flagged_nodes))

    if report.empty:
        logger.warning("No pairs above threshold %g; no stabilizer placed", report.threshold)
        stabilized = None
    else:
        targets = stabilizer_targets(report, stabilizer.k, stabilizer.policy)
        result = place_stabilizer(g, report, stabilizer.k, stabilizer.weight, stabilizer.policy)
        stabilized = result.g2
        save_graph(stabilized, f"{prefix}.stabilized.txt")
        write_json(
            {
                **stabilizer.to_dict(),
                "node": g.n,
                "targets": targets,
                "delta_lambda2": result.delta_lambda2,
                "delta_max_r": result.delta_max_r,
            },
            f"{prefix}.stabilizer.json",
        )
        _write_text(
            f"{prefix}.after.dot",
            _dot(stabilized, "after", highlight=report.flagged_nodes, stabilizers=[g.n]),
        )

    if args.simulate:
        verification = verify_synchronization(
            g, omega, dt=simulation.dt, t_max=simulation.t_max, lock_tol=simulation.lock_tol
        )
        write_json(
            {**verification.to_dict(), "simulation": simulation.to_dict()},
            f"{prefix}.simulation.json",
        )
    manifest.save(f"{prefix}.manifest.json")
    print(f"einf_norm={analysis.einf_norm:.6g} stable={analysis.stable}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfern", description="Spectral bottleneck analysis and rewiring of weighted graphs"
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="Increase logging (repeatable)"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser("generate", help="Generate a random DAG")
    generate.add_argument("-n", type=int, required=True, help="Number of nodes (at least 2)")
    generate.add_argument("-p", type=float, required=True, help="Edge probability in [0, 1]")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("-o", "--output", type=Path, required=True, metavar="FILE")
    generate.set_defaults(func=cmd_generate)

    analyze = subparsers.add_parser("analyze", help="Spectral, Cheeger and resistance report")
    analyze.add_argument("graph", type=Path)
    analyze.add_argument("-o", "--output", type=Path, required=True, metavar="FILE")
    analyze.add_argument("--dot", type=Path, metavar="FILE", help="Also write a DOT rendering")
    analyze.set_defaults(func=cmd_analyze)

    rewire = subparsers.add_parser("rewire", help="Optimize the Cheeger constant by edge swaps")
    rewire.add_argument("graph", type=Path)
    rewire.add_argument("--alpha", type=float, default=0.05, help="Soft update step size")
    rewire.add_argument(
        "--mode", choices=[mode.value for mode in GradientMode], default=GradientMode.SIGNED.value
    )
    rewire.add_argument("--iters", type=int, default=50, help="Maximum iterations")
    rewire.add_argument(
        "--patience", type=int, default=0, help="Stop after this many rejected swaps (0: never)"
    )
    rewire.add_argument("--seed", type=int, default=0)
    rewire.add_argument(
        "--candidates",
        choices=[policy.value for policy in CandidatePolicy],
        default=CandidatePolicy.CROSS_PARTITION.value,
    )
    rewire.add_argument("-o", "--output", required=True, metavar="PREFIX")
    rewire.set_defaults(func=cmd_rewire)

    sync = subparsers.add_parser("sync", help="Synchronization analysis and stabilizer placement")
    sync.add_argument("graph", type=Path)
    omega = sync.add_mutually_exclusive_group(required=True)
    omega.add_argument("--omega", type=Path, metavar="FILE", help="One frequency per line")
    omega.add_argument("--omega-seed", type=int, help="Draw frequencies from U[-1, 1]")
    threshold = sync.add_mutually_exclusive_group()
    threshold.add_argument("--quantile", type=float, default=0.5)
    threshold.add_argument("--threshold", type=float, help="Absolute resistance threshold")
    sync.add_argument("-k", type=int, default=2, help="Number of stabilizer targets")
    sync.add_argument("--weight", type=float, default=1.0, help="Stabilizer edge weight")
    sync.add_argument(
        "--policy", choices=[policy.value for policy in TargetPolicy], default="spread"
    )
    sync.add_argument("--simulate", action="store_true", help="Verify with the Kuramoto model")
    sync.add_argument("--dt", type=float, default=SimulationConfig.dt)
    sync.add_argument("--t-max", type=float, default=SimulationConfig.t_max)
    sync.add_argument("-o", "--output", required=True, metavar="PREFIX")
    sync.set_defaults(func=cmd_sync)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING)
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        level = logging.INFO if args.verbose == 1 else logging.DEBUG
        logging.getLogger("qfern").setLevel(level)
    return args.func(args)
