"""Command-line entry point: ``ctqwloc <command> [flags]``.

Validation failures exit with status 2 and a single ``error:`` line on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import io, plotting, qwalk
from .ensemble import EnsembleError, default_t_grid, ensemble_mean_ipr, plateau, plateau_stderr
from .graph import DegenerateGraphError, GraphError, connected_components, hamiltonian, mean_clustering
from .netgen import GeneratorError, GeneratorSpec, normalize_model, recursive_triangle, generate
from .spectral import DEFAULT_TAU, SpectralError, eig_sym

log = logging.getLogger("ctqwloc")

MODEL_FLAGS = {
    "recursive_triangle": {"depth"},
    "ring": {"n"},
    "nws": {"n", "p"},
    "kleinberg_ring": {"n", "q", "alpha", "allow_self_edges", "resample"},
    "holme_kim": {"n", "p_triangle", "triad_mode"},
}
ALL_MODEL_FLAGS = set().union(*MODEL_FLAGS.values())


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, help="recursive-triangle, ring, nws, kleinberg, holme-kim")
    size = p.add_mutually_exclusive_group()
    size.add_argument("--depth", type=int, help="recursive-triangle depth d")
    size.add_argument("--n", type=int, help="number of nodes N")
    p.add_argument("--p", type=float, help="NWS shortcut probability per ring edge")
    p.add_argument("--q", type=int, help="Kleinberg draws per node")
    p.add_argument("--alpha", type=float, help="Kleinberg clustering exponent")
    p.add_argument("--p-triangle", dest="p_triangle", type=float, help="Holme-Kim triangle probability")
    p.add_argument("--triad-mode", dest="triad_mode", choices=("budget", "additive"), help="Holme-Kim triangle rule")
    p.add_argument("--resample", action="store_true", default=None, help="Kleinberg: retry draws that hit existing edges")
    p.add_argument("--allow-self-edges", dest="allow_self_edges", action="store_true", default=None)
    p.add_argument("--seed", type=int, help="64-bit seed (required for stochastic models)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctqwloc", description="Quantum-walk localization on networks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("netgen", help="generate a network and write its edge list")
    _add_model_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and degeneracy structure of H")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--allow-self-edges", dest="allow_self_edges", action="store_true")

    p = sub.add_parser("longtime", help="long-time mean transition matrix and IPRs")
    p.add_argument("--graph", required=True)
    p.add_argument("--out-pi", dest="out_pi", required=True)
    p.add_argument("--out-ipr", dest="out_ipr", required=True)
    p.add_argument("--gaps-out", dest="gaps_out")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--figure", help="write a pi_bar / IPR_bar figure (png, pdf, svg)")
    p.add_argument("--allow-self-edges", dest="allow_self_edges", action="store_true")

    p = sub.add_parser("evolve", help="probability trajectory from a start node")
    p.add_argument("--graph", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--t-max", dest="t_max", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--figure")
    p.add_argument("--allow-self-edges", dest="allow_self_edges", action="store_true")

    p = sub.add_parser("ensemble", help="sample-mean IPR curve over seeded instantiations")
    _add_model_flags(p)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--start", type=int, default=50)
    p.add_argument("--t-max", dest="t_max", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--tail", type=float, default=0.2)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--summary", required=True)
    p.add_argument("--figure")

    p = sub.add_parser("verify", help="run acceptance suites and write a JSON report")
    p.add_argument("--suite", action="append", choices=("golden", "properties", "ensemble", "all"))
    p.add_argument("--out", help="JSON report path (default: stdout only)")
    p.add_argument("--runs", type=int, default=1000, help="runs per ensemble configuration")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _spec_from_args(args) -> GeneratorSpec:
    try:
        model = normalize_model(args.model)
    except GeneratorError as exc:
        raise UsageError(str(exc)) from exc
    given = {k for k in ALL_MODEL_FLAGS if getattr(args, k, None) is not None}
    extra = given - MODEL_FLAGS[model]
    if extra:
        flags = ", ".join("--" + f.replace("_", "-") for f in sorted(extra))
        raise UsageError(f"{flags} not valid for model {model}")
    if model == "recursive_triangle" and args.depth is None:
        raise UsageError("--depth is required for recursive-triangle")
    if model != "recursive_triangle" and args.n is None:
        raise UsageError(f"--n is required for {model}")
    kwargs = {k: getattr(args, k) for k in given}
    try:
        spec = GeneratorSpec(model, **kwargs)
    except GeneratorError as exc:
        raise UsageError(str(exc)) from exc
    if spec.stochastic and args.seed is None:
        raise UsageError(f"--seed is required for stochastic model {model}")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    return spec


def _check_writable(*paths) -> None:
    for raw in paths:
        if raw is None:
            continue
        p = io.resolve_output(raw)
        parent = p.parent
        while not parent.exists():
            parent = parent.parent
        if p.is_dir() or not os.access(parent if not p.exists() else p, os.W_OK):
            raise UsageError(f"cannot write to {p}")


def _load_graph(path: str, allow_self_edges: bool = False):
    if not Path(path).is_file():
        raise UsageError(f"graph file {path} not found")
    return io.read_edge_list(path, allow_self_edges)


def _decompose(g, tau: float):
    return eig_sym(hamiltonian(g), tau)


def cmd_netgen(args) -> int:
    spec = _spec_from_args(args)
    _check_writable(args.out)
    sidecar = {"spec": spec.to_dict(), "seed": args.seed}
    if spec.model == "recursive_triangle":
        g, gen = recursive_triangle(spec.depth)
        sidecar["generation_of_node"] = list(gen.node)
        sidecar["generation_of_edge"] = [[u, v, gen.edge[(u, v)]] for u, v in g.edge_labels()]
    else:
        g = generate(spec, args.seed)
    sidecar.update(n_nodes=g.n_nodes, n_edges=g.n_edges, mean_clustering=mean_clustering(g))
    out = io.write_edge_list(g, args.out)
    io.write_json(str(out) + ".json", sidecar)
    log.info("wrote %s (N=%d, M=%d)", out, g.n_nodes, g.n_edges)
    return 0


def cmd_spectrum(args) -> int:
    _check_writable(args.out)
    g = _load_graph(args.graph, args.allow_self_edges)
    dec = _decompose(g, args.tau)
    gaps = dec.gaps
    payload = {
        "n_nodes": g.n_nodes,
        "tau": args.tau,
        "eigenvalues": dec.eigenvalues,
        "degeneracy_classes": [[int(i) + 1 for i in c] for c in dec.degeneracy],
        "distinct_eigenvalues": dec.distinct_eigenvalues,
        "gap_classes": {"values": gaps.values, "pair_counts": gaps.sizes},
        "chained": bool(dec.chained or gaps.chained),
        "n_components": len(connected_components(g)),
    }
    io.write_json(args.out, payload)
    return 0


def cmd_longtime(args) -> int:
    _check_writable(args.out_pi, args.out_ipr, args.gaps_out, args.figure)
    g = _load_graph(args.graph, args.allow_self_edges)
    warnings = []
    components = connected_components(g)
    if len(components) > 1:
        warnings.append(f"graph has {len(components)} connected components")
    res = qwalk.longtime(_decompose(g, args.tau), warnings)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    io.write_matrix_csv(args.out_pi, res.pi_bar)
    io.write_vector_csv(args.out_ipr, res.ipr_bar, "ipr_bar")
    if args.gaps_out:
        io.write_json(
            args.gaps_out,
            {
                "delta_abs": res.delta_abs,
                "delta_rel": res.delta_rel,
                "ipr_max": float(res.ipr_bar.max()),
                "ipr_min": float(res.ipr_bar.min()),
                "argmax_nodes": [int(i) + 1 for i in np.flatnonzero(res.ipr_bar >= res.ipr_bar.max() - 1e-9)],
                "tau": res.tolerance_used,
                "warnings": res.warnings,
            },
        )
    if args.figure:
        plotting.longtime(res.pi_bar, res.ipr_bar, io.resolve_output(args.figure))
    return 0


def cmd_evolve(args) -> int:
    if args.t_max < 0 or args.dt <= 0:
        raise UsageError("--t-max must be >= 0 and --dt > 0")
    _check_writable(args.out, args.figure)
    g = _load_graph(args.graph, args.allow_self_edges)
    if not 1 <= args.start <= g.n_nodes:
        raise UsageError(f"--start {args.start} out of range [1, {g.n_nodes}]")
    t = default_t_grid(args.t_max, args.dt) if args.t_max > 0 else np.zeros(1)
    probs = qwalk.probability_trajectory(_decompose(g, DEFAULT_TAU), args.start, t)
    io.write_trajectory_csv(args.out, t, probs)
    if args.figure:
        plotting.trajectory(t, probs, io.resolve_output(args.figure), args.start)
    return 0


def cmd_ensemble(args) -> int:
    spec = _spec_from_args(args)
    if args.runs < 1 or args.workers < 1:
        raise UsageError("--runs and --workers must be >= 1")
    if args.t_max <= 0 or args.dt <= 0:
        raise UsageError("--t-max and --dt must be > 0")
    if not 0 < args.tail <= 1:
        raise UsageError("--tail must lie in (0, 1]")
    _check_writable(args.out, args.summary, args.figure)
    seed = args.seed if args.seed is not None else 0
    try:
        curve = ensemble_mean_ipr(spec, args.runs, seed, args.start, default_t_grid(args.t_max, args.dt), args.workers)
    except EnsembleError as exc:
        raise UsageError(str(exc)) from exc
    io.write_curve_csv(args.out, curve)
    io.write_json(
        args.summary,
        {
            "spec": spec.to_dict(),
            "seed": args.seed,
            "n_runs": curve.n_runs,
            "start_node": args.start,
            "t_max": args.t_max,
            "dt": args.dt,
            "tail_fraction": args.tail,
            "plateau": plateau(curve, args.tail),
            "plateau_stderr": plateau_stderr(curve, args.tail),
            "regenerations": curve.regenerations,
        },
    )
    if args.figure:
        plotting.ensemble_curves([curve], io.resolve_output(args.figure))
    return 0


def cmd_verify(args) -> int:
    from . import verify

    suites = args.suite or ["golden", "properties"]
    if "all" in suites:
        suites = list(verify.SUITES)
    _check_writable(args.out)
    results = verify.run_suites(suites, n_runs=args.runs, workers=args.workers)
    for r in results:
        print(r.line())
    rep = verify.report(results, suites)
    if args.out:
        io.write_json(args.out, rep)
    return 0 if rep["passed"] else 1


COMMANDS = {
    "netgen": cmd_netgen,
    "spectrum": cmd_spectrum,
    "longtime": cmd_longtime,
    "evolve": cmd_evolve,
    "ensemble": cmd_ensemble,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("no command given")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, GeneratorError, SpectralError, DegenerateGraphError, qwalk.WalkError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
