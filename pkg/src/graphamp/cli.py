"""Command-line surface.

Subcommands: validate, amplitude, probability, ladder-certify, spectrum,
oscillator, and oracle {quadrature, phi, scc}. Every command is
deterministic given its inputs and flags; random link values always come
from an explicit seed that is recorded in the output. Exit statuses:
0 success, 1 parse failure, 2 validation failure, 3 violated mathematical
precondition.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize
from .chain_complex import ChainComplex, build_boundary_1, verify_boundary_of_boundary
from .errors import (
    GraphParseError,
    GraphStructureError,
    NullModeError,
    PlaquetteError,
    RankLimitError,
    RowSpaceError,
    SingularMatrixError,
)
from .gaussian_engine import mode_distribution, partition_function, spectral_decompose
from .graph_io import load_graph
from .ladder_family import (
    LadderSpec,
    build_ladder,
    certify_ladder,
    closed_form_spectrum,
    phi_mixed,
    phi_spatial,
    phi_temporal,
)
from .oracle import (
    GAUSS_HERMITE,
    TRAPEZOID,
    QuadratureSpec,
    direct_phi,
    exhaustive_scc_check,
    quadrature_log_z,
)
from .oscillator_action import OscillatorParams, build_oscillator_K, pattern_match_laplacian
from .scc_core import NULL_EIGENVALUE_RTOL, SccConfig, build_J, build_K

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_PRECONDITION = 3

RANDOM_E_LO = -10
RANDOM_E_HI = 10


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_graph(args):
    """Graph from a file or from the ladder generator; exactly one source."""
    has_file = getattr(args, "input", None) is not None
    has_ladder = getattr(args, "ladder", None) is not None
    if has_file == has_ladder:
        raise GraphParseError("exactly one input source required: a graph file or --ladder N")
    if has_file:
        graph, file_values = load_graph(args.input)
        return graph, file_values, {"input": args.input, "ladder": None}
    spec = LadderSpec(args.ladder, alpha=args.alpha, beta=args.beta, hbar_beta=args.hbar_beta)
    return build_ladder(spec), None, {"input": None, "ladder": args.ladder}


def _resolve_link_values(args, graph, file_values):
    """Link values per --links const:<v>|file|randint:<lo>:<hi>:<seed>."""
    spec = getattr(args, "links", None)
    if spec is None:
        spec = "file" if file_values is not None else "const:1"
    if spec == "file":
        if file_values is None:
            raise ValueError("--links file requested but the input carries no link_values")
        return file_values, spec, None
    if spec.startswith("const:"):
        try:
            value = float(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad --links constant in {spec!r}") from None
        return np.full(graph.n_links, value), spec, None
    if spec.startswith("randint:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise ValueError(f"--links randint wants randint:<lo>:<hi>:<seed>, got {spec!r}")
        try:
            lo, hi, seed = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise ValueError(f"bad --links randint fields in {spec!r}") from None
        if hi < lo:
            raise ValueError("--links randint upper bound below lower bound")
        rng = np.random.default_rng(seed)
        values = rng.integers(lo, hi + 1, size=graph.n_links).astype(float)
        return values, spec, seed
    raise ValueError(f"unrecognized --links spec {spec!r}")


def _meta(args, command, source_meta, links_desc=None, seed=None) -> dict:
    return {
        "command": command,
        "input": source_meta.get("input"),
        "ladder": source_meta.get("ladder"),
        "alpha": args.alpha,
        "beta": args.beta,
        "hbar_beta": args.hbar_beta,
        "links": links_desc,
        "seed": seed,
    }


def cmd_validate(args) -> int:
    graph, file_values, source_meta = _resolve_graph(args)
    d1 = build_boundary_1(graph)
    report: dict = {
        "meta": _meta(args, "validate", source_meta),
        "structure": {
            "ok": True,
            "vertices": graph.n_vertices,
            "links": graph.n_links,
            "plaquettes": graph.n_plaquettes,
        },
    }
    all_ok = True

    try:
        cc = ChainComplex.from_graph(graph)
        check = verify_boundary_of_boundary(cc)
        report["boundary_of_boundary"] = {
            "ok": bool(check.ok),
            "max_abs_residual": int(np.max(np.abs(check.residual), initial=0)),
        }
        all_ok = all_ok and check.ok
    except PlaquetteError as exc:
        report["boundary_of_boundary"] = {"ok": False, "error": str(exc)}
        all_ok = False

    eigenvalues, eigenvectors = np.linalg.eigh((d1 @ d1.T).astype(float))
    threshold = NULL_EIGENVALUE_RTOL * float(np.max(np.abs(eigenvalues), initial=0.0))
    rank = int(np.sum(eigenvalues > threshold))
    null_dim = graph.n_vertices - rank
    uniform = np.full(graph.n_vertices, 1.0 / np.sqrt(graph.n_vertices))
    report["spectrum"] = {
        "rank": rank,
        "null_dimension": null_dim,
        "connected": null_dim == 1,
        "uniform_null_overlap": abs(float(eigenvectors[:, 0] @ uniform)),
    }

    if file_values is not None:
        j = d1.astype(float) @ file_values
        divergence = float(j.sum())
        div_ok = abs(divergence) <= 1e-12 * (1.0 + float(np.abs(j).sum()))
        report["divergence"] = {"ok": div_ok, "sum": divergence}
        all_ok = all_ok and div_ok

    report["all_ok"] = all_ok
    _emit(args, serialize.dumps_json(report))
    return EXIT_OK if all_ok else EXIT_VALIDATION


def cmd_amplitude(args) -> int:
    graph, file_values, source_meta = _resolve_graph(args)
    values, links_desc, seed = _resolve_link_values(args, graph, file_values)
    cc = ChainComplex.from_graph(graph)
    config = SccConfig(args.alpha, args.beta)
    K = build_K(cc, config)
    J = build_J(cc, values, config)
    amp = partition_function(K, J, hbar_beta=args.hbar_beta)
    doc = {
        "meta": _meta(args, "amplitude", source_meta, links_desc, seed),
        "logZ": amp.log_z,
        "exponent": amp.exponent,
        "phi": amp.phi,
        "null_count": amp.null_count,
        "modes": [
            {"a": a, "jhat": jh}
            for a, jh in zip(amp.eigenvalues_used, amp.projections)
        ],
    }
    if args.oracle:
        rank = len(amp.eigenvalues_used)
        if rank <= 4:
            quad = quadrature_log_z(K, J, QuadratureSpec(mode=args.quadrature_mode))
            doc["oracle"] = {
                "mode": quad.mode,
                "points_per_axis": quad.points_per_axis,
                "logZ": quad.log_z,
                "estimated_error": quad.estimated_error,
                "abs_diff": abs(quad.log_z - amp.log_z),
                "rel_diff": abs(quad.log_z - amp.log_z) / max(1.0, abs(amp.log_z)),
            }
        else:
            doc["oracle"] = {"skipped": f"row-space rank {rank} exceeds the quadrature cap of 4"}
    _emit(args, serialize.dumps_json(doc))
    return EXIT_OK


def cmd_probability(args) -> int:
    graph, file_values, source_meta = _resolve_graph(args)
    values, links_desc, seed = _resolve_link_values(args, graph, file_values)
    cc = ChainComplex.from_graph(graph)
    config = SccConfig(args.alpha, args.beta)
    K = build_K(cc, config)
    J = build_J(cc, values, config)
    sd = spectral_decompose(K)
    dist = mode_distribution(sd, J, args.mode, hbar_beta=args.hbar_beta)
    sigma = np.sqrt(dist.variance)
    lo = args.q0_min if args.q0_min is not None else dist.mean - 8.0 * sigma
    hi = args.q0_max if args.q0_max is not None else dist.mean + 8.0 * sigma
    grid = np.linspace(lo, hi, args.q0_points)
    density = dist.density(grid)
    meta = _meta(args, "probability", source_meta, links_desc, seed)
    meta.update(
        {
            "mode_index": args.mode,
            "a_k": dist.a_k,
            "jhat_k": dist.jhat_k,
            "density_mode": dist.mean,
        }
    )
    if args.format == "json":
        doc = dict(meta=meta, rows=[[q, d] for q, d in zip(grid, density)])
        _emit(args, serialize.dumps_json(doc))
    else:
        _emit(
            args,
            serialize.csv_lines(
                ("q0", "density"),
                ([q, d] for q, d in zip(grid, density)),
                preamble=meta,
            ),
        )
    return EXIT_OK


def _parse_n_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"--n-range wants START:STOP[:STEP], got {text!r}")
    start, stop = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 2
    if step <= 0:
        raise ValueError("--n-range step must be positive")
    return list(range(start, stop + 1, step))


def cmd_ladder_certify(args) -> int:
    ns = [args.n] if args.n is not None else _parse_n_range(args.n_range)
    for n in ns:
        if n < 2 or n % 2:
            raise ValueError(f"ladder sizes must be even and >= 2, got {n}")
        if n > args.max_n:
            raise ValueError(f"n={n} exceeds the default guard of {args.max_n} (raise --max-n)")
    results = []
    worst: dict[tuple[int, str], float] = {}
    first_failure = None
    for n in ns:
        spec = LadderSpec(n, alpha=args.alpha, beta=args.beta, hbar_beta=args.hbar_beta)
        for trial in range(args.trials):
            rng = np.random.default_rng([args.seed, n, trial])
            e = rng.integers(RANDOM_E_LO, RANDOM_E_HI + 1, size=spec.n_links).astype(float)
            cert = certify_ladder(spec, e)
            results.append({"n": n, "trial": trial, "report": cert.as_dict()})
            for clause in cert.clauses:
                key = (n, clause.clause)
                worst[key] = max(worst.get(key, 0.0), clause.residual)
                if not clause.ok and first_failure is None:
                    first_failure = (n, trial, clause.clause, clause.residual)
    all_pass = first_failure is None
    meta = _meta(args, "ladder-certify", {"input": None, "ladder": None}, None, args.seed)
    meta.update({"n_values": ns, "trials": args.trials})
    if args.format == "csv":
        rows = [[n, clause, residual] for (n, clause), residual in sorted(worst.items())]
        csv_meta = dict(meta, n_values=" ".join(str(n) for n in ns))
        _emit(args, serialize.csv_lines(("n", "clause", "residual"), rows, preamble=csv_meta))
    else:
        doc = {
            "meta": meta,
            "all_pass": all_pass,
            "worst_residuals": [
                {"n": n, "clause": clause, "residual": residual}
                for (n, clause), residual in sorted(worst.items())
            ],
            "results": results,
        }
        _emit(args, serialize.dumps_json(doc))
    if not all_pass:
        n, trial, clause, residual = first_failure
        print(
            f"certification failed: n={n} trial={trial} clause={clause} residual={residual:.6e}",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = LadderSpec(args.ladder, alpha=args.alpha, beta=args.beta, hbar_beta=args.hbar_beta)
    cf = closed_form_spectrum(spec)
    meta = _meta(args, "spectrum", {"input": None, "ladder": args.ladder})
    if args.format == "json":
        doc = {
            "meta": meta,
            "modes": [
                {
                    "j": m.j,
                    "family": m.family,
                    "eigenvalue": m.eigenvalue,
                    "components": list(m.vector),
                }
                for m in cf.modes
            ],
        }
        _emit(args, serialize.dumps_json(doc))
    else:
        header = ["j", "family", "eigenvalue"] + [f"c{i + 1}" for i in range(spec.n)]
        rows = [[m.j, m.family, m.eigenvalue, *m.vector] for m in cf.modes]
        _emit(args, serialize.csv_lines(header, rows, preamble=meta))
    return EXIT_OK


def cmd_oscillator(args) -> int:
    params = OscillatorParams(m=args.m, k=args.k, k12=args.k12, dt=args.dt, n_time=args.slices)
    osc = build_oscillator_K(params)
    ladder_n = 2 * args.slices
    spec = LadderSpec(ladder_n)
    K = build_K(ChainComplex.from_graph(build_ladder(spec)))
    report = pattern_match_laplacian(osc, K)
    if args.format == "csv":
        header = [f"c{i + 1}" for i in range(osc.n)]
        _emit(args, serialize.csv_lines(header, osc.matrix.tolist()))
    else:
        doc = {
            "meta": {
                "command": "oscillator",
                "m": args.m,
                "k": args.k,
                "k12": args.k12,
                "dt": args.dt,
                "slices": args.slices,
                "ladder_n": ladder_n,
            },
            "matrix": osc.matrix.tolist(),
            "pattern_match": report.as_dict(),
        }
        _emit(args, serialize.dumps_json(doc))
    return EXIT_OK


def cmd_oracle_quadrature(args) -> int:
    graph, file_values, source_meta = _resolve_graph(args)
    values, links_desc, seed = _resolve_link_values(args, graph, file_values)
    cc = ChainComplex.from_graph(graph)
    config = SccConfig(args.alpha, args.beta)
    K = build_K(cc, config)
    J = build_J(cc, values, config)
    amp = partition_function(K, J, hbar_beta=args.hbar_beta)
    quad = quadrature_log_z(
        K, J, QuadratureSpec(mode=args.quadrature_mode, points_per_axis=args.points)
    )
    doc = {
        "meta": _meta(args, "oracle quadrature", source_meta, links_desc, seed),
        "rank": quad.rank,
        "analytic_logZ": amp.log_z,
        "quadrature_logZ": quad.log_z,
        "estimated_error": quad.estimated_error,
        "abs_diff": abs(quad.log_z - amp.log_z),
        "rel_diff": abs(quad.log_z - amp.log_z) / max(1.0, abs(amp.log_z)),
    }
    _emit(args, serialize.dumps_json(doc))
    return EXIT_OK


def cmd_oracle_phi(args) -> int:
    spec = LadderSpec(args.ladder, alpha=args.alpha, beta=args.beta, hbar_beta=args.hbar_beta)
    graph = build_ladder(spec)
    values, links_desc, seed = _resolve_link_values(args, graph, None)
    cc = ChainComplex.from_graph(graph)
    K = build_K(cc, spec.config)
    J = build_J(cc, values, spec.config)
    # direct_phi sees K at scale beta; fold beta into the divisor for the
    # beta-free reading of the exponent
    direct = direct_phi(K, J, hbar_beta=args.hbar_beta / args.beta)
    parts = {
        "phi_spatial": phi_spatial(spec, values),
        "phi_temporal": phi_temporal(spec, values),
        "phi_mixed": phi_mixed(spec, values),
    }
    closed = sum(parts.values()) / (2.0 * args.hbar_beta)
    doc = {
        "meta": _meta(args, "oracle phi", {"input": None, "ladder": args.ladder}, links_desc, seed),
        "direct": direct,
        "closed_form": {**parts, "total": closed},
        "abs_diff": abs(direct - closed),
        "rel_diff": abs(direct - closed) / max(1.0, abs(direct)),
    }
    _emit(args, serialize.dumps_json(doc))
    return EXIT_OK


def cmd_oracle_scc(args) -> int:
    report = exhaustive_scc_check(
        max_vertices=args.max_vertices, n_graphs=args.graphs, seed=args.seed
    )
    doc = {
        "meta": {
            "command": "oracle scc",
            "max_vertices": args.max_vertices,
            "graphs": args.graphs,
            "seed": args.seed,
        },
        **report.as_dict(),
    }
    _emit(args, serialize.dumps_json(doc))
    return EXIT_OK if report.all_pass else EXIT_VALIDATION


def _add_scales(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=1.0, help="source-vector scale (J = alpha d1 e)")
    parser.add_argument("--beta", type=float, default=1.0, help="difference-matrix scale (K = beta d1 d1^T)")
    parser.add_argument("--hbar-beta", dest="hbar_beta", type=float, default=1.0,
                        help="scale divisor applied when reporting the exponent phi")


def _add_io(parser: argparse.ArgumentParser, with_graph_input=True) -> None:
    if with_graph_input:
        parser.add_argument("input", nargs="?", help="graph JSON file")
        parser.add_argument("--ladder", type=int, help="generate an N-vertex ladder instead of reading a file")
    parser.add_argument("--links", help="link values: const:<v> | file | randint:<lo>:<hi>:<seed>")
    parser.add_argument("-o", "--output", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphamp",
        description="Boundary operators, self-consistent sources, and restricted "
        "Gaussian partition functions on oriented graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph file's structural and boundary invariants")
    p.add_argument("input", nargs="?", help="graph JSON file")
    p.add_argument("--ladder", type=int, help="validate a generated ladder instead")
    p.add_argument("-o", "--output", help="write output to this path instead of stdout")
    _add_scales(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("amplitude", help="restricted partition function for a graph and link values")
    _add_io(p)
    _add_scales(p)
    p.add_argument("--oracle", action="store_true", help="append a dense-quadrature comparison (rank <= 4)")
    p.add_argument("--quadrature-mode", choices=(GAUSS_HERMITE, TRAPEZOID), default=GAUSS_HERMITE)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("probability", help="outcome density table for one row-space mode")
    _add_io(p)
    _add_scales(p)
    p.add_argument("--mode", type=int, required=True, help="eigenmode index (ascending eigenvalue order)")
    p.add_argument("--q0-min", type=float, default=None)
    p.add_argument("--q0-max", type=float, default=None)
    p.add_argument("--q0-points", type=int, default=401)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_probability)

    p = sub.add_parser("ladder-certify", help="certify ladder closed forms against the generic numerics")
    p.add_argument("--n", type=int, help="single ladder size")
    p.add_argument("--n-range", default="2:40", help="START:STOP[:STEP], default 2:40 step 2")
    p.add_argument("--trials", type=int, default=20, help="random link-value draws per size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=40, help="guard on the largest ladder size")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output", help="write output to this path instead of stdout")
    _add_scales(p)
    p.set_defaults(func=cmd_ladder_certify)

    p = sub.add_parser("spectrum", help="closed-form ladder spectrum")
    p.add_argument("--ladder", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", help="write output to this path instead of stdout")
    _add_scales(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("oscillator", help="discrete two-oscillator action matrix and pattern match")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--k12", type=float, default=-1.0)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--slices", type=int, default=3, help="time slices per oscillator")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output", help="write output to this path instead of stdout")
    p.set_defaults(func=cmd_oscillator)

    p = sub.add_parser("oracle", help="independent brute-force validators")
    orc = p.add_subparsers(dest="oracle_command", required=True)

    q = orc.add_parser("quadrature", help="dense quadrature of the restricted Gaussian vs the closed form")
    _add_io(q)
    _add_scales(q)
    q.add_argument("--quadrature-mode", choices=(GAUSS_HERMITE, TRAPEZOID), default=GAUSS_HERMITE)
    q.add_argument("--points", type=int, default=None, help="points per axis (default 64 GH / 200 trapezoid)")
    q.set_defaults(func=cmd_oracle_quadrature)

    q = orc.add_parser("phi", help="eigen-sum exponent vs the ladder closed forms")
    q.add_argument("--ladder", type=int, required=True)
    q.add_argument("--links", help="link values: const:<v> | randint:<lo>:<hi>:<seed>")
    q.add_argument("-o", "--output", help="write output to this path instead of stdout")
    _add_scales(q)
    q.set_defaults(func=cmd_oracle_phi)

    q = orc.add_parser("scc", help="random-graph sweep of the self-consistency identities")
    q.add_argument("--max-vertices", type=int, default=8)
    q.add_argument("--graphs", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output", help="write output to this path instead of stdout")
    q.set_defaults(func=cmd_oracle_scc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphParseError, GraphStructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PlaquetteError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RowSpaceError, NullModeError, RankLimitError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
