"""Command-line front end and benchmark harness.

Subcommands: ``gen`` (write topologies as edge-list files), ``spectral``
(plot-ready spectrum report), ``rho-opt`` (penalty optimization only),
``estimate`` (run a scheme and report performance), ``bench`` (the built-in
topology suite plus user-supplied edge lists, as CSV or JSON).

Exit codes: 0 success, 1 usage/input error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import jsonio
from .estimator import (
    SchemeConfig,
    run_scheme,
    trajectory_sidecar,
    trajectory_to_csv,
)
from .graph import (
    Graph,
    from_edge_list,
    gen_binary_tree_plus,
    gen_circulant,
    gen_complete,
    gen_small_world,
    gen_star,
    graph_digest,
    summarize,
    to_edge_list,
)
from .measurement import gen_truth, measure
from .metrics import perf_report
from .spectral import (
    NumericalError,
    RhoPlan,
    _bounds as _eig_bounds_from,
    centroid,
    rho_star,
    spectrum_f,
    spectrum_normalized_laplacian,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit code 1, not argparse's 2
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one estimation run."""

    graph_source: str
    policy: str = "optimal"
    rho: float | None = None
    rounds: int = 20
    k_neg: int = 2
    seed: int = 1
    noise_amplitude: float = 0.1
    truth_mode: str = "linear"
    truth_step: float = 1.0
    truth_values: tuple[float, ...] | None = None
    out: str | None = None

    def __post_init__(self) -> None:
        if self.policy not in ("fixed", "optimal", "sigma0"):
            raise UsageError(f"unknown policy {self.policy!r}")
        if self.policy == "fixed" and (self.rho is None or self.rho < 0):
            raise UsageError("policy 'fixed' requires --rho >= 0")
        if self.rounds < 0:
            raise UsageError(f"rounds must be nonnegative, got {self.rounds}")
        if self.k_neg < 0:
            raise UsageError(f"kneg must be nonnegative, got {self.k_neg}")
        if self.noise_amplitude < 0:
            raise UsageError(f"noise amplitude must be nonnegative, got {self.noise_amplitude}")


# ---------------------------------------------------------------------------
# Graph sources
# ---------------------------------------------------------------------------

def _int_args(name: str, raw: Sequence[str], count: int) -> list[int]:
    if len(raw) != count:
        raise UsageError(f"{name} takes {count} integer parameter(s), got {list(raw)}")
    try:
        return [int(tok) for tok in raw]
    except ValueError:
        raise UsageError(f"{name}: non-integer parameter in {list(raw)}") from None


def _build_generated(name: str, params: Sequence[str]) -> Graph:
    if name == "complete":
        return gen_complete(*_int_args(name, params, 1))
    if name == "circulant":
        if len(params) != 2:
            raise UsageError("circulant takes <n> <offsets> (offsets comma-separated)")
        (n,) = _int_args(name, params[:1], 1)
        try:
            offsets = tuple(int(tok) for tok in params[1].split(","))
        except ValueError:
            raise UsageError(f"circulant: malformed offsets {params[1]!r}") from None
        return gen_circulant(n, offsets)
    if name == "star":
        return gen_star(*_int_args(name, params, 1))
    if name == "smallworld":
        return gen_small_world(*_int_args(name, params, 2))
    if name == "btree-plus":
        return gen_binary_tree_plus(*_int_args(name, params, 1))
    raise UsageError(f"unknown topology {name!r}")


GENERATOR_NAMES = ("complete", "circulant", "star", "smallworld", "btree-plus")


def resolve_graph(source: str) -> tuple[str, Graph]:
    """Resolve a --graph argument: an edge-list file path, or a generator
    spec like complete:36, circulant:36:1,2, smallworld:9:27, btree-plus:32."""
    parts = source.split(":")
    if parts[0] in GENERATOR_NAMES:
        return source, _build_generated(parts[0], parts[1:])
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(
            f"{source!r} is neither a known generator spec "
            f"({', '.join(GENERATOR_NAMES)}) nor an existing edge-list file"
        )
    return path.stem, from_edge_list(path.read_text())


# ---------------------------------------------------------------------------
# Benchmark rows
# ---------------------------------------------------------------------------

BENCH_COLUMNS = (
    "topology", "regular", "bipartite",
    "dens", "diameter", "d_avg", "d_min", "d_max",
    "lambda_1_nl", "lambda_last_nl", "sigma_nl",
    "rho_lo", "rho_star", "rho_hi",
    "rate_lo", "rate", "rate_hi", "rate_sigma0",
    "r_e_sigma0", "r_e_rho_star", "mse_sigma0", "mse_rho_star",
    "seed", "noise_amplitude", "error",
)

TABLE1_SUITE: tuple[tuple[str, Callable[[], Graph]], ...] = (
    ("K36", lambda: gen_complete(36)),
    ("C36(1,2)", lambda: gen_circulant(36, (1, 2))),
    ("S36", lambda: gen_star(36)),
    ("SW9,27", lambda: gen_small_world(9, 27)),
    ("B+4", lambda: gen_binary_tree_plus(32)),
    ("B+6", lambda: gen_binary_tree_plus(128)),
)


def bench_row(
    label: str,
    g: Graph,
    *,
    seed: int,
    noise_amplitude: float,
    rounds: int,
    k_neg: int,
) -> dict:
    """All Table-style columns for one topology. Failures are recorded in the
    row's ``error`` field instead of aborting the suite."""
    row: dict = {key: None for key in BENCH_COLUMNS}
    row.update(topology=label, seed=seed, noise_amplitude=noise_amplitude, error="")
    try:
        summary = summarize(g)
        row.update(
            regular=summary.regular,
            bipartite=summary.bipartite,
            dens=summary.density,
            diameter=summary.diameter,
            d_avg=summary.d_avg,
            d_min=summary.d_min,
            d_max=summary.d_max,
        )
        nl = spectrum_normalized_laplacian(g)
        plan = rho_star(g)
        row.update(
            lambda_1_nl=nl.values[1],
            lambda_last_nl=nl.values[-1],
            sigma_nl=plan.sigma_L,
            rho_lo=plan.bracket_lo,
            rho_star=plan.rho_star,
            rho_hi=plan.bracket_hi,
            rate_lo=plan.rate_lo,
            rate=plan.rate,
            rate_hi=plan.rate_hi,
            rate_sigma0=plan.rate_sigma0,
        )
        meas = measure(g, gen_truth(g.n), noise_amplitude, seed)
        for tag, rho in (("sigma0", 0.0), ("rho_star", plan.rho_star)):
            traj = run_scheme(g, meas, SchemeConfig(rho=rho, rounds=rounds))
            report = perf_report(g, meas, traj, k_neg)
            r_e = report.r_e
            if tag == "sigma0" and summary.bipartite:
                r_e = None  # plain scheme does not converge on bipartite graphs
            row[f"r_e_{tag}"] = r_e
            row[f"mse_{tag}"] = report.mse
    except Exception as exc:  # per-topology failure must not abort the suite
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _csv_cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if value != 0.0 and abs(value) < 1e-4:
            return f"{value:.4e}"
        return f"{value:.4f}"
    return str(value)


def bench_csv(rows: Sequence[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow(_csv_cell(row[col]) for col in BENCH_COLUMNS)
    return buffer.getvalue()


def bench_json(rows: Sequence[dict]) -> str:
    return jsonio.dumps([{col: row[col] for col in BENCH_COLUMNS} for row in rows], indent=2)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_gen(args: argparse.Namespace) -> int:
    g = _build_generated(args.topology, args.params)
    text = to_edge_list(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _spectral_report(label: str, g: Graph, rho: float | None) -> dict:
    plan = rho_star(g)
    nl = spectrum_normalized_laplacian(g)
    f0 = spectrum_f(g, 0.0)
    used_rho = plan.rho_star if rho is None else rho
    f_rho = spectrum_f(g, used_rho)
    if used_rho > 0:
        # one bound pair per non-unit eigenvalue, from the base spectrum
        # computed once (eig_bounds would redo the eigensolve per index)
        d_min, d_max = min(g.degrees), max(g.degrees)
        bounds = [_eig_bounds_from(lam, used_rho, d_min, d_max) for lam in f0.values[1:]]
        bounds_lower = [b[0] for b in bounds]
        bounds_upper = [b[1] for b in bounds]
    else:
        bounds_lower = bounds_upper = None
    return {
        "graph": {"label": label, "n": g.n, "edge_count": g.edge_count, "digest": graph_digest(g)},
        "normalized_laplacian": list(nl.values),
        "sigma_nl": plan.sigma_L,
        "f0": list(f0.values),
        "sigma_f0": centroid(f0),
        "rho": used_rho,
        "f_rho": list(f_rho.values),
        "sigma_f_rho": centroid(f_rho),
        "bounds_lower": bounds_lower,
        "bounds_upper": bounds_upper,
        "plan": plan.to_dict(),
    }


def _cmd_spectral(args: argparse.Namespace) -> int:
    label, g = resolve_graph(args.graph)
    report = _spectral_report(label, g, args.rho)
    _write_or_print(jsonio.dumps(report, indent=2), args.out)
    return EXIT_OK


def _cmd_rho_opt(args: argparse.Namespace) -> int:
    _, g = resolve_graph(args.graph)
    _write_or_print(rho_star(g).to_json(indent=2), args.out)
    return EXIT_OK


def _parse_truth(raw: str) -> tuple[str, float, tuple[float, ...] | None]:
    if raw == "linear":
        return "linear", 1.0, None
    if raw.startswith("linear:"):
        try:
            return "linear", float(raw.split(":", 1)[1]), None
        except ValueError:
            raise UsageError(f"malformed truth spec {raw!r}") from None
    if raw.startswith("custom:"):
        try:
            values = tuple(float(tok) for tok in raw.split(":", 1)[1].split(","))
        except ValueError:
            raise UsageError(f"malformed truth spec {raw!r}") from None
        return "custom", 1.0, values
    raise UsageError(f"unknown truth spec {raw!r} (use linear, linear:STEP or custom:v0,v1,...)")


def _cmd_estimate(args: argparse.Namespace) -> int:
    mode, step, values = _parse_truth(args.truth)
    config = RunConfig(
        graph_source=args.graph,
        policy=args.policy,
        rho=args.rho,
        rounds=args.rounds,
        k_neg=args.kneg,
        seed=args.seed,
        noise_amplitude=args.noise,
        truth_mode=mode,
        truth_step=step,
        truth_values=values,
        out=args.out,
    )
    label, g = resolve_graph(config.graph_source)
    plan: RhoPlan | None = None
    if config.policy == "optimal":
        plan = rho_star(g)
        rho = plan.rho_star
    elif config.policy == "sigma0":
        rho = 0.0
    else:
        rho = float(config.rho)  # validated by RunConfig
    truth = gen_truth(g.n, mode=config.truth_mode, step=config.truth_step, values=config.truth_values)
    meas = measure(g, truth, config.noise_amplitude, config.seed)
    traj = run_scheme(g, meas, SchemeConfig(rho=rho, rounds=config.rounds))
    report = perf_report(g, meas, traj, config.k_neg)
    payload = {
        "graph": {"label": label, "n": g.n, "digest": graph_digest(g)},
        "policy": config.policy,
        "rho": rho,
        "plan": plan.to_dict() if plan is not None else None,
        "seed": config.seed,
        "noise_amplitude": config.noise_amplitude,
        "report": report.to_dict(),
    }
    if config.out:
        base = config.out
        Path(base + ".csv").write_text(trajectory_to_csv(traj))
        Path(base + ".meta.json").write_text(
            jsonio.dumps(trajectory_sidecar(traj, g, meas), indent=2)
        )
        Path(base + ".report.json").write_text(jsonio.dumps(payload, indent=2))
        mse_txt = jsonio.format_float(report.mse)
        sys.stdout.write(f"{label}: rho={rho:.6g} mse={mse_txt} -> {base}.csv\n")
    else:
        sys.stdout.write(jsonio.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    rows = []
    if args.suite == "table1":
        for label, build in TABLE1_SUITE:
            rows.append(
                bench_row(
                    label, build(),
                    seed=args.seed, noise_amplitude=args.noise,
                    rounds=args.rounds, k_neg=args.kneg,
                )
            )
    for extra in args.graphs:
        label, g = resolve_graph(extra)
        rows.append(
            bench_row(
                label, g,
                seed=args.seed, noise_amplitude=args.noise,
                rounds=args.rounds, k_neg=args.kneg,
            )
        )
    text = bench_csv(rows) if args.format == "csv" else bench_json(rows)
    _write_or_print(text, args.out)
    return EXIT_OK


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relstate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a topology as an edge-list file")
    p_gen.add_argument("topology", help="complete | circulant | star | smallworld | btree-plus")
    p_gen.add_argument("params", nargs="*", help="generator parameters")
    p_gen.add_argument("-o", "--out", help="output file (default: stdout)")
    p_gen.set_defaults(func=_cmd_gen)

    def add_graph(p: argparse.ArgumentParser) -> None:
        p.add_argument("-g", "--graph", required=True,
                       help="edge-list file or generator spec (e.g. complete:36, circulant:36:1,2)")

    p_spec = sub.add_parser("spectral", help="spectrum report for one graph")
    add_graph(p_spec)
    p_spec.add_argument("--rho", type=float, default=None,
                        help="penalty for the reported spectrum (default: optimized)")
    p_spec.add_argument("-o", "--out", help="output JSON file (default: stdout)")
    p_spec.set_defaults(func=_cmd_spectral)

    p_rho = sub.add_parser("rho-opt", help="penalty optimization report only")
    add_graph(p_rho)
    p_rho.add_argument("-o", "--out", help="output JSON file (default: stdout)")
    p_rho.set_defaults(func=_cmd_rho_opt)

    p_est = sub.add_parser("estimate", help="run one estimation scheme")
    add_graph(p_est)
    p_est.add_argument("--policy", choices=("fixed", "optimal", "sigma0"), default="optimal")
    p_est.add_argument("--rho", type=float, default=None, help="penalty (policy 'fixed')")
    p_est.add_argument("--rounds", type=int, default=20)
    p_est.add_argument("--kneg", type=int, default=2)
    p_est.add_argument("--seed", type=int, default=1)
    p_est.add_argument("--noise", type=float, default=0.1)
    p_est.add_argument("--truth", default="linear", help="linear, linear:STEP or custom:v0,v1,...")
    p_est.add_argument("-o", "--out", help="output base path (writes .csv/.meta.json/.report.json)")
    p_est.set_defaults(func=_cmd_estimate)

    p_bench = sub.add_parser("bench", help="benchmark a topology suite")
    p_bench.add_argument("graphs", nargs="*", help="extra edge-list files to append to the suite")
    p_bench.add_argument("--suite", choices=("table1", "none"), default="table1")
    p_bench.add_argument("--rounds", type=int, default=20)
    p_bench.add_argument("--kneg", type=int, default=2)
    p_bench.add_argument("--seed", type=int, default=1)
    p_bench.add_argument("--noise", type=float, default=0.1)
    p_bench.add_argument("--format", choices=("csv", "json"), default="csv")
    p_bench.add_argument("-o", "--out", help="output file (default: stdout)")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
