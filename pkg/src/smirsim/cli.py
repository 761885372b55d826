"""Command-line front end.

Subcommands: ``meanfield`` (ODE runs, sweeps, homophily grids), ``pipeline``
(misinformation spread -> population sampling -> contact network -> epidemic),
``sweep`` (pipeline over a list of phi / k-bar / sample values),
``gen-scenario`` (synthesize scenario files), and ``inspect`` (artifact
stats).

Conventions: all data goes to files under --out (default from $SMIRSIM_OUT,
else ./smirsim-out); standard output carries only the summary table; progress
goes to standard error. Every run writes a manifest.json with the resolved
parameters, input hashes, and seed; re-running with the same parameters
reproduces every CSV and binary artifact byte for byte. Exit codes: 0 on
success, 2 for argument/input errors, 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, abm, contactnet, infonet, meanfield, scenario, svgplot
from .errors import InputError, NumericError

# Seed-derivation stream ids for pipeline stages (scenario generation itself
# uses streams 0-2 of the same master seed).
_STREAM_SAMPLE = 10
_STREAM_NET = 11
_STREAM_ABM = 12
_STREAM_NET_REP = 1000  # + repetition, when --regen-network
_STREAM_ABM_REP = 2000


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get("SMIRSIM_OUT") or "smirsim-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, subcommand: str, params: dict, inputs: list, seed, started: float, outputs: list) -> None:
    manifest = {
        "engine_version": __version__,
        "subcommand": subcommand,
        "parameters": params,
        "input_hashes": {str(p): _sha256(p) for p in inputs},
        "master_seed": seed,
        "duration_seconds": round(time.monotonic() - started, 3),
        "outputs": sorted(str(o) for o in outputs),
    }
    with open(out / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _parse_range(spec: str, flag: str) -> tuple[str, list[float]]:
    """Parse NAME=START:STOP[:STEP] into (name, inclusive values)."""
    try:
        name, _, rng = spec.partition("=")
        parts = rng.split(":")
        if len(parts) == 2:
            start, stop = float(parts[0]), float(parts[1])
            step = (stop - start) / 12 if stop > start else 1.0
        elif len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
        else:
            raise ValueError("expected START:STOP[:STEP]")
    except ValueError as e:
        raise InputError(f"bad {flag} spec {spec!r}: {e}") from e
    name = name.strip().replace("-", "_")
    if name == "lam":
        name = "lambda"
    if step <= 0 or stop < start:
        raise InputError(f"bad {flag} range in {spec!r}")
    count = int(round((stop - start) / step)) + 1
    values = [round(start + i * step, 12) for i in range(count)]
    if values and values[-1] > stop + 1e-9:
        values.pop()
    return name, values


def write_trajectory_csv(traj: meanfield.Trajectory, path) -> None:
    """Per-day compartment fractions: day, S_O, I_O, R_O, S_M, I_M, R_M."""
    with open(path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["day", "S_O", "I_O", "R_O", "S_M", "I_M", "R_M"])
        for d in range(traj.horizon + 1):
            out.writerow([d] + [repr(float(v)) for v in traj.states[d]])


_SUMMARY_FIELDS = (
    "peak_day",
    "peak_infected",
    "total_infected",
    "peak_day_ordinary",
    "peak_infected_ordinary",
    "total_infected_ordinary",
    "peak_day_misinformed",
    "peak_infected_misinformed",
    "total_infected_misinformed",
)


def _write_summary_csv(rows: list[tuple[str, float, meanfield.TrajectorySummary]], path) -> None:
    with open(path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["param", "value"] + list(_SUMMARY_FIELDS))
        for name, value, s in rows:
            out.writerow(
                [name, repr(float(value))]
                + [repr(float(getattr(s, fld))) for fld in _SUMMARY_FIELDS]
            )


def _print_summary_table(rows: list[tuple[str, float, meanfield.TrajectorySummary]]) -> None:
    print(f"{'param':<10}{'value':>10}{'peak_day':>10}{'peak_inf':>12}{'total_inf':>12}")
    for name, value, s in rows:
        print(
            f"{name:<10}{value:>10.4g}{s.peak_day:>10d}"
            f"{s.peak_infected:>12.6f}{s.total_infected:>12.6f}"
        )


def cmd_meanfield(args) -> int:
    out = _out_dir(args)
    started = time.monotonic()
    params = meanfield.MeanFieldParams(
        beta_o=args.beta_o,
        gamma=args.gamma,
        lam=args.lam,
        mu=args.mu,
        alpha=args.alpha,
        epsilon=args.epsilon,
    )
    outputs = []
    if args.grid and not args.sweep:
        raise InputError("--grid requires --sweep (the inner axis)")
    if args.grid:
        sweep_name, sweep_values = _parse_range(args.sweep, "--sweep")
        grid_name, grid_values = _parse_range(args.grid, "--grid")
        if {sweep_name, grid_name} != {"alpha", "beta_o"}:
            raise InputError("grid mode sweeps alpha against beta-o")
        alphas = sweep_values if sweep_name == "alpha" else grid_values
        beta_os = grid_values if sweep_name == "alpha" else sweep_values
        _progress(f"integrating {len(alphas) * len(beta_os)} grid cells")
        grid = meanfield.sweep_grid(
            params, alphas, beta_os, horizon=args.horizon, dt=args.dt, method=args.method
        )
        grid_path = out / "grid.csv"
        with open(grid_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["beta_o", "alpha", "ordinary", "misinformed", "overall"])
            for i, b in enumerate(grid.beta_os):
                for j, a in enumerate(grid.alphas):
                    w.writerow(
                        [repr(float(b)), repr(float(a))]
                        + [
                            repr(float(m[i, j]))
                            for m in (grid.ordinary, grid.misinformed, grid.overall)
                        ]
                    )
        argmax_path = out / "grid_argmax.csv"
        with open(argmax_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["beta_o", "argmax_alpha", "max_overall"])
            for i, b in enumerate(grid.beta_os):
                w.writerow(
                    [
                        repr(float(b)),
                        repr(float(grid.argmax_alpha[i])),
                        repr(float(grid.overall[i].max())),
                    ]
                )
        outputs += [grid_path, argmax_path]
        if args.svg:
            for name, matrix in (
                ("ordinary", grid.ordinary),
                ("misinformed", grid.misinformed),
                ("overall", grid.overall),
            ):
                p = out / f"grid_{name}.svg"
                marks = (
                    [(a, b) for a, b in zip(grid.argmax_alpha, grid.beta_os)]
                    if name == "overall"
                    else []
                )
                svgplot.heatmap(
                    matrix.tolist(),
                    x_ticks=list(grid.alphas),
                    y_ticks=list(grid.beta_os),
                    path=p,
                    title=f"Total infected ({name})",
                    xlabel="alpha",
                    ylabel="beta_o",
                    marks=marks,
                )
                outputs.append(p)
        print(f"grid: {len(grid.beta_os)} x {len(grid.alphas)} cells -> {grid_path}")
    elif args.sweep:
        name, values = _parse_range(args.sweep, "--sweep")
        _progress(f"sweeping {name} over {len(values)} values")
        rows = meanfield.sweep(
            params, name, values, horizon=args.horizon, dt=args.dt, method=args.method
        )
        traj_dir = out / "trajectories"
        traj_dir.mkdir(exist_ok=True)
        series = []
        for v, _ in rows:
            p = meanfield.apply_param(params, name, v)
            traj = meanfield.integrate(p, args.horizon, args.dt, args.method)
            tp = traj_dir / f"traj_{name}_{v:g}.csv"
            write_trajectory_csv(traj, tp)
            outputs.append(tp)
            series.append((f"{name}={v:g}", list(traj.days), list(traj.infected)))
        summary_path = out / "sweep_summary.csv"
        table = [(name, v, s) for v, s in rows]
        _write_summary_csv(table, summary_path)
        outputs.append(summary_path)
        if args.svg:
            p = out / "sweep_infected.svg"
            svgplot.line_chart(
                series, p, title="Infected fraction per day", xlabel="day", ylabel="I",
            )
            outputs.append(p)
        _print_summary_table(table)
    else:
        traj = meanfield.integrate(params, args.horizon, args.dt, args.method)
        tp = out / "trajectory.csv"
        write_trajectory_csv(traj, tp)
        outputs.append(tp)
        if args.svg:
            p = out / "trajectory.svg"
            days = list(traj.days)
            svgplot.line_chart(
                [
                    ("S_O", days, list(traj.states[:, meanfield.S_O])),
                    ("I_O", days, list(traj.states[:, meanfield.I_O])),
                    ("R_O", days, list(traj.states[:, meanfield.R_O])),
                    ("S_M", days, list(traj.states[:, meanfield.S_M])),
                    ("I_M", days, list(traj.states[:, meanfield.I_M])),
                    ("R_M", days, list(traj.states[:, meanfield.R_M])),
                ],
                p,
                title="Compartment fractions",
                xlabel="day",
                ylabel="fraction",
            )
            outputs.append(p)
        _print_summary_table([("-", 0.0, meanfield.summarize(traj))])
    _write_manifest(
        out,
        "meanfield",
        {
            "beta_o": args.beta_o, "gamma": args.gamma, "lambda": args.lam,
            "mu": args.mu, "alpha": args.alpha, "epsilon": args.epsilon,
            "horizon": args.horizon, "dt": args.dt, "method": args.method,
            "sweep": args.sweep, "grid": args.grid,
        },
        [],
        None,
        started,
        outputs,
    )
    return 0


class _Stage:
    """Annotates errors with the pipeline stage that raised them."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        _progress(f"stage {self.name}")
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None:
            return False
        if isinstance(exc, NumericError):
            raise NumericError(f"stage {self.name}: {exc}") from exc
        if isinstance(exc, (InputError, OSError)):
            raise InputError(f"stage {self.name}: {exc}") from exc
        return False


def _load_pipeline_scenario(args, out: Path, outputs: list, inputs: list):
    """Returns (scenario, infonet); synthetic mode also persists the inputs."""
    if not args.synthetic and not args.scenario_dir:
        raise InputError("choose a scenario source: --synthetic or --scenario-dir")
    if args.scenario_dir:
        d = Path(args.scenario_dir)
        with _Stage("load_scenario"):
            sc = scenario.load_scenario(d / "counties.csv", d / "mobility.csv")
            net = infonet.load_infonet(d / "infonet_nodes.csv", d / "infonet_edges.csv")
        inputs += [
            d / "counties.csv", d / "mobility.csv",
            d / "infonet_nodes.csv", d / "infonet_edges.csv",
        ]
        return sc, net
    with _Stage("generate_scenario"):
        cfg = (
            scenario.parse_scenario_config(args.scenario_config)
            if args.scenario_config
            else scenario.ScenarioConfig()
        )
        cfg = replace(cfg, seed=args.seed)
        if args.counties:
            cfg = replace(cfg, county_count=args.counties)
        sc, net = scenario.generate_scenario(cfg)
        scenario.save_scenario(sc, out / "counties.csv", out / "mobility.csv")
        infonet.save_infonet(net, out / "infonet_nodes.csv", out / "infonet_edges.csv")
        outputs += [
            out / "counties.csv", out / "mobility.csv",
            out / "infonet_nodes.csv", out / "infonet_edges.csv",
        ]
        if args.scenario_config:
            inputs.append(args.scenario_config)
    return sc, net


def _run_pipeline_core(sc, net, args):
    """Spread -> sample -> build -> simulate. Returns (contact_net, result)."""
    with _Stage("spread_misinformation"):
        labeling = infonet.spread_misinformation(net, args.phi, args.mode)
    with _Stage("sample_population"):
        nodes = contactnet.sample_population(
            sc, net, labeling, args.sample, scenario.derive_seed(args.seed, _STREAM_SAMPLE)
        )
    with _Stage("expected_edges"):
        e_matrix = contactnet.expected_edges(sc.mobility, args.k_bar, nodes.n)
    cfg = abm.AbmConfig(
        p_o=args.p_o,
        p_m=args.p_m,
        gamma=args.gamma,
        initial_infected=args.initial_infected,
        steps=args.steps,
        repetitions=args.reps,
    )
    if args.regen_network:
        cnet = None
        parts = []
        for rep in range(args.reps):
            with _Stage(f"build_contact_network[rep={rep}]"):
                cnet = contactnet.build_contact_network(
                    nodes, e_matrix, args.k_bar,
                    scenario.derive_seed(args.seed, _STREAM_NET_REP + rep),
                )
            with _Stage(f"abm[rep={rep}]"):
                parts.append(
                    abm.run(
                        cnet,
                        replace(cfg, repetitions=1),
                        scenario.derive_seed(args.seed, _STREAM_ABM_REP + rep),
                    )
                )
        result = abm.merge_results(parts)
    else:
        with _Stage("build_contact_network"):
            cnet = contactnet.build_contact_network(
                nodes, e_matrix, args.k_bar, scenario.derive_seed(args.seed, _STREAM_NET)
            )
        with _Stage("abm"):
            result = abm.run(cnet, cfg, scenario.derive_seed(args.seed, _STREAM_ABM))
    return cnet, result


def _result_summary(cnet, result) -> dict:
    return {
        "n_nodes": cnet.n_nodes,
        "n_edges": cnet.n_edges,
        "mean_degree": round(cnet.mean_degree, 6),
        "misinformed_nodes": cnet.misinformed_count,
        "misinformed_fraction": round(cnet.misinformed_count / cnet.n_nodes, 9),
        "peak_day_mean": result.peak_day_mean,
        "peak_height_mean": result.peak_height_mean,
        "cumulative_final_mean": result.cumulative_final_mean,
        "cumulative_final_std": result.cumulative_final_std,
    }


def _apply_manifest(args) -> None:
    """Overwrite pipeline flags with the parameters a manifest recorded."""
    with open(args.from_manifest) as f:
        recorded = json.load(f)
    if recorded.get("subcommand") not in ("pipeline", "sweep"):
        raise InputError(f"{args.from_manifest} is not a pipeline manifest")
    synthetic = recorded["parameters"].get("scenario_dir") is None
    for key, value in recorded["parameters"].items():
        if key in ("vary", "values", "jobs"):
            continue
        setattr(args, key, value)
    args.synthetic = synthetic
    if recorded.get("master_seed") is not None:
        args.seed = recorded["master_seed"]


def cmd_pipeline(args) -> int:
    out = _out_dir(args)
    started = time.monotonic()
    if args.from_manifest:
        _apply_manifest(args)
    outputs: list = []
    inputs: list = []
    sc, net = _load_pipeline_scenario(args, out, outputs, inputs)
    cnet, result = _run_pipeline_core(sc, net, args)

    net_path = out / "contactnet.bin"
    contactnet.save_contact_network(cnet, net_path)
    result_path = out / "result.csv"
    abm.write_result_csv(result, result_path)
    summary = _result_summary(cnet, result)
    summary_path = out / "summary.json"
    with open(summary_path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    outputs += [net_path, result_path, summary_path]
    if args.svg:
        p = out / "epidemic.svg"
        days = list(result.days)
        svgplot.line_chart(
            [
                ("mean prevalent I", days, list(result.mean("prev_I"))),
                ("mean cumulative", days, list(result.mean("cum"))),
            ],
            p,
            title="Epidemic course",
            xlabel="day",
            ylabel="individuals",
        )
        outputs.append(p)
    _write_manifest(out, "pipeline", _pipeline_params(args), inputs, args.seed, started, outputs)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _pipeline_params(args) -> dict:
    return {
        "scenario_dir": args.scenario_dir,
        "scenario_config": args.scenario_config,
        "counties": args.counties,
        "phi": args.phi,
        "mode": args.mode,
        "sample": args.sample,
        "k_bar": args.k_bar,
        "p_o": args.p_o,
        "p_m": args.p_m,
        "gamma": args.gamma,
        "initial_infected": args.initial_infected,
        "steps": args.steps,
        "reps": args.reps,
        "regen_network": args.regen_network,
        "seed": args.seed,
    }


_SWEEP_FLAGS = {"phi": "phi", "k-bar": "k_bar", "sample": "sample"}


def _sweep_row(args, value):
    """One pipeline run with the varying flag replaced; used by --jobs workers."""
    row_args = argparse.Namespace(**vars(args))
    setattr(row_args, _SWEEP_FLAGS[args.vary], value)
    out = Path(args.out) / "rows" / f"{args.vary.replace('-', '_')}_{value:g}"
    out.mkdir(parents=True, exist_ok=True)
    row_args.out = str(out)
    outputs: list = []
    inputs: list = []
    sc, net = _load_pipeline_scenario(row_args, out, outputs, inputs)
    cnet, result = _run_pipeline_core(sc, net, row_args)
    contactnet.save_contact_network(cnet, out / "contactnet.bin")
    abm.write_result_csv(result, out / "result.csv")
    return _result_summary(cnet, result)


def cmd_sweep(args) -> int:
    out = _out_dir(args)
    started = time.monotonic()
    if args.vary == "phi":
        values = [int(v) for v in args.values.split(",")]
    else:
        values = [float(v) for v in args.values.split(",")]
    args.out = str(out)

    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            summaries = list(pool.map(_sweep_row, [args] * len(values), values))
    else:
        summaries = [_sweep_row(args, v) for v in values]

    # Largest phi (the most-resilient scenario) anchors relative increases;
    # for other axes the last value is the baseline.
    base_idx = int(np.argmax(values)) if args.vary == "phi" else len(values) - 1
    base = summaries[base_idx]["cumulative_final_mean"]

    summary_path = out / "sweep_summary.csv"
    with open(summary_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(
            [
                "vary", "value", "n_nodes", "misinformed_nodes", "misinformed_fraction",
                "peak_day_mean", "peak_height_mean", "cumulative_final_mean",
                "cumulative_final_std", "relative_increase_vs_baseline",
            ]
        )
        for v, s in zip(values, summaries):
            rel = (s["cumulative_final_mean"] - base) / base if base > 0 else 0.0
            w.writerow(
                [
                    args.vary, repr(float(v)), s["n_nodes"], s["misinformed_nodes"],
                    repr(s["misinformed_fraction"]), repr(s["peak_day_mean"]),
                    repr(s["peak_height_mean"]), repr(s["cumulative_final_mean"]),
                    repr(s["cumulative_final_std"]), repr(rel),
                ]
            )
    outputs = [summary_path]
    if args.svg:
        p = out / "sweep_cumulative.svg"
        svgplot.line_chart(
            [("mean cumulative infections", [float(v) for v in values],
              [s["cumulative_final_mean"] for s in summaries])],
            p,
            title=f"Cumulative infections vs {args.vary}",
            xlabel=args.vary,
            ylabel="individuals",
        )
        outputs.append(p)
    _write_manifest(out, "sweep", {**_pipeline_params(args), "vary": args.vary, "values": values, "jobs": args.jobs}, [], args.seed, started, outputs)
    print(f"{'value':>10}{'misinformed':>14}{'peak_day':>10}{'cum_mean':>14}")
    for v, s in zip(values, summaries):
        print(
            f"{v:>10g}{s['misinformed_nodes']:>14d}"
            f"{s['peak_day_mean']:>10.1f}{s['cumulative_final_mean']:>14.1f}"
        )
    return 0


def cmd_gen_scenario(args) -> int:
    out = _out_dir(args)
    started = time.monotonic()
    cfg = (
        scenario.parse_scenario_config(args.scenario_config)
        if args.scenario_config
        else scenario.ScenarioConfig()
    )
    cfg = replace(cfg, seed=args.seed)
    if args.counties:
        cfg = replace(cfg, county_count=args.counties)
    sc, net = scenario.generate_scenario(cfg)
    scenario.save_scenario(sc, out / "counties.csv", out / "mobility.csv")
    infonet.save_infonet(net, out / "infonet_nodes.csv", out / "infonet_edges.csv")
    outputs = [
        out / "counties.csv", out / "mobility.csv",
        out / "infonet_nodes.csv", out / "infonet_edges.csv",
    ]
    _write_manifest(
        out, "gen-scenario",
        {"counties": cfg.county_count, "seed": args.seed,
         "scenario_config": args.scenario_config},
        [args.scenario_config] if args.scenario_config else [],
        args.seed, started, outputs,
    )
    print(
        f"scenario: {sc.n_counties} counties, {int(sc.voters.sum())} voters, "
        f"{net.n_nodes} accounts, {net.n_edges} retweet edges -> {out}"
    )
    return 0


def cmd_inspect(args) -> int:
    path = Path(args.path)
    if not path.exists():
        raise InputError(f"no such artifact: {path}")
    with open(path, "rb") as f:
        head = f.read(10)
    if head == b"SMIRCNET1\n":
        net = contactnet.load_contact_network(path)
        by_county = np.bincount(net.county_index, minlength=len(net.county_ids))
        print(f"contact network: {net.n_nodes} nodes, {net.n_edges} edges")
        print(f"mean degree: {net.mean_degree:.3f} (target {net.k_bar})")
        print(
            f"misinformed: {net.misinformed_count} "
            f"({net.misinformed_count / net.n_nodes:.2%})"
        )
        print(f"counties: {len(net.county_ids)} (largest block {int(by_county.max())})")
        print(f"build seed: {net.seed}")
        return 0
    text = path.read_text()
    first = text.splitlines()[0] if text else ""
    if first.startswith("fips,"):
        sc = scenario.load_scenario(path, path.parent / "mobility.csv")
        print(
            f"scenario: {sc.n_counties} counties, {int(sc.voters.sum())} voters, "
            f"{int(sc.twitter_users.sum())} twitter users"
        )
        return 0
    if first.startswith("day,"):
        rows = text.count("\n") - 1
        print(f"epidemic result: {rows} days\n{first}")
        return 0
    if path.suffix == ".json":
        print(text.rstrip())
        return 0
    raise InputError(f"unrecognized artifact format: {path}")


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--synthetic", action="store_true", help="generate a synthetic scenario")
    src.add_argument("--scenario-dir", help="directory with counties/mobility/infonet CSVs")
    p.add_argument("--scenario-config", help="key=value scenario config file (synthetic mode)")
    p.add_argument("--counties", type=int, default=None, help="override synthetic county count")
    p.add_argument("--phi", type=int, default=1, help="linear threshold (misinformed friends)")
    p.add_argument(
        "--mode",
        choices=[infonet.DISTINCT_FRIENDS, infonet.RETWEET_WEIGHTED],
        default=infonet.DISTINCT_FRIENDS,
        help="exposure counting mode",
    )
    p.add_argument("--sample", type=float, default=0.01, help="per-county sampling fraction")
    p.add_argument("--k-bar", dest="k_bar", type=float, default=25.0, help="target mean degree")
    p.add_argument("--p-o", dest="p_o", type=float, default=0.01)
    p.add_argument("--p-m", dest="p_m", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.2, help="daily recovery probability")
    p.add_argument("--initial-infected", type=int, default=100)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument(
        "--regen-network",
        action="store_true",
        help="rebuild the contact network for every repetition",
    )
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--svg", action="store_true", help="emit SVG plots")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument(
        "--from-manifest",
        dest="from_manifest",
        default=None,
        help="rerun with the parameters recorded in a manifest.json",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smirsim",
        description="SMIR epidemic simulator: mean-field dynamics and "
        "agent-based runs on misinformation-seeded contact networks",
    )
    parser.add_argument("--version", action="version", version=f"smirsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("meanfield", help="integrate the mean-field system")
    p.add_argument("--beta-o", dest="beta_o", type=float, default=0.3)
    p.add_argument("--gamma", type=float, default=0.2)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--epsilon", type=float, default=0.001)
    p.add_argument("--horizon", type=int, default=meanfield.DEFAULT_HORIZON)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--method", choices=["euler", "rk4"], default=meanfield.DEFAULT_METHOD)
    p.add_argument("--sweep", help="NAME=START:STOP[:STEP] over lambda/alpha/beta-o/tau")
    p.add_argument("--grid", help="outer axis for the alpha x beta-o grid")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_meanfield)

    p = sub.add_parser("pipeline", help="full misinformation -> epidemic pipeline")
    _add_pipeline_args(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("sweep", help="pipeline over a list of values")
    _add_pipeline_args(p)
    p.add_argument("--vary", choices=list(_SWEEP_FLAGS), required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--jobs", type=int, default=1, help="parallel rows")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen-scenario", help="write synthetic scenario files")
    p.add_argument("--scenario-config", help="key=value config file")
    p.add_argument("--counties", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen_scenario)

    p = sub.add_parser("inspect", help="print artifact statistics")
    p.add_argument("path")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
