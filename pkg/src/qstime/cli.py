"""Command-line interface.

Subcommands:
  analyze     one (graph, target) instance -> report.json, table, tail figure
  verify      run the verdict battery over an instance list -> margins CSV
  sweep-torus scaling sweep across torus side lengths -> CSV + slope fits
  simulate    Monte Carlo tails against the exact law -> CSV + figure

Every run writes a manifest.json recording the command, inputs, seed, and
artifact paths.  Exit codes: 0 all verdicts pass, 1 verdict failure,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .bounds import (
    BoundReport,
    Verdict,
    beta_gamma,
    build_report,
    default_t_grid,
    killing_integrals,
    refined_error,
)
from .chain import eigentime_mean_hit, srw_chain
from .graphs import metric_profile, parse_graph_spec
from .killed import parse_set_spec, target_set
from .laws import hitting_law, tail_from_pi, tail_from_vertex
from .montecarlo import SimConfig, empirical_tail, sample_hitting
from .suite import default_instances

DEFAULT_SEED = 1729
MC_BAND_Z = 3.0


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QSTIME_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"QSTIME_SEED={env!r} is not an integer") from exc
    return DEFAULT_SEED


def _atomic_write(path: str, text: str) -> str:
    """Write via a temp file and rename, so partial outputs never appear."""
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qstime-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return os.path.abspath(path)


def _write_manifest(out_dir: str, command: str, args_dict: dict, artifacts: list[str]) -> str:
    manifest = {
        "tool": "qstime",
        "version": __version__,
        "command": command,
        "arguments": args_dict,
        "artifacts": [os.path.basename(a) for a in artifacts],
    }
    return _atomic_write(os.path.join(out_dir, "manifest.json"), json.dumps(manifest, indent=2) + "\n")


def _parse_t_grid(flag: str | None):
    if flag is None:
        return None
    parts = flag.split(",")
    if len(parts) != 3:
        raise ValueError(f"--t-grid expects min,max,count, got {flag!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 <= lo < hi) or count < 2:
        raise ValueError(f"--t-grid values out of order: {flag!r}")
    grid = np.geomspace(max(lo, 1e-12), hi, count) if lo > 0 else np.concatenate(
        [[0.0], np.geomspace(hi * 1e-6, hi, count - 1)]
    )
    return grid


def _apply_tol(report: BoundReport, tol: float | None) -> list[Verdict]:
    """Re-score inequality verdicts against a user-supplied slack."""
    if tol is None:
        return report.verdicts
    return [
        Verdict(v.name, bool(v.margin >= -tol), v.margin, tol, v.note)
        for v in report.verdicts
    ]


class InstanceRunner:
    """Builds reports while caching per-graph chains and integrals."""

    def __init__(self, t_grid=None):
        self.t_grid = t_grid
        self._cache: dict[str, tuple] = {}

    def graph_data(self, graph_spec: str):
        if graph_spec not in self._cache:
            g = parse_graph_spec(graph_spec)
            chain = srw_chain(g)
            profile = metric_profile(g)
            law_origin = hitting_law(chain, target_set(chain, [0]))
            integrals = (killing_integrals(chain, 0), killing_integrals(chain, 1))
            self._cache[graph_spec] = (g, chain, profile, law_origin, integrals)
        return self._cache[graph_spec]

    def run(self, graph_spec: str, set_spec: str) -> tuple[BoundReport, object]:
        g, chain, profile, law_origin, integrals = self.graph_data(graph_spec)
        targets = parse_set_spec(set_spec, g)
        ts = target_set(chain, targets)
        law = law_origin if targets == [0] else hitting_law(chain, ts)
        report = build_report(
            chain, profile, law, law_origin=law_origin, t_grid=self.t_grid,
            integrals=integrals,
        )
        return report, law


def _report_table(report: BoundReport) -> str:
    lines = [
        f"graph           {report.graph}",
        f"target A        {report.target}",
        f"pi(A)           {report.pi_a:.12g}",
        f"R_M             {report.r_m:.12g}",
        f"t_rel           {report.t_rel:.12g}",
        f"E_alpha[T_A]    {report.e_alpha_ta:.12g}",
        f"E_pi[T_A]       {report.e_pi_ta:.12g}",
        f"t_med           {report.t_med:.12g}",
        f"ab_error        {report.ab_error:.12g}",
        f"refined_error   {report.refined_err:.12g}",
        f"tmed_error      {report.tmed_err:.12g}",
        f"prop43_residual {report.prop43_residual:.3e}",
        f"beta_gamma      {report.beta if report.beta is not None else 'n/a'}",
        f"err_no_c0       {report.err_no_c0 if report.err_no_c0 is not None else 'n/a'}",
        f"err_c0_2304     {report.err_c0_2304 if report.err_c0_2304 is not None else 'n/a'}",
        "",
        f"{'verdict':28s} {'pass':5s} {'margin':>13s}",
    ]
    for v in report.verdicts:
        lines.append(f"{v.name:28s} {'ok' if v.passed else 'FAIL':5s} {v.margin:13.3e}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    t_grid = _parse_t_grid(args.t_grid)
    runner = InstanceRunner(t_grid=t_grid)
    report, law = runner.run(args.graph, args.set)
    verdicts = _apply_tol(report, args.tol)
    artifacts = []

    payload = report.to_dict()
    payload["killed_spectrum"] = {
        "lambdas": law.killed.lambdas.tolist(),
        "coeff_sq": (law.killed.coeffs**2).tolist(),
    }
    payload["chain_betas"] = law.chain.betas.tolist()
    artifacts.append(
        _atomic_write(os.path.join(args.out, "report.json"), json.dumps(payload, indent=2) + "\n")
    )
    table = _report_table(report)
    artifacts.append(_atomic_write(os.path.join(args.out, "report.txt"), table))
    sys.stdout.write(table)

    if args.figures:
        from .figures import render_tail_figure

        grid = t_grid if t_grid is not None else default_t_grid(law)
        artifacts.append(
            render_tail_figure(law, report, grid, os.path.join(args.out, "tails.png"))
        )
    _write_manifest(args.out, "analyze", {
        "graph": args.graph, "set": args.set, "seed": _seed_from(args),
        "t_grid": args.t_grid, "tol": args.tol,
    }, artifacts)
    return 0 if all(v.passed for v in verdicts) else 1


def cmd_verify(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    if args.instances is not None:
        try:
            instances = _read_instance_file(args.instances)
        except (OSError, ValueError) as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
    else:
        instances = default_instances()
    if not instances:
        sys.stderr.write("warning: empty instance list, nothing to verify\n")
        _write_manifest(args.out, "verify", {"instances": args.instances}, [])
        return 0

    runner = InstanceRunner(t_grid=_parse_t_grid(args.t_grid))

    def one(pair):
        graph_spec, set_spec = pair
        report, _ = runner.run(graph_spec, set_spec)
        return graph_spec, set_spec, _apply_tol(report, args.tol)

    if args.jobs > 1:
        # graph cache is shared; prebuild sequentially so threads only read it
        for spec in dict.fromkeys(spec for spec, _ in instances):
            runner.graph_data(spec)
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(one, instances))
    else:
        results = [one(pair) for pair in instances]

    rows = []
    all_pass = True
    for graph_spec, set_spec, verdicts in results:
        for v in verdicts:
            rows.append({
                "graph": graph_spec, "set": set_spec, "verdict": v.name,
                "passed": int(v.passed), "margin": f"{v.margin:.6e}",
                "tolerance": f"{v.tolerance:.1e}",
            })
            all_pass &= v.passed
    csv_path = os.path.join(args.out, "margins.csv")
    _write_csv(csv_path, ["graph", "set", "verdict", "passed", "margin", "tolerance"], rows)
    artifacts = [csv_path]
    if args.figures:
        from .figures import render_margins_figure

        artifacts.append(render_margins_figure(rows, os.path.join(args.out, "margins.png")))
    _write_manifest(args.out, "verify", {
        "instances": args.instances, "count": len(instances), "tol": args.tol,
    }, artifacts)
    status = "all verdicts pass" if all_pass else "VERDICT FAILURES"
    sys.stdout.write(f"{len(instances)} instances, {len(rows)} verdicts: {status}\n")
    sys.stdout.write(f"margins written to {csv_path}\n")
    return 0 if all_pass else 1


def _read_instance_file(path: str) -> list[tuple[str, str]]:
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(
                    f"{path}:{lineno}: expected '<graph-spec> <set-spec>', got {line!r}"
                )
            # fail fast on unparseable graph specs with a line diagnostic
            try:
                parse_graph_spec(parts[0])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            instances.append((parts[0], parts[1]))
    return instances


def _write_csv(path: str, fieldnames: list[str], rows: list[dict]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return _atomic_write(path, buf.getvalue())


def _loglog_slope(ms, values) -> float | None:
    vals = np.asarray(values, dtype=float)
    if np.any(vals <= 0):
        return None
    return float(np.polyfit(np.log(ms), np.log(vals), 1)[0])


def cmd_sweep_torus(args) -> int:
    try:
        m_list = [int(tok) for tok in args.m_list.split(",") if tok.strip()]
    except ValueError:
        sys.stderr.write(f"error: bad --m-list {args.m_list!r}\n")
        return 2
    if not m_list:
        sys.stderr.write("error: empty m list\n")
        return 2
    os.makedirs(args.out, exist_ok=True)

    rows = []
    for m in m_list:
        graph_spec = f"torus:d={args.dim},m={m}"
        g = parse_graph_spec(graph_spec)
        chain = srw_chain(g)
        profile = metric_profile(g)
        targets = list(range(args.set_size))
        law = hitting_law(chain, target_set(chain, targets))
        rows.append({
            "m": m,
            "t_rel": chain.t_rel,
            "e_pi_to": eigentime_mean_hit(chain),
            "ab_error": chain.t_rel / law.e_alpha_ta,
            "refined_error": refined_error(law),
            "beta_gamma": beta_gamma(chain, profile),
        })

    ms = [row["m"] for row in rows]
    fits = {
        key: _loglog_slope(ms, [row[key] for row in rows])
        for key in ("t_rel", "e_pi_to", "ab_error", "refined_error", "beta_gamma")
    }
    csv_rows = [{k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in row.items()} for row in rows]
    csv_path = _write_csv(
        os.path.join(args.out, "sweep.csv"),
        ["m", "t_rel", "e_pi_to", "ab_error", "refined_error", "beta_gamma"],
        csv_rows,
    )
    fits_path = _atomic_write(
        os.path.join(args.out, "sweep_fits.json"), json.dumps(fits, indent=2) + "\n"
    )
    artifacts = [csv_path, fits_path]
    if args.figures:
        from .figures import render_sweep_figure

        artifacts.append(render_sweep_figure(rows, fits, os.path.join(args.out, "sweep.png")))
    _write_manifest(args.out, "sweep-torus", {
        "dim": args.dim, "m_list": m_list, "set_size": args.set_size,
    }, artifacts)
    for row in rows:
        sys.stdout.write(
            f"m={row['m']:4d} t_rel={row['t_rel']:.4g} E_pi[T_o]={row['e_pi_to']:.4g} "
            f"ab={row['ab_error']:.4g} refined={row['refined_error']:.4g} "
            f"beta={row['beta_gamma']:.4g}\n"
        )
    sys.stdout.write(f"slopes: {json.dumps(fits)}\n")
    return 0


def cmd_simulate(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    seed = _seed_from(args)
    g = parse_graph_spec(args.graph)
    chain = srw_chain(g)
    targets = parse_set_spec(args.set, g)
    law = hitting_law(chain, target_set(chain, targets))

    grid = _parse_t_grid(args.t_grid)
    if grid is None:
        grid = np.geomspace(chain.t_rel / 10.0, 5.0 * law.e_alpha_ta, 20)
    cfg = SimConfig(samples=args.samples, seed=seed, start=args.start, workers=args.jobs)
    batch = sample_hitting(chain, targets, cfg)
    est = empirical_tail(batch, grid, z=MC_BAND_Z)

    if args.start == "qs":
        exact = np.exp(-grid / law.e_alpha_ta)
    elif args.start == "pi":
        exact = np.asarray(tail_from_pi(law, grid))
    else:
        exact = np.asarray(tail_from_vertex(law, int(args.start.split(":")[1]), grid))

    rows = [
        {
            "t": f"{t:.12g}", "exact": f"{e:.12g}", "empirical": f"{s:.12g}",
            "lower": f"{lo:.12g}", "upper": f"{hi:.12g}",
            "in_band": int(lo <= e <= hi),
        }
        for t, e, s, lo, hi in zip(grid, exact, est.survival, est.lower, est.upper)
    ]
    csv_path = _write_csv(
        os.path.join(args.out, "simulate.csv"),
        ["t", "exact", "empirical", "lower", "upper", "in_band"],
        rows,
    )
    artifacts = [csv_path]
    if args.figures:
        from .figures import render_mc_figure

        artifacts.append(render_mc_figure(
            grid, exact, est.survival, est.lower, est.upper,
            os.path.join(args.out, "simulate.png"),
            title=f"{args.graph}, A={targets}, start={args.start}, N={args.samples}",
        ))
    _write_manifest(args.out, "simulate", {
        "graph": args.graph, "set": args.set, "start": args.start,
        "samples": args.samples, "seed": seed,
        "censored_fraction": batch.censored_fraction,
    }, artifacts)
    inside = sum(row["in_band"] for row in rows)
    sys.stdout.write(
        f"{args.samples} samples, censored fraction {batch.censored_fraction:.2e}; "
        f"{inside}/{len(rows)} grid points inside the {MC_BAND_Z:.0f}-sigma band\n"
    )
    sys.stdout.write(f"results written to {csv_path}\n")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="qstime-out", help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (falls back to QSTIME_SEED, then 1729)")
    parser.add_argument("--t-grid", default=None, metavar="MIN,MAX,COUNT",
                        help="override the evaluation time grid")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the inequality slack for pass/fail")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                        help="render matplotlib figures next to the data files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qstime",
        description="Quasi-stationary hitting-time laws and exponential-approximation bounds",
    )
    parser.add_argument("--version", action="version", version=f"qstime {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one (graph, target) instance")
    p.add_argument("--graph", required=True, help="graph spec, e.g. torus:d=2,m=16")
    p.add_argument("--set", required=True, help="target spec, e.g. 0,4 or ball:o=0,r=1")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the verdict battery over an instance list")
    p.add_argument("instances", nargs="?", default=None,
                   help="file of '<graph-spec> <set-spec>' lines (default: built-in suite)")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep-torus", help="scaling sweep over torus side lengths")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--m-list", required=True, help="comma-separated side lengths")
    p.add_argument("--set-size", type=int, default=1, help="|A| (vertices 0..k-1)")
    _add_common(p)
    p.set_defaults(func=cmd_sweep_torus)

    p = sub.add_parser("simulate", help="Monte Carlo tails against the exact law")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--start", default="pi", help="vertex:<i>, pi, or qs")
    p.add_argument("--samples", type=int, default=100_000)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; preserve --version/-h exits
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
