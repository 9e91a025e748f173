"""Command-line interface: validate, run, sweep, fixed-point, classify.

Exit codes: 0 success, 1 internal error, 2 config error, 3 simulation
error (dogmatic opinion or numeric failure), 4 I/O failure, 5 every
fixed-point bisection failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import replace

from .config import ConfigError, ScenarioConfig, config_from_dict, default_prior_weight, load_config
from .dynamics import (
    BracketingError,
    ConvergenceReport,
    Trace,
    UpdateParams,
    classify_pair,
    detect_convergence,
    find_fixed_point,
    simulate,
)
from .fusion import FUSION_OPERATORS
from .opinion import from_projection, projected
from .trust import TrustOpinion, discount

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_SIMULATION = 3
EXIT_IO = 4
EXIT_ALL_POINTS_FAILED = 5


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_trace_csv(trace: Trace, path: str) -> None:
    k = trace.steps[0].opinions[0].k
    header = (
        ["t", "agent"]
        + [f"b_{i}" for i in range(k)]
        + ["u"]
        + [f"P_{i}" for i in range(k)]
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for step in trace.steps:
            for aid, op, probs in zip(trace.agents, step.opinions, step.projections):
                writer.writerow(
                    [step.time, aid]
                    + [_fmt(b) for b in op.belief]
                    + [_fmt(op.uncertainty)]
                    + [_fmt(p) for p in probs]
                )


def report_to_dict(report: ConvergenceReport, agents: tuple[str, ...]) -> dict:
    doc: dict = {"converged": report.converged, "radicalized": report.radicalized}
    if report.steps_to_converge is not None:
        doc["steps_to_converge"] = report.steps_to_converge
    if report.limit is not None:
        doc["limit"] = {aid: list(probs) for aid, probs in zip(agents, report.limit)}
    return doc


def write_report_json(report: ConvergenceReport, agents: tuple[str, ...], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_dict(report, agents), fh, indent=2)
        fh.write("\n")


def _load_with_overrides(args) -> ScenarioConfig:
    cfg = load_config(args.config)
    return cfg.with_overrides(
        operator=getattr(args, "operator", None),
        t_max=getattr(args, "steps", None),
        eps=getattr(args, "eps", None),
        epistemic_mode=True if getattr(args, "epistemic", False) else None,
    )


def _run_scenario(cfg: ScenarioConfig, out_dir: str, stem: str = "") -> ConvergenceReport:
    state = cfg.to_network_state()
    trace = simulate(state, cfg.to_update_params(), cfg.t_max)
    report = detect_convergence(trace, cfg.eps, cfg.window)
    os.makedirs(out_dir, exist_ok=True)
    prefix = f"{stem}." if stem else ""
    write_trace_csv(trace, os.path.join(out_dir, f"{prefix}trace.csv"))
    write_report_json(report, trace.agents, os.path.join(out_dir, f"{prefix}report.json"))
    return report


def _cmd_validate(args) -> int:
    cfg = _load_with_overrides(args)
    print(
        f"ok: {cfg.n} agents, domain size {cfg.k}, operator {cfg.operator}, "
        f"W={_fmt(cfg.prior_weight)}, epistemic={'on' if cfg.epistemic_mode else 'off'}, "
        f"t_max={cfg.t_max}"
    )
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = _load_with_overrides(args)
    report = _run_scenario(cfg, args.out)
    status = "converged" if report.converged else "not converged"
    if report.radicalized:
        status += " (radicalized)"
    print(f"run finished: {status}; outputs in {args.out}")
    return EXIT_OK


def _parse_grid(value: str) -> dict:
    if os.path.exists(value):
        with open(value, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = value
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"grid: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"grid: expected an object, got {raw!r}")
    unknown = set(raw) - {"p_a", "p_b", "trust"}
    if unknown:
        raise ConfigError(f"grid: unknown keys {sorted(unknown)}")
    axes = {}
    for key, values in raw.items():
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid.{key}: expected a non-empty array")
        out = []
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"grid.{key}[{i}]: expected a number, got {v!r}")
            out.append(float(v))
        axes[key] = out
    if not axes:
        raise ConfigError("grid: empty grid")
    return axes


def _grid_points(axes: dict) -> list[dict]:
    points = [{}]
    for key in ("p_a", "p_b", "trust"):
        if key not in axes:
            continue
        points = [dict(pt, **{key: v}) for v in axes[key] for pt in points]
    return points


def _apply_point(cfg: ScenarioConfig, point: dict) -> ScenarioConfig:
    if not point:
        return cfg
    if cfg.n != 2:
        raise ConfigError("grid: p_a/p_b/trust axes need a 2-agent base config")
    opinions = list(cfg.opinions)
    base_rate = cfg.opinions[0].base_rate
    if "p_a" in point or "p_b" in point:
        if cfg.k != 2:
            raise ConfigError("grid: p_a/p_b axes need a binary domain")
        if "p_a" in point:
            opinions[0] = from_projection((point["p_a"], 1.0 - point["p_a"]), base_rate)
        if "p_b" in point:
            opinions[1] = from_projection((point["p_b"], 1.0 - point["p_b"]), base_rate)
    trust = cfg.trust
    if "trust" in point:
        t = point["trust"]
        trust = ((cfg.trust[0][0], t), (t, cfg.trust[1][1]))
    return replace(cfg, opinions=tuple(opinions), trust=trust)


def _cmd_sweep(args) -> int:
    base = _load_with_overrides(args)
    points = _grid_points(_parse_grid(args.grid))
    os.makedirs(args.out, exist_ok=True)

    rows = []
    for idx, point in enumerate(points):
        cfg = _apply_point(base, point)
        stem = f"point_{idx:04d}"
        report = _run_scenario(cfg, args.out, stem)
        row = {
            "point": idx,
            "p_a": _fmt(projected(cfg.opinions[0])[0]) if cfg.k == 2 else "",
            "p_b": _fmt(projected(cfg.opinions[1])[0]) if cfg.n == 2 and cfg.k == 2 else "",
            "trust": _fmt(cfg.trust[0][1]) if cfg.n == 2 else "",
            "scenario_class": "",
            "converged": report.converged,
            "radicalized": report.radicalized,
            "steps_to_converge": (
                report.steps_to_converge if report.steps_to_converge is not None else ""
            ),
        }
        if cfg.n == 2 and cfg.k == 2:
            row["scenario_class"] = classify_pair(
                cfg.opinions[0], cfg.opinions[1], TrustOpinion(cfg.trust[0][1])
            ).value
        for aid_i, aid in enumerate(cfg.agent_ids):
            if report.limit is not None:
                row[f"limit_{aid}"] = _fmt(report.limit[aid_i][0])
            else:
                row[f"limit_{aid}"] = ""
        rows.append(row)

    summary_path = os.path.join(args.out, "summary.csv")
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    print(f"sweep finished: {len(points)} points; summary in {summary_path}")
    return EXIT_OK


def _parse_probability_sweep(spec: str) -> list[float]:
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"p-a sweep: expected start:stop:step, got {spec!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"p-a sweep: not numeric: {spec!r}") from None
        if step <= 0.0:
            raise ConfigError(f"p-a sweep: step must be > 0, got {step!r}")
        values = []
        count = int(round((stop - start) / step))
        for i in range(count + 1):
            v = start + i * step
            if v <= stop + 1e-12:
                values.append(round(v, 12))
    else:
        try:
            values = [float(p) for p in spec.split(",") if p.strip()]
        except ValueError:
            raise ConfigError(f"p-a sweep: not numeric: {spec!r}") from None
    if not values:
        raise ConfigError("p-a sweep: no values")
    for v in values:
        if not (0.0 < v < 1.0):
            raise ConfigError(f"p-a sweep: values must be in (0, 1), got {v!r}")
    return values


_PLOT_SCRIPT = """\
# Boundary between the two radicalization basins of a mutually trusting
# agent pair.  Render with: gnuplot {script}
set datafile separator ","
set key off
set xlabel "initial P_A(x)"
set ylabel "fixed-point initial P_B(x)"
set xrange [0:1]
set yrange [0:1]
set grid
plot "{csv}" skip 1 using 1:2 with linespoints pt 7
"""


def _cmd_fixed_point(args) -> int:
    if args.operator != "cumulative":
        raise ConfigError(
            f"operator: fixed-point search requires 'cumulative', got {args.operator!r}"
        )
    if not (0.0 <= args.trust <= 1.0):
        raise ConfigError(f"trust: must be in [0, 1], got {args.trust!r}")
    values = _parse_probability_sweep(args.p_a)
    params = UpdateParams("cumulative", default_prior_weight(), epistemic_mode=True)
    trust = TrustOpinion(args.trust)

    results = []
    failures = 0
    for p_a in values:
        try:
            p_b = find_fixed_point(p_a, trust, params, args.tol, horizon=args.steps)
        except BracketingError as exc:
            print(f"fixed-point failed for p_a={_fmt(p_a)}: {exc}", file=sys.stderr)
            p_b = math.nan
            failures += 1
        results.append((p_a, p_b))

    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p_a", "p_b"])
        for p_a, p_b in results:
            writer.writerow([_fmt(p_a), _fmt(p_b)])
    script_path = os.path.splitext(args.out)[0] + ".gp"
    with open(script_path, "w", encoding="utf-8") as fh:
        fh.write(_PLOT_SCRIPT.format(csv=os.path.basename(args.out), script=script_path))

    if failures == len(values):
        print("every fixed-point bisection failed", file=sys.stderr)
        return EXIT_ALL_POINTS_FAILED
    print(f"fixed-point sweep finished: {len(values) - failures}/{len(values)} points; "
          f"curve in {args.out}, plot script in {script_path}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    cfg = _load_with_overrides(args)
    if cfg.n != 2:
        raise ConfigError(f"agents: classification needs exactly 2 agents, got {cfg.n}")
    if cfg.k != 2:
        raise ConfigError(f"agents: classification needs a binary domain, got k={cfg.k}")
    a, b = cfg.opinions
    trust_ab = TrustOpinion(cfg.trust[0][1])
    result = {
        "scenario_class": classify_pair(a, b, trust_ab).value,
        "p_a": projected(a)[0],
        "p_learned": projected(discount(trust_ab, b))[0],
    }
    print(json.dumps(result))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sldyn",
        description="Subjective-logic opinion dynamics simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_out=True):
        p.add_argument("--config", required=True, help="scenario JSON file")
        if with_out:
            p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--operator", choices=sorted(FUSION_OPERATORS), help="override fusion operator")
        p.add_argument("--epistemic", action="store_true", help="force epistemic mode on")
        p.add_argument("--steps", type=int, help="override t_max")
        p.add_argument("--eps", type=float, help="override convergence eps")
        p.add_argument("--seed", type=int, help="reserved; simulations are deterministic")

    p_validate = sub.add_parser("validate", help="check a scenario file")
    add_common(p_validate, with_out=False)
    p_validate.set_defaults(func=_cmd_validate)

    p_run = sub.add_parser("run", help="simulate a scenario, write trace and report")
    add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a grid of scenario variants")
    add_common(p_sweep)
    p_sweep.add_argument(
        "--grid", required=True,
        help="grid JSON (file or inline): optional arrays p_a, p_b, trust",
    )
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fp = sub.add_parser("fixed-point", help="trace the radicalization boundary curve")
    p_fp.add_argument("--trust", type=float, default=0.5, help="mutual trust (default 0.5)")
    p_fp.add_argument("--operator", default="cumulative", help="fusion operator (must be cumulative)")
    p_fp.add_argument("--p-a", dest="p_a", default="0.05:0.95:0.05",
                      help="sweep: comma list or start:stop:step (default 0.05:0.95:0.05)")
    p_fp.add_argument("--tol", type=float, default=1e-4, help="bisection tolerance")
    p_fp.add_argument("--steps", type=int, default=5000, help="simulation horizon per probe")
    p_fp.add_argument("--out", required=True, help="output CSV path")
    p_fp.add_argument("--seed", type=int, help="reserved; simulations are deterministic")
    p_fp.set_defaults(func=_cmd_fixed_point)

    p_classify = sub.add_parser("classify", help="classify a two-agent scenario")
    add_common(p_classify, with_out=False)
    p_classify.set_defaults(func=_cmd_classify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # DogmaticOpinionError and numeric-validity failures land here.
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # no stack trace reaches the user
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
