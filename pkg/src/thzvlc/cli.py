"""Command line front end: ``thzvlc {run,sweep,figures,validate}``.

Exit codes: 0 success, 2 configuration error (the offending field is named),
3 when no trial of the invocation admitted a feasible THz power split.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .engine import TRIAL_FIELDS, default_threads, make_executor, run_monte_carlo, run_trial, trial_seed
from .figures import RECIPES_BY_NAME, write_figures
from .metrics import THZ, VLC, shannon_rate
from .scenario import (MODES, ScenarioError, apply_overrides, default_config, fingerprint,
                       load_config, scenario_from_config, scenario_to_config)
from .sweep import (BLOCKAGE_STATES, SWEEP_PARAMS, SweepSpec, any_split_feasible,
                    render_csv, run_sweep)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

DEFAULT_SEED = 20240601
DEFAULT_TRIALS = 1000

PER_USER_COLUMNS = ("user", "x", "y", "z", "rcs", "snr_sens", "p_d", "covered", "detected",
                    "thz_comm_snr", "link", "vlc_ap", "snr", "rate")


def _g(x: float) -> str:
    return format(float(x), ".9g")


def _load(args) -> dict[str, Any]:
    if args.config is None:
        cfg = default_config()
    else:
        try:
            cfg = load_config(args.config)
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError("config", str(exc)) from None
    return apply_overrides(cfg, args.set or [])


def per_user_csv(s, trial) -> str:
    """Per-user report of one trial: geometry, sensing, association, rate."""
    bandwidth = {THZ: s.thz.bandwidth, VLC: s.vlc_aps[0].bandwidth if s.vlc_aps else 0.0}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PER_USER_COLUMNS)
    assoc = trial.association
    for n, det in enumerate(trial.detections):
        x, y, z = trial.users.positions[n]
        link = assoc.link[n]
        rate = shannon_rate(bandwidth[link], assoc.snr[n]) if link in bandwidth else 0.0
        w.writerow([n, _g(x), _g(y), _g(z), _g(trial.users.rcs[n]), _g(det.snr_sens),
                    _g(det.p_d), int(det.covered), int(det.detected), _g(trial.thz_snr[n]),
                    link, assoc.vlc_ap[n], _g(assoc.snr[n]), _g(rate)])
    return buf.getvalue()


def _summary(s, overrides, res, seed) -> str:
    doc = {
        "fingerprint": fingerprint(s),
        "seed": seed,
        "trials": res.trials,
        "overrides": list(overrides),
        "config": scenario_to_config(s),
        "fields": list(TRIAL_FIELDS),
        "mean": {k: res.mean[k] for k in TRIAL_FIELDS},
        "std": {k: res.std[k] for k in TRIAL_FIELDS},
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def cmd_run(args) -> int:
    cfg = _load(args)
    s = scenario_from_config(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    res = run_monte_carlo(s, args.trials, args.seed, threads=args.threads)
    (out / "summary.json").write_text(_summary(s, args.set or [], res, args.seed))
    report = run_trial(s, trial_seed(args.seed, 0))
    (out / "per_user.csv").write_text(per_user_csv(s, report))
    print(f"wrote {out / 'summary.json'} and {out / 'per_user.csv'}")
    if res.mean["split_feasible"] == 0:
        print("error: the THz power split was infeasible in every trial", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _parse_values(raw: str, parameter: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise ScenarioError("sweep.values", f"cannot parse {raw!r}") from None
    if parameter == "user_count":
        return tuple(int(v) if v == int(v) else v for v in vals)
    return vals


def cmd_sweep(args) -> int:
    cfg = _load(args)
    base = scenario_from_config(cfg)
    spec = SweepSpec(args.param, _parse_values(args.values, args.param), args.trials,
                     args.seed, tuple(args.modes.split(",")), args.blockage)
    pool = make_executor(args.threads)
    try:
        points = run_sweep(cfg, spec, executor=pool)
    finally:
        if pool is not None:
            pool.shutdown()
    header = [
        f"fingerprint: {fingerprint(base)}",
        f"parameter: {spec.parameter}",
        f"modes: {','.join(spec.modes)}",
        f"blockage: {spec.blockage}",
        f"trials: {spec.trials}",
        f"seed: {spec.base_seed}",
        f"overrides: {json.dumps(list(args.set or []))}",
    ]
    text = render_csv(points, header)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"sweep_{spec.parameter}.csv"
    path.write_text(text)
    print(f"wrote {path}")
    if not any_split_feasible(points):
        print("error: the THz power split was infeasible in every trial", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_figures(args) -> int:
    cfg = _load(args)
    scenario_from_config(cfg)
    names = None
    if args.only:
        names = tuple(args.only.split(","))
        unknown = [n for n in names if n not in RECIPES_BY_NAME]
        if unknown:
            raise ScenarioError("figures.only", f"unknown figure(s) {unknown}")
    pool = make_executor(args.threads)
    try:
        done = write_figures(cfg, Path(args.out), args.trials, args.seed, executor=pool,
                             names=names)
    finally:
        if pool is not None:
            pool.shutdown()
    for name in done:
        print(f"wrote {Path(args.out) / (name + '.csv')}")
    if not any(any_split_feasible(p) for p in done.values()):
        print("error: the THz power split was infeasible in every trial", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_validate(args) -> int:
    s = scenario_from_config(_load(args))
    print(f"ok {fingerprint(s)}")
    return EXIT_OK


def _common(p: argparse.ArgumentParser, *, trials: bool = True, out: bool = True) -> None:
    p.add_argument("--config", type=Path, help="JSON scenario file (defaults built in)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config field, e.g. blockage.enabled=true (repeatable)")
    if trials:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker processes (default: all cores, here {default_threads()})")
    if out:
        p.add_argument("--out", default="out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thzvlc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="one Monte Carlo experiment")
    _common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep one parameter")
    _common(p)
    p.add_argument("--param", required=True, choices=sorted(SWEEP_PARAMS))
    p.add_argument("--values", required=True, help="comma separated, e.g. 2,4,6,8")
    p.add_argument("--modes", default="proposed", help=f"comma separated subset of {','.join(MODES)}")
    p.add_argument("--blockage", default="off", choices=sorted(BLOCKAGE_STATES))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="write every figure CSV")
    _common(p)
    p.add_argument("--only", help="comma separated recipe names")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("validate", help="check a config and print its fingerprint")
    _common(p, trials=False, out=False)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        print("error: trials: must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("error: threads: must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
