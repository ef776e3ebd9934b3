"""Command-line surface.

Subcommands: classify, boundary, critical-alpha, simulate, lyapunov,
reproduce.  Exit codes: 0 success (and expectation met), 1 reproduction
verdict mismatch, 2 usage or domain errors.  All emitted CSV/JSON is
byte-deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import chaos, dynamics, manifest, output, solver
from .errors import FddeAtlasError
from .stability import (
    CriticalAlphaKind,
    SystemParams,
    boundary_tau,
    classify_region,
    critical_alpha,
)

_SIM_DEFAULTS = {
    "alpha": None,
    "tau": None,
    "rhs": None,
    "builtin": None,
    "a": None,
    "b": None,
    "history": 0.1,
    "horizon": solver.DEFAULT_HORIZON,
    "step": None,
    "equilibrium": 0.0,
}

_LYAP_DEFAULTS = {
    **_SIM_DEFAULTS,
    "dimension": 4,
    "lag": None,
    "theiler": None,
    "fit_min": 10,
    "fit_max": 200,
    "skip": 0.3,
}


def _merge_config(defaults, args, keys):
    """defaults < JSON config file < explicitly passed CLI flags."""
    merged = dict(defaults)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        with open(cfg_path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise FddeAtlasError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _rhs_from(cfg):
    if cfg.get("rhs"):
        return dynamics.parse_rhs(cfg["rhs"])
    if cfg.get("builtin"):
        return dynamics.builtin_rhs(cfg["builtin"])
    if cfg.get("a") is not None and cfg.get("b") is not None:
        return dynamics.linear_rhs(cfg["a"], cfg["b"])
    raise FddeAtlasError("no right-hand side: pass --rhs, --builtin or -a/-b")


def _require(cfg, *keys):
    for key in keys:
        if cfg.get(key) is None:
            raise FddeAtlasError(f"missing required parameter --{key.replace('_','-')}")


def _fmt6(v):
    return format(v, ".6g")


def cmd_classify(args):
    label = classify_region(SystemParams(args.a, args.b))
    if args.json:
        print(output.dump_json({
            "region": label.region.value,
            "a0": label.a0,
            "a1": label.a1,
        }))
        return 0
    parts = [label.region.value]
    if label.a0 is not None:
        parts.append(f"a0={_fmt6(label.a0)}")
    if label.a1 is not None:
        parts.append(f"a1={_fmt6(label.a1)}")
    print(", ".join(parts))
    return 0


def cmd_boundary(args):
    params = SystemParams(args.a, args.b)
    if args.points < 2:
        raise FddeAtlasError("need at least 2 grid points")
    step = (args.alpha_max - args.alpha_min) / (args.points - 1)
    rows = []
    for i in range(args.points):
        alpha = min(args.alpha_min + i * step, args.alpha_max)
        rows.append((alpha, boundary_tau(params, alpha)))
    lines = output.csv_lines(("alpha", "tau"), rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


def cmd_critical_alpha(args):
    res = critical_alpha(SystemParams(args.a, args.b), args.tau)
    if args.json:
        print(output.dump_json({
            "kind": res.kind.value,
            "alpha0": res.alpha0,
            "stable_side": res.stable_side.value if res.stable_side else None,
            "alpha1": res.alpha1,
            "alpha2": res.alpha2,
        }))
        return 0
    if res.kind is CriticalAlphaKind.THRESHOLD:
        print(
            f"threshold alpha0={_fmt6(res.alpha0)} stable={res.stable_side.value}"
        )
    elif res.kind is CriticalAlphaKind.WINDOW:
        print(f"window alpha1={_fmt6(res.alpha1)} alpha2={_fmt6(res.alpha2)}")
    else:
        print(res.kind.value)
    return 0


def _build_problem(cfg):
    _require(cfg, "alpha", "tau")
    rhs = _rhs_from(cfg)
    problem = solver.FddeProblem(
        rhs=rhs,
        alpha=cfg["alpha"],
        tau=cfg["tau"],
        history=cfg["history"],
        horizon=cfg["horizon"],
        step=cfg["step"],
    )
    return rhs, problem


def cmd_simulate(args):
    cfg = _merge_config(_SIM_DEFAULTS, args, _SIM_DEFAULTS)
    _, problem = _build_problem(cfg)
    traj = solver.simulate(problem)
    verdict = solver.amplitude_verdict(traj, cfg["equilibrium"])
    lines = output.csv_lines(("t", "x"), zip(traj.times, traj.values))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    if traj.blowup is not None:
        print(f"blowup: index={traj.blowup[0]} t={_fmt6(traj.blowup[0]*traj.step)}")
    print(f"verdict: {verdict}")
    return 0


def cmd_lyapunov(args):
    cfg = _merge_config(_LYAP_DEFAULTS, args, _LYAP_DEFAULTS)
    _, problem = _build_problem(cfg)
    traj = solver.simulate(problem)
    lag = cfg["lag"]
    if lag is None:
        lag = max(1, round(cfg["tau"] / traj.step)) if cfg["tau"] > 0 else 1
    theiler = cfg["theiler"] if cfg["theiler"] is not None else 2 * lag
    emb = chaos.EmbeddingConfig(
        dimension=cfg["dimension"],
        lag=lag,
        theiler=theiler,
        fit_range=(cfg["fit_min"], cfg["fit_max"]),
        transient_skip=cfg["skip"],
    )
    est = chaos.mle(traj, emb)
    output.write_csv(
        args.output or "divergence.csv",
        ("t", "mean_log_distance"),
        est.divergence_curve,
    )
    print(output.dump_json({
        "mle": est.mle,
        "fit_residual": est.fit_residual,
        "divergence_curve": [[t, v] for t, v in est.divergence_curve],
    }))
    return 0


def _worker_count(n_entries):
    cap = os.environ.get("FDDE_ATLAS_THREADS", "")
    workers = min(os.cpu_count() or 1, n_entries)
    if cap.strip():
        workers = max(1, min(workers, int(cap)))
    return workers


def cmd_reproduce(args):
    if args.all:
        ids = manifest.entry_ids()
    else:
        ids = args.ids
        if not ids:
            raise FddeAtlasError("pass one or more entry ids, or --all")
        unknown = [i for i in ids if i not in manifest.ENTRIES]
        if unknown:
            raise FddeAtlasError(
                f"unknown ids {unknown}; known: {manifest.entry_ids()}"
            )
    workers = _worker_count(len(ids))
    if workers > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(manifest.run_entry, ids, [args.outdir] * len(ids)))
    else:
        results = [manifest.run_entry(i, args.outdir) for i in ids]
    all_ok = True
    for res in results:
        status = "ok" if res["ok"] else "MISMATCH"
        print(
            f"{res['id']}: expected={res['expected']} observed={res['observed']}"
            f" [{status}]"
        )
        all_ok &= res["ok"]
    return 0 if all_ok else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="fdde-atlas",
        description=(
            "Stability atlas, simulation and chaos detection for scalar "
            "fractional-order delay differential equations"
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("classify", help="place (a, b) on the stability chart")
    pc.add_argument("-a", type=float, required=True)
    pc.add_argument("-b", type=float, required=True)
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(func=cmd_classify)

    pb = sub.add_parser("boundary", help="tabulate the Hopf boundary curve")
    pb.add_argument("-a", type=float, required=True)
    pb.add_argument("-b", type=float, required=True)
    pb.add_argument("--alpha-min", type=float, default=0.01)
    pb.add_argument("--alpha-max", type=float, default=1.0)
    pb.add_argument("--points", type=int, default=100)
    pb.add_argument("-o", "--output")
    pb.set_defaults(func=cmd_boundary)

    pk = sub.add_parser("critical-alpha", help="split the order axis at fixed delay")
    pk.add_argument("-a", type=float, required=True)
    pk.add_argument("-b", type=float, required=True)
    pk.add_argument("--tau", type=float, required=True)
    pk.add_argument("--json", action="store_true")
    pk.set_defaults(func=cmd_critical_alpha)

    def sim_opts(sp):
        sp.add_argument("--config", help="JSON file with run parameters")
        sp.add_argument("--rhs", help="expression in x and xd")
        sp.add_argument("--builtin", help="named example right-hand side")
        sp.add_argument("-a", type=float, help="linear term coefficient")
        sp.add_argument("-b", type=float, help="delayed term coefficient")
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--history", type=float)
        sp.add_argument("--horizon", type=float)
        sp.add_argument("--step", type=float)
        sp.add_argument("-o", "--output")

    ps = sub.add_parser("simulate", help="integrate one problem, emit (t, x) CSV")
    sim_opts(ps)
    ps.add_argument("--equilibrium", type=float, help="reference level for the verdict")
    ps.set_defaults(func=cmd_simulate)

    pl = sub.add_parser("lyapunov", help="largest Lyapunov exponent of a run")
    sim_opts(pl)
    pl.add_argument("--dimension", type=int)
    pl.add_argument("--lag", type=int)
    pl.add_argument("--theiler", type=int)
    pl.add_argument("--fit-min", type=int)
    pl.add_argument("--fit-max", type=int)
    pl.add_argument("--skip", type=float)
    pl.set_defaults(func=cmd_lyapunov)

    pr = sub.add_parser("reproduce", help="rerun a documented example end to end")
    pr.add_argument("ids", nargs="*")
    pr.add_argument("--all", action="store_true")
    pr.add_argument("--outdir", default="repro-out")
    pr.set_defaults(func=cmd_reproduce)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FddeAtlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
