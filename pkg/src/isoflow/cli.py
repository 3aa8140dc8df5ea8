"""Experiment runner: reproducible conservation runs and convergence studies.

Exit codes: 0 success, 2 configuration problem, 3 solver failure (partial
outputs are written and flagged), 4 degenerate convergence fit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .diagnostics import (
    convergence_study,
    write_convergence_outputs,
    write_monitor_csvs,
    write_trajectory_csv,
)
from .errors import ConfigurationError, ConvergenceError, DegenerateStudyError
from .flows import (
    ProductFlowDefinition,
    bloch_iserles_flow,
    brockett_flow,
    brockett_preset,
    chu_flow,
    heisenberg_chain_flow,
    list_presets,
    point_vortex_flow,
    preset,
    rigid_body_flow,
    toda_flow,
)
from .integrators import SchemeVariant, SolverConfig, complement, general, integrate, j_quadratic
from .linalg import matrix_from_json
from .tableaux import load_tableau_file

_RUN_FIELDS = (
    "flow",
    "order",
    "tableau",
    "partitioned",
    "variant",
    "h",
    "T",
    "tol",
    "max_iter",
    "solver",
    "monitors",
    "out",
    "seed",
    "stride",
    "initial",
)


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config file '{path}': {exc}")
    if "config" in obj and isinstance(obj["config"], dict):
        # a manifest written by a previous run reproduces that run
        return obj["config"]
    return obj


def _flow_from_config(config: dict):
    spec_ = config.get("flow")
    if spec_ is None:
        raise ConfigurationError("field 'flow' is required")
    if isinstance(spec_, str):
        if spec_ == "brockett-3" and config.get("seed") is not None:
            flow = brockett_preset(seed=int(config["seed"]))
        else:
            flow = preset(spec_)
    elif isinstance(spec_, dict):
        flow = _inline_flow(spec_)
    else:
        raise ConfigurationError("field 'flow' must be a preset name or an object")
    if config.get("initial") is not None:
        initial = config["initial"]
        if isinstance(flow, ProductFlowDefinition):
            flow.initial_state = tuple(matrix_from_json(m) for m in initial)
        else:
            flow.initial_state = matrix_from_json(initial)
    if flow.initial_state is None:
        raise ConfigurationError(
            f"flow '{flow.name}' has no initial state; provide field 'initial'"
        )
    return flow


def _inline_flow(spec_: dict):
    kind = spec_.get("constructor")
    args = {k: v for k, v in spec_.items() if k != "constructor"}
    if kind == "rigid-body":
        return rigid_body_flow(int(args.get("n", 10)), args.get("inertia_diagonal"))
    if kind == "toda":
        return toda_flow(int(args.get("n", 4)))
    if kind == "bloch-iserles":
        return bloch_iserles_flow(matrix_from_json(args["N"]))
    if kind == "chu":
        return chu_flow(int(args.get("n", 4)), bool(args.get("force_centro", False)))
    if kind == "brockett":
        return brockett_flow(matrix_from_json(args["N"]))
    if kind == "vortices":
        return point_vortex_flow(args["strengths"], args.get("positions"))
    if kind == "heisenberg":
        return heisenberg_chain_flow(int(args.get("n", 3)))
    raise ConfigurationError(f"unknown inline flow constructor '{kind}'")


def _variant_from_name(name: str, n: int) -> SchemeVariant:
    if name == "general":
        return general()
    if name == "jquad":
        return j_quadratic(np.eye(n))
    if name == "complement":
        return complement(np.eye(n))
    raise ConfigurationError(f"unknown variant '{name}' (general, jquad, complement)")


def _solver_from_config(config: dict) -> SolverConfig:
    return SolverConfig(
        method=config.get("solver", "fixed-point"),
        abs_tol=float(config.get("tol", 1e-13)),
        max_iter=int(config.get("max_iter", 100)),
    )


def _default_monitors(flow) -> list:
    monitors = ["trace-powers", "subspace-residual", "iterations"]
    if getattr(flow, "hamiltonian", None) is not None:
        monitors.append("hamiltonian")
    if isinstance(flow, ProductFlowDefinition):
        monitors.append("momentum")
    return monitors


def _resolve_run_config(args) -> dict:
    config = _load_config(args.config) if args.config else {}
    for name in _RUN_FIELDS:
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            config[name] = value
    if config.get("h") is None:
        raise ConfigurationError("field 'h' is required")
    if config.get("T") is None:
        raise ConfigurationError("field 'T' is required")
    h = float(config["h"])
    T = float(config["T"])
    if not h > 0:
        raise ConfigurationError(f"field 'h' must be positive, got {h}")
    if T < h:
        raise ConfigurationError(f"field 'T' must be at least h, got T={T} < h={h}")
    config["h"] = h
    config["T"] = T
    return config


def _cmd_run(args) -> int:
    config = _resolve_run_config(args)
    flow = _flow_from_config(config)
    cfg = _solver_from_config(config)

    scheme = None
    if config.get("partitioned"):
        scheme = load_tableau_file(config["partitioned"])
    elif config.get("tableau"):
        scheme = load_tableau_file(config["tableau"])
    else:
        order = int(config.get("order", 2))
        if order not in (2, 4, 6):
            raise ConfigurationError(f"field 'order' must be 2, 4 or 6, got {order}")
        from .tableaux import gauss_legendre

        scheme = gauss_legendre(order // 2)

    variant = None
    if config.get("variant"):
        if isinstance(flow, ProductFlowDefinition):
            raise ConfigurationError("field 'variant' does not apply to product flows")
        variant = _variant_from_name(config["variant"], flow.n)

    monitors = config.get("monitors") or _default_monitors(flow)
    if isinstance(monitors, str):
        monitors = [m.strip() for m in monitors.split(",") if m.strip()]
    h, T = config["h"], config["T"]
    nsteps = round(T / h)
    stride = int(config.get("stride", 1))
    out_dir = config.get("out", "isoflow-out")
    os.makedirs(out_dir, exist_ok=True)

    status = 0
    error_message = None
    record = None
    try:
        record = integrate(
            flow,
            scheme,
            flow.initial_state,
            h,
            nsteps,
            monitors=monitors,
            variant=variant,
            cfg=cfg,
            stride=stride,
        )
        if not record.complete:
            status = 3
    except ConvergenceError as exc:
        status = 3
        error_message = str(exc)

    outputs = []
    if record is not None:
        traj_path = os.path.join(out_dir, "trajectory.csv")
        write_trajectory_csv(record, traj_path)
        outputs.append(traj_path)
        outputs.extend(write_monitor_csvs(record, out_dir))

    manifest = {
        "config": {k: config[k] for k in sorted(config)},
        "version": __version__,
        "complete": bool(record is not None and record.complete),
        "outputs": [os.path.basename(p) for p in outputs],
    }
    if error_message:
        manifest["error"] = error_message
    manifest_path = os.path.join(out_dir, "manifest.json")
    tmp = manifest_path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, manifest_path)

    if status == 0:
        print(f"wrote {len(outputs) + 1} files to {out_dir}")
    else:
        print(f"solver failure; partial outputs flagged in {manifest_path}", file=sys.stderr)
    return status


def _cmd_converge(args) -> int:
    config = _load_config(args.config) if args.config else {}
    for name in ("flow", "orders", "hs", "h_exponents", "T", "tol", "max_iter", "solver", "out"):
        value = getattr(args, name, None)
        if value is not None:
            config[name] = value
    if config.get("flow") is None:
        raise ConfigurationError("field 'flow' is required")
    flow = _flow_from_config({**config, "initial": config.get("initial")})
    cfg = _solver_from_config(config)

    orders = config.get("orders", "2,4,6")
    if isinstance(orders, str):
        orders = [int(o) for o in orders.split(",")]
    for order in orders:
        if order not in (2, 4, 6):
            raise ConfigurationError(f"field 'orders' must list 2, 4 or 6, got {order}")
    stage_counts = [o // 2 for o in orders]

    if config.get("hs"):
        hs = config["hs"]
        if isinstance(hs, str):
            hs = [float(v) for v in hs.split(",")]
    else:
        exponents = config.get("h_exponents", "4:10")
        if isinstance(exponents, str):
            lo, hi = exponents.split(":")
            exponents = range(int(lo), int(hi) + 1)
        hs = [0.5**k for k in exponents]
    T = float(config.get("T", 1.0))
    out_dir = config.get("out", "isoflow-out")

    report = convergence_study(flow, flow.initial_state, stage_counts, hs, T, cfg=cfg)
    paths = write_convergence_outputs(report, out_dir)
    for order in sorted(report.slopes):
        print(f"order {order}: fitted slope {report.slopes[order]:.3f} "
              f"({report.points_used[order]} points above floor)")
    print(f"wrote {', '.join(paths)}")
    return 0


def _cmd_list_flows(args) -> int:
    records = list_presets()
    if args.json:
        print(json.dumps(records, indent=2, sort_keys=True))
        return 0
    for rec in records:
        ham = "yes" if rec["hamiltonian"] else "no"
        print(f"{rec['name']:20s} dim {rec['dimension']:8s} {rec['subspace']:40s} hamiltonian: {ham}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoflow",
        description="Spectrum-preserving Runge-Kutta experiments for matrix flows",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate a flow and write trajectory/monitor CSVs")
    run.add_argument("--config", help="JSON config file (or a manifest from a previous run)")
    run.add_argument("--flow", help="preset name, e.g. rigid-body-10")
    run.add_argument("--order", type=int, help="method order: 2, 4 or 6")
    run.add_argument("--tableau", help="JSON tableau file")
    run.add_argument("--partitioned", help="JSON partitioned tableau pair file")
    run.add_argument("--variant", choices=["general", "jquad", "complement"])
    run.add_argument("--h", type=float, help="step size")
    run.add_argument("--T", type=float, help="total time")
    run.add_argument("--tol", type=float, help="stage solver tolerance")
    run.add_argument("--max-iter", dest="max_iter", type=int)
    run.add_argument("--solver", choices=["fixed-point", "newton"])
    run.add_argument("--monitors", help="comma-separated monitor names")
    run.add_argument("--out", help="output directory")
    run.add_argument("--seed", type=int, help="seed for randomized initial data")
    run.add_argument("--stride", type=int, help="record every stride-th step")
    run.set_defaults(func=_cmd_run)

    conv = sub.add_parser("converge", help="convergence-order study against a reference")
    conv.add_argument("--config", help="JSON config file")
    conv.add_argument("--flow")
    conv.add_argument("--orders", help="comma-separated orders, default 2,4,6")
    conv.add_argument("--hs", help="comma-separated step sizes")
    conv.add_argument("--h-exponents", dest="h_exponents", help="lo:hi meaning h = 0.5^k")
    conv.add_argument("--T", type=float)
    conv.add_argument("--tol", type=float)
    conv.add_argument("--max-iter", dest="max_iter", type=int)
    conv.add_argument("--solver", choices=["fixed-point", "newton"])
    conv.add_argument("--out")
    conv.set_defaults(func=_cmd_converge)

    lst = sub.add_parser("list-flows", help="list the shipped flow presets")
    lst.add_argument("--json", action="store_true")
    lst.set_defaults(func=_cmd_list_flows)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except DegenerateStudyError as exc:
        print(f"degenerate study: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
