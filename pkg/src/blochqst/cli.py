"""Command-line front end.

Subcommands: evolve, transfer, sweep, route, polarized.  Parameters come
from an optional JSON config file (--config) mirroring the manifest layout,
with explicit flags taking precedence; every run writes manifest.json plus
the data files for the chosen format.  Exit codes: 0 success, 1 config
error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import tilt_parameters
from .chain import ChainSpec, LatticeState, build_tilted_hamiltonian
from .evolution import Trajectory, evolve, trajectory, write_mean_position_csv, write_trajectory_csv
from .polarization import (
    PolarizationQubit,
    attach_polarization,
    bloch_vector,
    evolve_polarized,
    extract_qubit,
)
from .transfer import (
    TransferPlan,
    TruncatedGaussianSpec,
    gaussian_state,
    plan_transfer,
    route,
    sharp_state,
    success_probability,
    sweep_beta_delta,
    truncated_gaussian,
    write_output_profile_csv,
    write_route_json,
    write_route_mean_csv,
    write_sweep_csv,
    write_sweep_json,
)

_FLOAT_KEYS = {"beta", "force", "ratio", "coupling", "spacing", "t_start", "t_stop"}
_INT_KEYS = {"delta", "p", "margin", "window", "left", "right", "center", "t_steps", "workers"}

_DEFAULTS = {
    "evolve": {
        "initial": "sharp",
        "beta": None,
        "delta": None,
        "center": 0,
        "force": 0.0,
        "left": -40,
        "right": 40,
        "t_start": 0.0,
        "t_stop": None,
        "t_steps": 101,
        "coupling": 1.0,
        "spacing": 1.0,
    },
    "transfer": {
        "p": None,
        "force": None,
        "beta": None,
        "delta": None,
        "margin": None,
        "window": None,
        "t_steps": 101,
        "coupling": 1.0,
        "spacing": 1.0,
    },
    "sweep": {
        "ratio": None,
        "p": None,
        "beta_grid": None,
        "delta_grid": None,
        "workers": 1,
        "coupling": 1.0,
        "spacing": 1.0,
    },
    "route": {
        "forces": None,
        "beta": None,
        "delta": None,
        "t_stop": None,
        "t_steps": 129,
        "workers": 1,
        "coupling": 1.0,
        "spacing": 1.0,
    },
    "polarized": {
        "p": None,
        "force": None,
        "beta": None,
        "delta": None,
        "margin": None,
        "window": None,
        "qubit": [[1.0, 0.0], [0.0, 0.0]],
        "t_steps": 101,
        "coupling": 1.0,
        "spacing": 1.0,
    },
}


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    out_dir: str = "out"
    out_format: str = "csv"


def _parse_linspace_grid(spec) -> np.ndarray:
    """Grid given as "start:stop:count" or an explicit list of values."""
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected start:stop:count, got {spec!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be at least 1")
        return np.linspace(start, stop, count)
    grid = np.asarray([float(v) for v in spec], dtype=np.float64)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    return grid


def _parse_int_grid(spec) -> np.ndarray:
    """Grid given as "lo:hi" (inclusive, step 1), "lo:hi:step", or a list."""
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"expected lo:hi[:step], got {spec!r}")
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step < 1:
            raise ValueError("grid step must be positive")
        if hi < lo:
            raise ValueError("grid upper bound below lower bound")
        return np.arange(lo, hi + 1, step)
    grid = np.asarray([int(v) for v in spec], dtype=np.int64)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    return grid


def _parse_forces(spec) -> list[float]:
    if isinstance(spec, str):
        values = [float(tok) for tok in spec.split(",") if tok.strip()]
    else:
        values = [float(v) for v in spec]
    if not values:
        raise ValueError("forces must be non-empty")
    return values


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_KEYS:
        return int(value)
    if key == "qubit" and isinstance(value, str):
        return json.loads(value)
    return value


def validate(config: RunConfig) -> list[str]:
    """Collect human-readable violations; an empty list means runnable."""
    if config.command not in _DEFAULTS:
        return [f"unknown command {config.command!r}"]
    problems: list[str] = []
    params = dict(_DEFAULTS[config.command])
    for key, value in config.parameters.items():
        if key not in params:
            problems.append(f"unknown parameter {key!r} for {config.command}")
            continue
        try:
            params[key] = _coerce(key, value)
        except (TypeError, ValueError):
            problems.append(f"parameter {key!r} has malformed value {value!r}")
    config.parameters = params
    if problems:
        return problems

    if config.out_format not in ("csv", "json"):
        problems.append(f"format must be csv or json, not {config.out_format!r}")
    if not params["coupling"] > 0:
        problems.append("coupling must be positive")
    if not params["spacing"] > 0:
        problems.append("spacing must be positive")

    def need(key):
        if params[key] is None:
            problems.append(f"missing required parameter {key!r}")
            return False
        return True

    cmd = config.command
    if cmd in ("transfer", "polarized"):
        if (params["p"] is None) == (params["force"] is None):
            problems.append("exactly one of p and force is required")
        elif params["p"] is not None and params["p"] < 1:
            problems.append("p must be a positive site index")
        elif params["force"] is not None:
            if params["force"] >= 0:
                problems.append("force must be negative (tilt toward positive sites)")
            elif round(-params["coupling"] / (params["spacing"] * params["force"])) < 1:
                problems.append("force too strong: derived target below site 1")
        if need("beta") and not params["beta"] > 0:
            problems.append("beta must be positive")
        if need("delta") and params["delta"] < 0:
            problems.append("delta must be non-negative")
        delta = params["delta"]
        if delta is not None and delta >= 0:
            margin = params["margin"] if params["margin"] is not None else 2 * delta
            if margin < 0:
                problems.append("margin must be non-negative")
            elif not (margin > delta or margin == delta == 0):
                problems.append("margin must exceed delta (sharp limit excepted)")
            window = params["window"] if params["window"] is not None else delta
            if window < 0:
                problems.append("window must be non-negative")
            elif window > margin and not window == margin == 0:
                problems.append("window must not exceed the chain margin")
        if params["t_steps"] < 2:
            problems.append("t_steps must be at least 2")
        if cmd == "polarized":
            try:
                PolarizationQubit.from_json_pairs(params["qubit"])
            except (TypeError, ValueError) as exc:
                problems.append(f"qubit is not a normalized [re,im] pair list: {exc}")
    elif cmd == "sweep":
        if need("ratio") and params["ratio"] == 0:
            problems.append("ratio must be nonzero")
        if need("p") and params["p"] < 1:
            problems.append("p must be a positive site index")
        if need("beta_grid"):
            try:
                grid = _parse_linspace_grid(params["beta_grid"])
                if np.any(grid <= 0):
                    problems.append("beta_grid values must be positive")
            except (TypeError, ValueError) as exc:
                problems.append(f"beta_grid: {exc}")
        if need("delta_grid"):
            try:
                grid = _parse_int_grid(params["delta_grid"])
                if np.any(grid < 0):
                    problems.append("delta_grid values must be non-negative")
            except (TypeError, ValueError) as exc:
                problems.append(f"delta_grid: {exc}")
        if params["workers"] < 1:
            problems.append("workers must be at least 1")
    elif cmd == "route":
        if need("forces"):
            try:
                forces = _parse_forces(params["forces"])
                if any(f == 0 for f in forces):
                    problems.append("forces must be nonzero")
            except (TypeError, ValueError) as exc:
                problems.append(f"forces: {exc}")
        if need("beta") and not params["beta"] > 0:
            problems.append("beta must be positive")
        if need("delta") and params["delta"] < 0:
            problems.append("delta must be non-negative")
        if params["t_stop"] is not None and not params["t_stop"] > 0:
            problems.append("t_stop must be positive")
        if params["t_steps"] < 2:
            problems.append("t_steps must be at least 2")
        if params["workers"] < 1:
            problems.append("workers must be at least 1")
    elif cmd == "evolve":
        if params["initial"] not in ("sharp", "gaussian"):
            problems.append("initial must be sharp or gaussian")
        if params["left"] > 0:
            problems.append("left must be <= 0")
        if params["right"] <= params["left"]:
            problems.append("chain needs at least 2 sites (right > left)")
        if params["initial"] == "gaussian":
            if need("beta") and not params["beta"] > 0:
                problems.append("beta must be positive")
            if need("delta") and params["delta"] < 0:
                problems.append("delta must be non-negative")
            if params["delta"] is not None and params["delta"] >= 0:
                lo = params["center"] - params["delta"]
                hi = params["center"] + params["delta"]
                if lo < params["left"] or hi > params["right"]:
                    problems.append("gaussian support extends beyond the chain")
        if need("t_stop"):
            if params["t_stop"] < params["t_start"]:
                problems.append("t_stop must be >= t_start")
        if params["t_start"] < 0:
            problems.append("t_start must be non-negative")
        if params["t_steps"] < 2:
            problems.append("t_steps must be at least 2")
    return problems


def _plan_from_params(params: dict) -> TransferPlan:
    coupling = params["coupling"]
    spacing = params["spacing"]
    beta = params["beta"]
    delta = params["delta"]
    margin = params["margin"]
    if params["p"] is not None:
        return plan_transfer(params["p"], beta, delta, coupling, spacing, margin)
    force = params["force"]
    p = round(-coupling / (spacing * force))
    if margin is None:
        margin = 2 * delta
    chain = ChainSpec(
        coupling=coupling, force=force, left=-margin, right=p + margin, target=p, spacing=spacing
    )
    tilt = tilt_parameters(chain)
    return TransferPlan(
        gauss=TruncatedGaussianSpec(beta=beta, delta=delta, center=0),
        chain=chain,
        tilt=tilt,
        transfer_time=0.5 * tilt.bloch_period,
    )


def _write_trajectory(traj: Trajectory, outdir: Path, fmt: str) -> list[str]:
    if fmt == "csv":
        write_trajectory_csv(traj, outdir / "trajectory.csv")
        write_mean_position_csv(traj, outdir / "mean_position.csv")
        return ["trajectory.csv", "mean_position.csv"]
    payload = {
        "times": traj.times.tolist(),
        "sites": traj.sites.tolist(),
        "profiles": traj.profiles.tolist(),
        "mean_positions": traj.mean_positions.tolist(),
    }
    with open(outdir / "trajectory.json", "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ["trajectory.json"]


def _run_evolve(params: dict, outdir: Path, fmt: str):
    chain = ChainSpec(
        coupling=params["coupling"],
        force=params["force"],
        left=params["left"],
        right=params["right"],
        target=0,
        spacing=params["spacing"],
    )
    if params["initial"] == "sharp":
        state = sharp_state(chain)
    else:
        spec = TruncatedGaussianSpec(params["beta"], params["delta"], params["center"])
        state = gaussian_state(spec, chain)
    times = np.linspace(params["t_start"], params["t_stop"], params["t_steps"])
    traj = trajectory(state, build_tilted_hamiltonian(chain), times)
    outputs = _write_trajectory(traj, outdir, fmt)
    derived = {"chain": chain.to_dict(), "n_sites": chain.n_sites}
    results = {"final_mean_position": float(traj.mean_positions[-1])}
    return derived, results, outputs


def _plan_derived(plan: TransferPlan) -> dict:
    return {
        "chain": plan.chain.to_dict(),
        "gamma": float(plan.tilt.gamma),
        "bloch_period": float(plan.tilt.bloch_period),
        "transfer_time": float(plan.transfer_time),
    }


def _run_transfer(params: dict, outdir: Path, fmt: str):
    plan = _plan_from_params(params)
    psi0 = truncated_gaussian(plan.gauss, plan.chain)
    h = build_tilted_hamiltonian(plan.chain)
    times = np.linspace(0.0, plan.transfer_time, params["t_steps"])
    traj = trajectory(psi0, h, times)
    final = evolve(psi0, h, plan.transfer_time)
    window = params["window"] if params["window"] is not None else plan.gauss.delta
    success = success_probability(final, plan.chain.target, window)
    outputs = _write_trajectory(traj, outdir, fmt)
    results = {"success_probability": float(success), "window": int(window)}
    return _plan_derived(plan), results, outputs


def _run_sweep(params: dict, outdir: Path, fmt: str):
    betas = _parse_linspace_grid(params["beta_grid"])
    deltas = _parse_int_grid(params["delta_grid"])
    result = sweep_beta_delta(
        betas,
        deltas,
        params["ratio"],
        params["p"],
        params["coupling"],
        params["spacing"],
        params["workers"],
    )
    if fmt == "csv":
        write_sweep_csv(result, outdir / "sweep.csv")
        outputs = ["sweep.csv"]
    else:
        write_sweep_json(result, outdir / "sweep.json")
        outputs = ["sweep.json"]
    derived = {
        "force": float(params["coupling"] / params["ratio"]),
        "cells": int(betas.size * deltas.size),
    }
    best = int(np.nanargmax(result.success)) if not np.all(np.isnan(result.success)) else None
    results = {"failed_cells": len(result.errors)}
    if best is not None:
        i, j = divmod(best, deltas.size)
        results["best"] = {
            "beta": float(betas[i]),
            "delta": int(deltas[j]),
            "success_probability": float(result.success[i, j]),
        }
    return derived, results, outputs


def _run_route(params: dict, outdir: Path, fmt: str):
    forces = _parse_forces(params["forces"])
    lengths = None
    if params["t_stop"] is not None:
        lengths = np.linspace(0.0, params["t_stop"], params["t_steps"])
    result = route(
        params["beta"],
        params["delta"],
        forces,
        lengths,
        params["coupling"],
        params["spacing"],
        samples=params["t_steps"],
        workers=params["workers"],
    )
    if fmt == "csv":
        write_output_profile_csv(result, outdir / "output_profile.csv")
        write_route_mean_csv(result, outdir / "route_mean_position.csv")
        outputs = ["output_profile.csv", "route_mean_position.csv"]
    else:
        write_route_json(result, outdir / "route.json")
        outputs = ["route.json"]
    for k, leg in enumerate(result.legs, start=1):
        traj = Trajectory(leg.times, leg.sites, leg.profiles, leg.mean_positions)
        if fmt == "csv":
            name = f"trajectory_{k}.csv"
            write_trajectory_csv(traj, outdir / name)
        else:
            name = f"trajectory_{k}.json"
            payload = {
                "force": float(leg.force),
                "times": traj.times.tolist(),
                "sites": traj.sites.tolist(),
                "profiles": traj.profiles.tolist(),
                "mean_positions": traj.mean_positions.tolist(),
            }
            with open(outdir / name, "w", newline="") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        outputs.append(name)
    derived = {
        "legs": [
            {"force": float(leg.force), "target": int(leg.target)} for leg in result.legs
        ]
    }
    results = {
        "success_probabilities": [float(leg.success) for leg in result.legs],
    }
    return derived, results, outputs


def _run_polarized(params: dict, outdir: Path, fmt: str):
    plan = _plan_from_params(params)
    qubit_in = PolarizationQubit.from_json_pairs(params["qubit"])
    psi0 = truncated_gaussian(plan.gauss, plan.chain)
    pstate = attach_polarization(psi0, qubit_in)
    h = build_tilted_hamiltonian(plan.chain)
    times = np.linspace(0.0, plan.transfer_time, params["t_steps"])
    profiles = np.empty((times.size, pstate.n_sites))
    for i, t in enumerate(times):
        profiles[i] = evolve_polarized(pstate, h, float(t)).site_probabilities()
    traj = Trajectory(times, pstate.sites, profiles, profiles @ pstate.sites)
    final = evolve_polarized(pstate, h, plan.transfer_time)
    window = params["window"] if params["window"] is not None else plan.gauss.delta
    target = plan.chain.target
    qubit_out, capture = extract_qubit(final, target - window, target + window)
    outputs = _write_trajectory(traj, outdir, fmt)
    results = {
        "capture_probability": float(capture),
        "window": int(window),
        "qubit_in": qubit_in.to_json_pairs(),
        "qubit_out": qubit_out.to_json_pairs(),
        "bloch_in": [float(v) for v in bloch_vector(qubit_in)],
        "bloch_out": [float(v) for v in bloch_vector(qubit_out)],
    }
    return _plan_derived(plan), results, outputs


_RUNNERS = {
    "evolve": _run_evolve,
    "transfer": _run_transfer,
    "sweep": _run_sweep,
    "route": _run_route,
    "polarized": _run_polarized,
}


def run(config: RunConfig) -> Path:
    """Execute a validated config; returns the manifest path."""
    outdir = Path(config.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    derived, results, outputs = _RUNNERS[config.command](
        config.parameters, outdir, config.out_format
    )
    manifest = {
        "command": config.command,
        "parameters": config.parameters,
        "output": {"directory": str(config.out_dir), "format": config.out_format},
        "derived": derived,
        "results": results,
        "outputs": outputs,
        "version": __version__,
    }
    path = outdir / "manifest.json"
    with open(path, "w", newline="") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochqst",
        description="Wave-packet transfer on tilted tight-binding chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--coupling", type=float, default=argparse.SUPPRESS)
        p.add_argument("--spacing", type=float, default=argparse.SUPPRESS)
        p.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default: out)")
        p.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    p = sub.add_parser("evolve", help="propagate an initial state on a fixed chain")
    p.add_argument("--initial", choices=("sharp", "gaussian"), default=argparse.SUPPRESS)
    p.add_argument("--beta", type=float, default=argparse.SUPPRESS)
    p.add_argument("--delta", type=int, default=argparse.SUPPRESS)
    p.add_argument("--center", type=int, default=argparse.SUPPRESS)
    p.add_argument("--force", type=float, default=argparse.SUPPRESS)
    p.add_argument("--left", type=int, default=argparse.SUPPRESS)
    p.add_argument("--right", type=int, default=argparse.SUPPRESS)
    p.add_argument("--t-start", type=float, default=argparse.SUPPRESS)
    p.add_argument("--t-stop", type=float, default=argparse.SUPPRESS)
    p.add_argument("--t-steps", type=int, default=argparse.SUPPRESS)
    add_common(p)

    p = sub.add_parser("transfer", help="half-period transfer of a truncated Gaussian")
    p.add_argument("--p", type=int, default=argparse.SUPPRESS, help="target site; force is derived")
    p.add_argument("--force", type=float, default=argparse.SUPPRESS, help="tilt; target is derived")
    p.add_argument("--beta", type=float, default=argparse.SUPPRESS)
    p.add_argument("--delta", type=int, default=argparse.SUPPRESS)
    p.add_argument("--margin", type=int, default=argparse.SUPPRESS)
    p.add_argument("--window", type=int, default=argparse.SUPPRESS)
    p.add_argument("--t-steps", type=int, default=argparse.SUPPRESS)
    add_common(p)

    p = sub.add_parser("sweep", help="success probability over a (beta, delta) grid")
    p.add_argument("--ratio", type=float, default=argparse.SUPPRESS, help="coupling/force")
    p.add_argument("--p", type=int, default=argparse.SUPPRESS)
    p.add_argument("--beta-grid", default=argparse.SUPPRESS, help="start:stop:count")
    p.add_argument("--delta-grid", default=argparse.SUPPRESS, help="lo:hi[:step]")
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    add_common(p)

    p = sub.add_parser("route", help="send one packet shape to several targets")
    p.add_argument("--forces", default=argparse.SUPPRESS, help="comma-separated tilt values")
    p.add_argument("--beta", type=float, default=argparse.SUPPRESS)
    p.add_argument("--delta", type=int, default=argparse.SUPPRESS)
    p.add_argument("--t-stop", type=float, default=argparse.SUPPRESS)
    p.add_argument("--t-steps", type=int, default=argparse.SUPPRESS)
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    add_common(p)

    p = sub.add_parser("polarized", help="transfer with a polarization payload")
    p.add_argument("--p", type=int, default=argparse.SUPPRESS)
    p.add_argument("--force", type=float, default=argparse.SUPPRESS)
    p.add_argument("--beta", type=float, default=argparse.SUPPRESS)
    p.add_argument("--delta", type=int, default=argparse.SUPPRESS)
    p.add_argument("--margin", type=int, default=argparse.SUPPRESS)
    p.add_argument("--window", type=int, default=argparse.SUPPRESS)
    p.add_argument("--qubit", default=argparse.SUPPRESS, help='JSON [[re,im],[re,im]], (down, up)')
    p.add_argument("--t-steps", type=int, default=argparse.SUPPRESS)
    add_common(p)
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge config-file values with command-line flags (flags win)."""
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    out_dir = flags.pop("out", None)
    out_format = flags.pop("format", None)
    params: dict = {}
    file_dir = None
    file_format = None
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config must be a JSON object")
        file_command = raw.get("command")
        if file_command is not None and file_command != args.command:
            raise ValueError(
                f"config file is for {file_command!r} but {args.command!r} was invoked"
            )
        params.update(raw.get("parameters", {}))
        out_block = raw.get("output", {})
        file_dir = out_block.get("directory")
        file_format = out_block.get("format")
    params.update(flags)
    return RunConfig(
        command=args.command,
        parameters=params,
        out_dir=out_dir or file_dir or "out",
        out_format=out_format or file_format or "csv",
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        config = build_config(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    problems = validate(config)
    if problems:
        for item in problems:
            print(f"config error: {item}", file=sys.stderr)
        return 1
    try:
        manifest = run(config)
    except Exception as exc:  # noqa: BLE001 - surface as exit code 2
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2
    print(manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
