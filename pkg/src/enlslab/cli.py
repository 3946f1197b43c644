"""Batch front door: config parsing, experiment orchestration, report emission.

One INI-style config file drives every subcommand; values resolve in the
order CLI flag > ENLS_SECTION_KEY environment variable > config file >
built-in default, and each run writes a manifest.json echoing the full
resolved configuration next to a summary.json with the pass/fail verdict.
Exit codes: 0 all embedded threshold checks passed, 1 a check failed or the
computation errored (summary still written), 2 the configuration itself
could not be resolved.  Tabular outputs are CSV, summaries JSON, figures
PNG; column orders are listed in FORMATS.md.  Nothing written depends on
the clock or the environment, so a rerun with the same resolved config is
byte-identical on the CSV and JSON outputs.
"""

import argparse
import configparser
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .bounds import (
    CaseLabel,
    REGIME_EXAMPLE_KINDS,
    canonicalize_tuple,
    classify_case,
    regime_example,
    verify_delta4_bounds,
    verify_trilinear,
)
from .figures import (
    plot_bound_sweep,
    plot_decay_sweep,
    plot_energy_series,
    plot_gauge_check,
    plot_l2_drift,
    plot_trajectory,
    plot_trilinear_sweep,
)
from .gauge import apply_gauge, reduction_params, snap_alpha, solve_reduced_backward
from .grid import FieldSample, GridSpec, to_spectrum
from .multilinear import ddt_energy_check, energy_series
from .multiplier import MultiplierParams
from .planner import FEASIBILITY_THRESHOLD, decay_sweep, iteration_exponent, plan, sweep_datum
from .serialization import json_safe, read_field, rows_to_csv, write_json, write_trajectory
from .solver import SolverConfig, gaussian_bump, solve

ENV_PREFIX = "ENLS_"

REQUIRED = object()


class ConfigError(Exception):
    pass


def _float(raw):
    return float(raw)


def _int(raw):
    v = int(raw, 0) if isinstance(raw, str) else int(raw)
    return v


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _bool(raw):
    low = raw.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"cannot parse {raw!r} as a boolean")


def _str(raw):
    return raw.strip()


def _floats(raw):
    parts = raw.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _ints(raw):
    parts = raw.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return tuple(int(p) for p in parts)


@dataclass(frozen=True)
class Field:
    section: str
    key: str
    parse: object
    default: object = REQUIRED


_GRID = [Field("grid", "l", _float), Field("grid", "m", _int)]
_SOLVER = [
    Field("solver", "alpha", _float, 0.0),
    Field("solver", "beta", _float, 1.0),
    Field("solver", "dt", _float),
    Field("solver", "t_end", _float),
    Field("solver", "dealias", _bool, True),
    Field("solver", "snapshot_stride", _int, 1),
]
_INITIAL = [
    Field("initial", "kind", _str, "gaussian"),
    Field("initial", "amplitude", _float, 1.0),
    Field("initial", "sigma", _float, None),
    Field("initial", "center", _float, None),
    Field("initial", "n_min", _float, None),
    Field("initial", "n_max", _float, None),
    Field("initial", "path", _str, None),
    Field("initial", "band_limit", _int, None),
]
_RUN = [
    Field("run", "out", _str, None),
    Field("run", "seed", _int, 0),
    Field("run", "deterministic", _bool, False),
    Field("run", "jobs", _int, 1),
]

COMMAND_FIELDS = {
    "simulate": _GRID
    + _SOLVER
    + _INITIAL
    + [Field("simulate", "l2_tol", _float, 1e-8)],
    "energies": _GRID
    + _SOLVER
    + _INITIAL
    + [
        Field("multiplier", "n", _float),
        Field("multiplier", "s", _float),
        Field("energies", "ddt_check", _bool, False),
        Field("energies", "ddt_tol", _float, 1e-2),
    ],
    "sweep-decay": _GRID
    + [
        Field("solver", "alpha", _float, 0.0),
        Field("solver", "beta", _float, 1.0),
        Field("solver", "dt", _float),
        Field("solver", "dealias", _bool, True),
        Field("solver", "snapshot_stride", _int, 1),
        Field("multiplier", "s", _float),
        Field("sweep", "n_values", _floats),
        Field("sweep", "delta", _float, 1.0),
        Field("sweep", "n_min", _float),
        Field("sweep", "n_max", _float),
        Field("sweep", "amplitude", _float, 1.5),
        Field("sweep", "slope_max", _float, -1.25),
    ],
    "verify-bounds": [
        Field("multiplier", "s", _float),
        Field("bounds", "n_values", _floats),
        Field("bounds", "num_samples", _int),
        Field("bounds", "stability_max", _float, 2.0),
        Field("bounds", "check_fixtures", _bool, True),
    ],
    "verify-trilinear": _GRID
    + [
        Field("trilinear", "s", _float, -0.125),
        Field("trilinear", "b", _float, 7.0 / 12.0 + 0.01),
        Field("trilinear", "b_prime", _float, -1.0 / 24.0 - 0.01),
        Field("trilinear", "num_samples", _int, 8),
        Field("trilinear", "caps", _ints),
        Field("trilinear", "growth_max", _float, 1.5),
        Field("trilinear", "companion_s", _float, None),
        Field("trilinear", "companion_min", _float, 2.0),
    ],
    "gauge-check": _GRID
    + [
        Field("solver", "beta", _float, 1.0),
        Field("solver", "dt", _float),
        Field("solver", "t_end", _float),
        Field("solver", "snapshot_stride", _int, 1),
        Field("initial", "amplitude", _float, 0.4),
        Field("initial", "sigma", _float, None),
        Field("gauge", "alpha", _float, 1.0),
        Field("gauge", "band_limit", _int, None),
        Field("gauge", "tol", _float, 1e-5),
    ],
    "plan": [
        Field("plan", "t", _float),
        Field("plan", "s", _str),
        Field("plan", "c", _float, 1.0),
        Field("plan", "local_step", _float, 1.0),
    ],
}

# classifier fixtures and the case each must land in (the names follow the
# realized geometry of the bound regimes; see the bounds module)
FIXTURE_CASES = {
    "pair_cancel_low": CaseLabel.CASE2,
    "pair_cancel_split": CaseLabel.CASE2,
    "balanced": CaseLabel.CASE4,
    "single_small": CaseLabel.CASE1,
    "double_pair_cancel": CaseLabel.CASE3,
}


@dataclass
class RunConfig:
    """Fully resolved configuration for one command invocation."""

    command: str
    resolved: dict
    out: str
    seed: int
    deterministic: bool
    jobs: int
    config_path: str
    env_overrides: dict

    def get(self, section, key):
        return self.resolved[section][key]


def _read_config_file(path):
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as f:
            cp.read_file(f, source=path)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    except configparser.Error as e:
        raise ConfigError(f"config parse error: {e}")
    return {s: dict(cp.items(s)) for s in cp.sections()}


def resolve_config(command, config_path=None, env=None, overrides=None):
    """Layer defaults, config file, and environment into a RunConfig.

    overrides maps (section, key) to already-typed values (the CLI flags);
    missing required fields raise ConfigError naming the field.
    """
    env = dict(os.environ if env is None else env)
    raw = _read_config_file(config_path) if config_path else {}
    env_overrides = {k: v for k, v in env.items() if k.startswith(ENV_PREFIX)}
    fields = COMMAND_FIELDS[command] + _RUN
    resolved = {}
    for fld in fields:
        env_key = f"{ENV_PREFIX}{fld.section.upper()}_{fld.key.upper()}"
        if env_key in env:
            raw_val, have = env[env_key], True
        elif fld.section in raw and fld.key in raw[fld.section]:
            raw_val, have = raw[fld.section][fld.key], True
        else:
            raw_val, have = None, False
        if have:
            try:
                val = fld.parse(raw_val)
            except ValueError as e:
                raise ConfigError(f"[{fld.section}] {fld.key}: {e}")
        elif fld.default is REQUIRED:
            raise ConfigError(
                f"missing required config field [{fld.section}] {fld.key} "
                f"for command {command}"
            )
        else:
            val = fld.default
        resolved.setdefault(fld.section, {})[fld.key] = val
    for (section, key), val in (overrides or {}).items():
        resolved.setdefault(section, {})[key] = val
    run = resolved["run"]
    out = run["out"] or f"enlslab-{command}"
    run["out"] = out
    return RunConfig(
        command=command,
        resolved=resolved,
        out=out,
        seed=run["seed"],
        deterministic=run["deterministic"],
        jobs=max(1, run["jobs"]),
        config_path=config_path,
        env_overrides=env_overrides,
    )


def _manifest(rc):
    return {
        "command": rc.command,
        "version": __version__,
        "config_file": rc.config_path,
        "env_overrides": rc.env_overrides,
        "resolved": rc.resolved,
    }


def _initial_datum(rc, grid):
    kind = rc.get("initial", "kind")
    amp = rc.get("initial", "amplitude")
    if kind == "gaussian":
        sigma = rc.get("initial", "sigma")
        center = rc.get("initial", "center")
        u = gaussian_bump(
            grid,
            amplitude=amp,
            sigma=grid.L / 8.0 if sigma is None else sigma,
            center=grid.L / 2.0 if center is None else center,
        )
    elif kind == "sweep":
        n_min = rc.get("initial", "n_min")
        n_max = rc.get("initial", "n_max")
        if n_min is None or n_max is None:
            raise ConfigError("initial kind 'sweep' needs [initial] n_min and n_max")
        u = sweep_datum(grid, n_min, n_max, amplitude=amp)
    elif kind == "file":
        path = rc.get("initial", "path")
        if path is None:
            raise ConfigError("initial kind 'file' needs [initial] path")
        u = read_field(path)
        if u.grid != grid:
            raise ConfigError(
                f"initial file grid (L={u.grid.L:g}, M={u.grid.M}) does not "
                f"match [grid] (L={grid.L:g}, M={grid.M})"
            )
    else:
        raise ConfigError(f"unknown initial kind {kind!r}")
    band_limit = rc.resolved.get("initial", {}).get("band_limit")
    if band_limit is not None:
        u = _band_clip(u, band_limit)
    return u


def _band_clip(u, kmax):
    sp = to_spectrum(u)
    coeffs = sp.coeffs.copy()
    coeffs[np.abs(u.grid.k) > kmax] = 0.0
    vals = np.fft.ifft(coeffs) / u.grid.dx
    return FieldSample(u.grid, vals, u.t)


def _solver_config(rc, t_end=None):
    sec = rc.resolved["solver"]
    return SolverConfig(
        alpha=sec.get("alpha", 0.0),
        beta=sec["beta"],
        dt=sec["dt"],
        t_end=sec["t_end"] if t_end is None else t_end,
        dealias=sec.get("dealias", True),
        snapshot_stride=sec.get("snapshot_stride", 1),
    )


def cmd_simulate(rc):
    grid = GridSpec(rc.get("grid", "l"), rc.get("grid", "m"))
    u0 = _initial_datum(rc, grid)
    traj = solve(u0, _solver_config(rc))
    write_trajectory(os.path.join(rc.out, "trajectory"), traj)
    plot_trajectory(traj, os.path.join(rc.out, "trajectory.png"))
    plot_l2_drift(traj.times, traj.l2_norms, os.path.join(rc.out, "l2_drift.png"))
    norms = np.array(traj.l2_norms)
    drift = float(np.max(np.abs(norms - norms[0])) / norms[0])
    tol = rc.get("simulate", "l2_tol")
    summary = {
        "rel_l2_drift": drift,
        "l2_tol": tol,
        "num_snapshots": len(traj.snapshots),
        "final_t": float(traj.snapshots[-1].t),
        "trajectory_dir": "trajectory",
    }
    return summary, drift <= tol


def cmd_energies(rc):
    grid = GridSpec(rc.get("grid", "l"), rc.get("grid", "m"))
    u0 = _initial_datum(rc, grid)
    cfg = _solver_config(rc)
    p = MultiplierParams(rc.get("multiplier", "n"), rc.get("multiplier", "s"))
    traj = solve(u0, cfg)
    reports = energy_series(traj, p, beta=cfg.beta)
    rows_to_csv(
        os.path.join(rc.out, "energies.csv"),
        ("t", "E1", "Lambda4", "E2", "drift_E2"),
        [(r.t, r.E1, r.Lambda4, r.E2, r.drift_E2) for r in reports],
    )
    plot_energy_series(reports, os.path.join(rc.out, "energies.png"))
    summary = {
        "N": p.N,
        "s": p.s,
        "E1_initial": reports[0].E1,
        "E2_initial": reports[0].E2,
        "max_drift_E2": max(r.drift_E2 for r in reports),
    }
    passed = True
    if rc.get("energies", "ddt_check"):
        rep = ddt_energy_check(traj, p, beta=cfg.beta)
        tol = rc.get("energies", "ddt_tol")
        summary.update(
            {
                "c_fit": rep.c_fit,
                "max_rel_mismatch": rep.max_rel_mismatch,
                "num_held_out": rep.num_held_out,
                "ddt_tol": tol,
            }
        )
        passed = rep.max_rel_mismatch <= tol and not rep.degenerate
    return summary, passed


def cmd_sweep_decay(rc):
    grid = GridSpec(rc.get("grid", "l"), rc.get("grid", "m"))
    u0 = sweep_datum(
        grid,
        rc.get("sweep", "n_min"),
        rc.get("sweep", "n_max"),
        amplitude=rc.get("sweep", "amplitude"),
    )
    delta = rc.get("sweep", "delta")
    cfg = _solver_config(rc, t_end=delta)
    res = decay_sweep(u0, rc.get("sweep", "n_values"), rc.get("multiplier", "s"), cfg, delta)
    rows_to_csv(
        os.path.join(rc.out, "sweep_decay.csv"),
        ("N", "drift"),
        list(zip(res.N_values, res.drift_values)),
    )
    plot_decay_sweep(res, os.path.join(rc.out, "sweep_decay.png"))
    slope_max = rc.get("sweep", "slope_max")
    summary = {
        "N_values": list(res.N_values),
        "drift_values": list(res.drift_values),
        "slope": res.fitted_slope,
        "residual": res.fit_residual,
        "excluded": list(res.excluded),
        "floors": list(res.floors),
        "slope_max": slope_max,
    }
    passed = math.isfinite(res.fitted_slope) and res.fitted_slope <= slope_max
    return summary, passed


def cmd_verify_bounds(rc):
    s = rc.get("multiplier", "s")
    n_values = rc.get("bounds", "n_values")
    num = rc.get("bounds", "num_samples")
    csv_path = os.path.join(rc.out, "bounds.csv")
    header = ("N", "case", "samples", "max_ratio", "min_ratio")
    if num == 0:
        rows_to_csv(csv_path, header, [])
        return {"num_samples": 0, "cases": {}, "stability": {}}, True

    def one(N):
        return verify_delta4_bounds(MultiplierParams(N, s), num, rng_seed=rc.seed)

    if rc.jobs > 1:
        with ThreadPoolExecutor(max_workers=rc.jobs) as ex:
            reports = dict(zip(n_values, ex.map(one, n_values)))
    else:
        reports = {N: one(N) for N in n_values}
    rows = []
    for N in n_values:
        for name, rep in sorted(reports[N].items()):
            rows.append((float(N), name, rep.samples, rep.max_ratio, rep.min_ratio))
    rows_to_csv(csv_path, header, rows)
    plot_bound_sweep(reports, os.path.join(rc.out, "bounds.png"))
    lo, hi = min(n_values), max(n_values)
    stability = {
        name: reports[hi][name].max_ratio / reports[lo][name].max_ratio
        for name in reports[lo]
    }
    stability_max = rc.get("bounds", "stability_max")
    passed = all(r <= stability_max for r in stability.values())
    fixtures = {}
    if rc.get("bounds", "check_fixtures"):
        for kind in REGIME_EXAMPLE_KINDS:
            got = {}
            for N in n_values:
                t = canonicalize_tuple(regime_example(kind, 8.0 * N))
                got[float(N)] = classify_case(t, N).name
            fixtures[kind] = got
            ok = all(v == FIXTURE_CASES[kind].name for v in got.values())
            passed = passed and ok
    summary = {
        "num_samples": num,
        "stability": stability,
        "stability_max": stability_max,
        "fixtures": fixtures,
        "cases": {
            name: {str(float(N)): reports[N][name].max_ratio for N in n_values}
            for name in reports[lo]
        },
    }
    return summary, passed


def cmd_verify_trilinear(rc):
    grid = GridSpec(rc.get("grid", "l"), rc.get("grid", "m"))
    sec = rc.resolved["trilinear"]
    caps = sec["caps"]
    if len(caps) < 2:
        raise ConfigError("[trilinear] caps needs at least two bandwidths")

    def sweep(s):
        def one(cap):
            return verify_trilinear(
                grid, s, sec["b"], sec["b_prime"], sec["num_samples"],
                rng_seed=rc.seed, kx_cap=cap,
            )

        if rc.jobs > 1:
            with ThreadPoolExecutor(max_workers=rc.jobs) as ex:
                return list(ex.map(one, caps))
        return [one(cap) for cap in caps]

    primary = sweep(sec["s"])
    rows = [
        (r.s, r.kx_cap, r.sup_ratio, r.sup_ratio_directed, r.samples, r.skipped)
        for r in primary
    ]
    sups = [r.sup_ratio_directed for r in primary]
    growth = [b / a for a, b in zip(sups, sups[1:])]
    passed = all(g <= sec["growth_max"] for g in growth)
    summary = {
        "s": sec["s"],
        "caps": list(caps),
        "sup_ratio_directed": sups,
        "per_doubling_growth": growth,
        "growth_max": sec["growth_max"],
    }
    if sec["companion_s"] is not None:
        comp = sweep(sec["companion_s"])
        rows += [
            (r.s, r.kx_cap, r.sup_ratio, r.sup_ratio_directed, r.samples, r.skipped)
            for r in comp
        ]
        csups = [r.sup_ratio_directed for r in comp]
        cumulative = csups[-1] / csups[0]
        summary.update(
            {
                "companion_s": sec["companion_s"],
                "companion_cumulative_growth": cumulative,
                "companion_min": sec["companion_min"],
            }
        )
        passed = passed and cumulative >= sec["companion_min"]
    rows_to_csv(
        os.path.join(rc.out, "trilinear.csv"),
        ("s", "kx_cap", "sup_ratio", "sup_ratio_directed", "samples", "skipped"),
        rows,
    )
    plot_trilinear_sweep(primary, os.path.join(rc.out, "trilinear.png"))
    return summary, passed


def cmd_gauge_check(rc):
    grid = GridSpec(rc.get("grid", "l"), rc.get("grid", "m"))
    requested = rc.get("gauge", "alpha")
    alpha = snap_alpha(requested, grid)
    p = reduction_params(alpha)
    sigma = rc.get("initial", "sigma")
    v0 = gaussian_bump(
        grid,
        amplitude=rc.get("initial", "amplitude"),
        sigma=grid.L / 8.0 if sigma is None else sigma,
    )
    band_limit = rc.get("gauge", "band_limit")
    v0 = _band_clip(v0, grid.M // 5 if band_limit is None else band_limit)
    u0 = FieldSample(grid, v0.values * np.exp(1j * p.d2 * grid.x))
    sec = rc.resolved["solver"]
    cfg_v = SolverConfig(
        alpha=0.0, beta=sec["beta"], dt=sec["dt"], t_end=sec["t_end"],
        snapshot_stride=sec["snapshot_stride"],
    )
    cfg_u = SolverConfig(
        alpha=alpha, beta=sec["beta"], dt=sec["dt"], t_end=sec["t_end"],
        snapshot_stride=sec["snapshot_stride"],
    )
    gauged = apply_gauge(solve_reduced_backward(v0, cfg_v), p)
    direct = solve(u0, cfg_u)
    if not np.allclose(gauged.times, direct.times, rtol=0, atol=1e-12):
        raise RuntimeError("gauged and direct snapshot times disagree")
    scale = u0.l2_norm()
    times, errs = [], []
    for g, d in zip(gauged.snapshots, direct.snapshots):
        err = float(np.sqrt(grid.dx * np.sum(np.abs(g.values - d.values) ** 2)) / scale)
        times.append(float(g.t))
        errs.append(err)
    rows_to_csv(
        os.path.join(rc.out, "gauge_check.csv"),
        ("t", "rel_l2_discrepancy"),
        list(zip(times, errs)),
    )
    plot_gauge_check(times, errs, os.path.join(rc.out, "gauge_check.png"))
    tol = rc.get("gauge", "tol")
    summary = {
        "alpha_requested": requested,
        "alpha_effective": alpha,
        "max_rel_discrepancy": max(errs),
        "tol": tol,
    }
    return summary, max(errs) <= tol


def cmd_plan(rc):
    s_raw = rc.get("plan", "s")
    try:
        s_frac = Fraction(s_raw)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"[plan] s: {e}")
    exponent = iteration_exponent(s_frac)
    gp = plan(rc.get("plan", "t"), s_frac, rc.get("plan", "c"), rc.get("plan", "local_step"))
    summary = {
        "T": gp.T,
        "s": str(s_frac),
        "s_float": gp.s,
        "exponent": str(exponent),
        "exponent_float": gp.exponent,
        "feasibility_threshold": str(FEASIBILITY_THRESHOLD),
        "feasible": gp.feasible,
        "N": gp.N,
        "lambda": gp.lam,
        "local_step": gp.local_step,
        "num_iterations": gp.num_iterations,
    }
    return summary, gp.feasible


COMMANDS = {
    "simulate": cmd_simulate,
    "energies": cmd_energies,
    "sweep-decay": cmd_sweep_decay,
    "verify-bounds": cmd_verify_bounds,
    "verify-trilinear": cmd_verify_trilinear,
    "gauge-check": cmd_gauge_check,
    "plan": cmd_plan,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI config file")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--seed", type=int, help="RNG seed for sampled verifications")
    common.add_argument(
        "--deterministic",
        action="store_true",
        help="pin the run for byte-identical rerun outputs",
    )
    common.add_argument(
        "--dry-run",
        action="store_true",
        help="print the resolved configuration and write nothing",
    )
    parser = argparse.ArgumentParser(
        prog="enlslab",
        description="Batch experiments on modified-energy conservation for "
        "cubic NLS with third-order dispersion.",
    )
    parser.add_argument("--version", action="version", version=f"enlslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "simulate": "solve one trajectory and export snapshots",
        "energies": "modified-energy series along a trajectory",
        "sweep-decay": "almost-conservation decay sweep over the cutoff N",
        "verify-bounds": "sampled pointwise multiplier-bound verification",
        "verify-trilinear": "sampled trilinear restriction-norm diagnostics",
        "gauge-check": "direct vs gauge-reduced solve discrepancy",
        "plan": "window bookkeeping for a global-extension target",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.out is not None:
        overrides[("run", "out")] = args.out
    if args.seed is not None:
        overrides[("run", "seed")] = args.seed
    if args.deterministic:
        overrides[("run", "deterministic")] = True
    try:
        rc = resolve_config(args.command, args.config, overrides=overrides)
    except ConfigError as e:
        print(f"enlslab: {e}", file=sys.stderr)
        return 2
    if args.dry_run:
        print(json.dumps(json_safe(_manifest(rc)), indent=2, sort_keys=True))
        return 0
    os.makedirs(rc.out, exist_ok=True)
    write_json(os.path.join(rc.out, "manifest.json"), _manifest(rc))
    try:
        summary, passed = COMMANDS[args.command](rc)
    except ConfigError as e:
        print(f"enlslab: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as e:
        write_json(
            os.path.join(rc.out, "summary.json"),
            {"command": args.command, "passed": False, "error": str(e)},
        )
        print(f"enlslab {args.command}: {e}", file=sys.stderr)
        return 1
    summary = {"command": args.command, "passed": bool(passed), **summary}
    write_json(os.path.join(rc.out, "summary.json"), summary)
    if not passed:
        print(f"enlslab {args.command}: threshold check failed", file=sys.stderr)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
