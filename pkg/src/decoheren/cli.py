"""Command-line interface: config ingestion, sweeps, delimited output.

    decoheren <rates|observe|moments|sample|oracle-check> --config run.toml
        [--sweep name=v1,v2,...] [--output path] [--json] [--seed n]
        [--eta-max n] [--runs n]

Config files are TOML, or JSON with the same structure, carrying a top
level schema_version plus an [experiment] table and exactly one of
[environment] or [params].  The README documents the schema, the unit
conventions, and the sweep whitelist.  Exit codes: 0 success, 2 config
or usage error, 3 quadrature non-convergence, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from .evolution import full_rho, left_counts, partial_trace, reduced_element
from .kernels import kernel_D, kernel_D_positions, kernel_U, kernel_U_positions
from .model import (
    DecoherenceParams,
    EnvironmentSpec,
    ExperimentSpec,
    Noon,
    Product,
    Segment,
    SpecError,
    Tabulated,
    Yukawa,
)
from .observables import (
    PortProjector,
    counting_distribution,
    expect_O_plus,
    moment,
    moment_coefficients,
    noon_fringe,
    sample_runs,
    visibility_phase,
)
from .rates import ConvergenceError, QuadratureSettings, rates_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_ORACLE = 4

SCHEMA_VERSION = 1

# sweep name -> which config section it rewrites
SWEEP_WHITELIST = {
    "n_atoms": "experiment",
    "phi": "experiment",
    "delta_x": "experiment",
    "s": "params",
    "gamma": "params",
    "tau": "params",
    "coupling": "environment",
    "mediator_mass": "environment",
    "probe_mass": "environment",
    "temperature": "environment",
    "number_density": "environment",
    "interaction_time": "environment",
    "wind_x": "environment",
    "wind_y": "environment",
    "wind_z": "environment",
}


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentSpec
    environment: Optional[EnvironmentSpec]
    params_override: Optional[DecoherenceParams]
    quadrature: QuadratureSettings
    sweep: Optional[Tuple[str, Tuple[float, ...]]]
    out_format: str  # "csv" | "json"
    out_path: Optional[str]
    seed: int


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def _amplitude(raw: Any, where: str) -> complex:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
    ):
        return complex(raw[0], raw[1])
    raise ConfigError(f"{where} must be a number or a [re, im] pair, got {raw!r}")


def _number(table: Dict[str, Any], key: str, where: str, default=None) -> float:
    if key not in table:
        if default is not None:
            return default
        raise ConfigError(f"missing {where}.{key}")
    val = table[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {val!r}")
    return float(val)


def _parse_prep(table: Optional[Dict[str, Any]]):
    if table is None:
        return Product(2 ** -0.5, 2 ** -0.5)
    kind = table.get("type")
    if kind == "noon":
        return Noon()
    if kind == "product":
        a_l = _amplitude(table.get("a_left", 2 ** -0.5), "experiment.prep.a_left")
        a_r = _amplitude(table.get("a_right", 2 ** -0.5), "experiment.prep.a_right")
        return Product(a_l, a_r)
    raise ConfigError(f"experiment.prep.type must be 'product' or 'noon', got {kind!r}")


def _parse_experiment(table: Dict[str, Any]) -> ExperimentSpec:
    n_atoms = table.get("n_atoms")
    if isinstance(n_atoms, bool) or not isinstance(n_atoms, int):
        raise ConfigError(f"experiment.n_atoms must be an integer, got {n_atoms!r}")
    raw_segments = table.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        raise ConfigError("experiment.segments must be a non-empty list of [duration, delta_x]")
    segments = []
    for i, pair in enumerate(raw_segments):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"experiment.segments[{i}] must be [duration, delta_x]")
        segments.append(Segment(float(pair[0]), float(pair[1])))
    phi = _number(table, "dynamical_phase", "experiment", default=0.0)
    return ExperimentSpec(
        n_atoms=n_atoms,
        separation_profile=tuple(segments),
        dynamical_phase=phi,
        prep=_parse_prep(table.get("prep")),
    )


def _parse_potential(table: Dict[str, Any]):
    kind = table.get("type")
    if kind == "yukawa":
        return Yukawa(
            coupling=_number(table, "coupling", "environment.potential"),
            mediator_mass=_number(table, "mediator_mass", "environment.potential"),
        )
    if kind == "tabulated":
        qs = table.get("q_samples")
        vs = table.get("v_samples")
        if not isinstance(qs, list) or not isinstance(vs, list):
            raise ConfigError("tabulated potential needs q_samples and v_samples lists")
        return Tabulated(tuple(float(q) for q in qs), tuple(float(v) for v in vs))
    raise ConfigError(f"environment.potential.type must be 'yukawa' or 'tabulated', got {kind!r}")


def _parse_environment(table: Dict[str, Any]) -> EnvironmentSpec:
    wind = table.get("wind_velocity", [0.0, 0.0, 0.0])
    if not isinstance(wind, list) or len(wind) != 3:
        raise ConfigError("environment.wind_velocity must be a 3-element list")
    pot = table.get("potential")
    if not isinstance(pot, dict):
        raise ConfigError("environment.potential table is required")
    return EnvironmentSpec(
        probe_mass=_number(table, "probe_mass", "environment"),
        temperature=_number(table, "temperature", "environment"),
        number_density=_number(table, "number_density", "environment"),
        wind_velocity=tuple(float(x) for x in wind),
        potential=_parse_potential(pot),
        interaction_time=_number(table, "interaction_time", "environment", default=0.0),
    )


def _parse_quadrature(table: Optional[Dict[str, Any]]) -> QuadratureSettings:
    if table is None:
        return QuadratureSettings()
    known = {"speed_nodes", "angle_nodes", "pv_exclusion", "target_rel_error"}
    extra = set(table) - known
    if extra:
        raise ConfigError(f"unknown quadrature keys: {sorted(extra)}")
    kwargs = {}
    for key in known & set(table):
        kwargs[key] = int(table[key]) if key.endswith("nodes") else float(table[key])
    return QuadratureSettings(**kwargs)


def _parse_sweep(table: Optional[Dict[str, Any]]):
    if table is None:
        return None
    name = table.get("parameter")
    values = table.get("values")
    if name not in SWEEP_WHITELIST:
        raise ConfigError(
            f"sweep parameter {name!r} is not in the whitelist "
            f"{sorted(SWEEP_WHITELIST)}"
        )
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values must be a non-empty list")
    return name, tuple(float(v) for v in values)


def load_config(path: str) -> RunConfig:
    """Parse a TOML or JSON run configuration into a validated RunConfig."""
    try:
        with open(path, "rb") as fh:
            if path.endswith(".json"):
                data = json.load(fh)
            else:
                data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table/object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"config schema_version must be {SCHEMA_VERSION}, got "
            f"{data.get('schema_version')!r}"
        )
    if "experiment" not in data:
        raise ConfigError("missing [experiment] section")
    experiment = _parse_experiment(data["experiment"])
    has_env = "environment" in data
    has_par = "params" in data
    if has_env == has_par:
        raise ConfigError("exactly one of [environment] or [params] must be present")
    environment = _parse_environment(data["environment"]) if has_env else None
    params_override = None
    if has_par:
        p = data["params"]
        params_override = DecoherenceParams(
            s=_number(p, "s", "params", default=0.0),
            gamma=_number(p, "gamma", "params", default=0.0),
            tau=_number(p, "tau", "params", default=0.0),
            phi=experiment.dynamical_phase,
        )
    out = data.get("output", {})
    out_format = out.get("format", "csv")
    if out_format not in ("csv", "json"):
        raise ConfigError(f"output.format must be 'csv' or 'json', got {out_format!r}")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    return RunConfig(
        experiment=experiment,
        environment=environment,
        params_override=params_override,
        quadrature=_parse_quadrature(data.get("quadrature")),
        sweep=_parse_sweep(data.get("sweep")),
        out_format=out_format,
        out_path=out.get("path"),
        seed=seed,
    )


# ---------------------------------------------------------------------------
# sweep application
# ---------------------------------------------------------------------------


def apply_sweep_value(config: RunConfig, name: str, value: float) -> RunConfig:
    """Return a copy of config with one whitelisted parameter replaced."""
    section = SWEEP_WHITELIST.get(name)
    if section is None:
        raise ConfigError(f"sweep parameter {name!r} is not in the whitelist")
    exp = config.experiment
    if section == "experiment":
        if name == "n_atoms":
            n = int(value)
            if n != value:
                raise ConfigError(f"n_atoms sweep values must be integers, got {value!r}")
            exp = replace(exp, n_atoms=n)
        elif name == "phi":
            exp = replace(exp, dynamical_phase=float(value))
        else:  # delta_x rewrites every segment
            profile = tuple(
                Segment(seg.duration, float(value)) for seg in exp.separation_profile
            )
            exp = replace(exp, separation_profile=profile)
        params = config.params_override
        if params is not None and name == "phi":
            params = replace(params, phi=float(value))
        return replace(config, experiment=exp, params_override=params)
    if section == "params":
        if config.params_override is None:
            raise ConfigError(f"sweeping {name!r} requires a [params] config")
        return replace(
            config, params_override=replace(config.params_override, **{name: float(value)})
        )
    if config.environment is None:
        raise ConfigError(f"sweeping {name!r} requires an [environment] config")
    env = config.environment
    if name in ("coupling", "mediator_mass"):
        if not isinstance(env.potential, Yukawa):
            raise ConfigError(f"sweeping {name!r} requires a yukawa potential")
        env = replace(env, potential=replace(env.potential, **{name: float(value)}))
    elif name.startswith("wind_"):
        idx = "xyz".index(name[-1])
        wind = list(env.wind_velocity)
        wind[idx] = float(value)
        env = replace(env, wind_velocity=tuple(wind))
    else:
        env = replace(env, **{name: float(value)})
    return replace(config, environment=env)


# ---------------------------------------------------------------------------
# subcommands; each returns a list of flat row dicts per sweep point
# ---------------------------------------------------------------------------


def resolve_params(config: RunConfig) -> DecoherenceParams:
    """The decoherence parameters a config denotes, integrating if needed."""
    if config.params_override is not None:
        return config.params_override
    report = rates_report(
        config.environment,
        config.experiment.separation_profile,
        config.experiment.dynamical_phase,
        config.quadrature,
    )
    return report.params


def cmd_rates(config: RunConfig) -> List[Dict[str, Any]]:
    if config.environment is None:
        raise ConfigError("rates requires an [environment] config")
    report = rates_report(
        config.environment,
        config.experiment.separation_profile,
        config.experiment.dynamical_phase,
        config.quadrature,
    )
    p = report.params
    return [
        {
            "s": p.s,
            "gamma": p.gamma,
            "tau": p.tau,
            "phi": p.phi,
            "s_error": report.s_error,
            "gamma_error": report.gamma_error,
            "tau_error": report.tau_error,
        }
    ]


def cmd_observe(config: RunConfig) -> List[Dict[str, Any]]:
    spec = config.experiment
    params = resolve_params(config)
    row: Dict[str, Any] = {"n_atoms": spec.n_atoms}
    if isinstance(spec.prep, Noon):
        from .evolution import noon_coherence

        dist = counting_distribution(spec, params)
        ks = np.arange(spec.n_atoms + 1, dtype=float)
        mean = float(ks @ dist)
        row["mean"] = mean
        row["variance"] = float(ks * ks @ dist) - mean * mean
        if spec.n_atoms == 1:
            corner = noon_coherence(1, params)
            vis, phase = 2.0 * abs(corner), math.atan2(corner.imag, corner.real)
        else:
            vis, phase = 0.0, 0.0  # one-body coherence is exactly zero
        row["visibility"] = vis
        row["phase"] = phase
        row["noon_fringe"] = noon_fringe(spec.n_atoms, params)
    else:
        row["mean"] = expect_O_plus(spec, params)
        row["variance"] = moment(2, spec, params) - moment(1, spec, params) ** 2
        vis, phase = visibility_phase(spec, params)
        row["visibility"] = vis
        row["phase"] = phase
    return [row]


def _binomial_central(raw: Sequence[float]) -> List[float]:
    # central moment eta from raw moments 1..eta with raw_0 = 1
    mean = raw[0]
    out = []
    for eta in range(1, len(raw) + 1):
        total = 0.0
        for k in range(eta + 1):
            rk = 1.0 if k == 0 else raw[k - 1]
            total += math.comb(eta, k) * rk * (-mean) ** (eta - k)
        out.append(total)
    return out


def cmd_moments(config: RunConfig, eta_max: int) -> List[Dict[str, Any]]:
    if eta_max < 1:
        raise ConfigError(f"--eta-max must be >= 1, got {eta_max}")
    spec = config.experiment
    params = resolve_params(config)
    if isinstance(spec.prep, Noon):
        dist = counting_distribution(spec, params)
        ks = np.arange(spec.n_atoms + 1, dtype=float)
        raw = [float(ks ** eta @ dist) for eta in range(1, eta_max + 1)]
    else:
        raw = [moment(eta, spec, params) for eta in range(1, eta_max + 1)]
    central = _binomial_central(raw)
    rows = []
    for eta in range(1, eta_max + 1):
        coeffs = moment_coefficients(eta).coeffs
        n = spec.n_atoms
        sum_rule_ok = (
            sum(c * math.perm(n, a + 1) for a, c in enumerate(coeffs) if a + 1 <= n)
            == n ** eta
        )
        rows.append(
            {
                "eta": eta,
                "raw": raw[eta - 1],
                "central": central[eta - 1],
                "coefficients": " ".join(str(c) for c in coeffs),
                "sum_rule_ok": sum_rule_ok,
            }
        )
    return rows


def cmd_sample(config: RunConfig, runs: int, seed: int) -> List[Dict[str, Any]]:
    spec = config.experiment
    params = resolve_params(config)
    dist = counting_distribution(spec, params)
    draws, report = sample_runs(dist, runs, seed)
    counts = np.bincount(draws, minlength=spec.n_atoms + 1)
    rows = []
    for k in range(spec.n_atoms + 1):
        rows.append(
            {
                "n_atoms": spec.n_atoms,
                "runs": runs,
                "seed": seed,
                "k": k,
                "probability": float(dist[k]),
                "count": int(counts[k]),
                "frequency": int(counts[k]) / runs,
                "mean": report.mean,
                "variance": report.variance,
                "mean_stderr": report.mean_stderr,
                "variance_stderr": report.variance_stderr,
            }
        )
    return rows


# --- oracle-check -----------------------------------------------------------

ORACLE_ABS_TOL = 1e-12
ORACLE_REL_TOL = 1e-10
_THETA_GRID = (0.0, 0.3, 1.1, 2.2, math.pi, 4.0, 5.9)


def _check_kernels(spec: ExperimentSpec) -> Dict[str, Any]:
    n_atoms = spec.n_atoms
    seps = sorted({seg.delta_x for seg in spec.separation_profile if seg.delta_x > 0})
    seps = seps or [1.0]
    worst, worst_label = 0.0, ""
    for dx in seps:
        x_left = np.array([0.0, 0.0, +0.5 * dx])
        x_right = np.array([0.0, 0.0, -0.5 * dx])
        for n_l in range(n_atoms + 1):
            ket = [x_left] * n_l + [x_right] * (n_atoms - n_l)
            for n_lp in range(n_atoms + 1):
                bra = [x_left] * n_lp + [x_right] * (n_atoms - n_lp)
                n = n_l - n_lp
                for theta in _THETA_GRID:
                    q = np.array([0.0, 0.0, theta / dx])
                    for closed, positional, tag in (
                        (kernel_D(n, n_atoms, theta), kernel_D_positions(ket, bra, q), "D"),
                        (
                            kernel_U(n, n_atoms, n_l, theta),
                            kernel_U_positions(ket, bra, q),
                            "U",
                        ),
                    ):
                        err = abs(closed - positional)
                        if err > worst:
                            worst = err
                            worst_label = (
                                f"K_{tag} N_L={n_l} N_L'={n_lp} theta={theta:g} dx={dx:g}"
                            )
    return {
        "check": "kernel_closed_vs_positional",
        "label": worst_label,
        "worst": worst,
        "tolerance": ORACLE_ABS_TOL,
        "status": "pass" if worst <= ORACLE_ABS_TOL else "fail",
    }


def _check_reduced(spec: ExperimentSpec, params: DecoherenceParams) -> Dict[str, Any]:
    rho = full_rho(spec, params)
    worst, worst_label = 0.0, ""
    for alpha in range(1, spec.n_atoms + 1):
        block = partial_trace(rho, alpha)
        lc = left_counts(alpha)
        for ket in range(block.dim):
            for bra in range(block.dim):
                closed = reduced_element(
                    alpha, int(lc[ket]), int(lc[bra]), spec, params
                )
                err = abs(closed - block.entries[ket, bra])
                if err > worst:
                    worst = err
                    worst_label = f"alpha={alpha} ket={ket:0{alpha}b} bra={bra:0{alpha}b}"
    return {
        "check": "reduced_vs_partial_trace",
        "label": worst_label,
        "worst": worst,
        "tolerance": ORACLE_ABS_TOL,
        "status": "pass" if worst <= ORACLE_ABS_TOL else "fail",
    }


def _check_noon(spec: ExperimentSpec, params: DecoherenceParams) -> List[Dict[str, Any]]:
    from .evolution import noon_coherence

    n = spec.n_atoms
    rho = full_rho(spec, params)
    corner_err = abs(rho.entries[0, -1] - noon_coherence(n, params))
    ku_worst = max(abs(kernel_U(n, n, n, theta)) for theta in _THETA_GRID)
    return [
        {
            "check": "noon_corner_vs_closed",
            "label": f"N={n}",
            "worst": corner_err,
            "tolerance": ORACLE_ABS_TOL,
            "status": "pass" if corner_err <= ORACLE_ABS_TOL else "fail",
        },
        {
            "check": "noon_unitary_kernel_zero",
            "label": f"n=N={n}",
            "worst": ku_worst,
            "tolerance": 0.0,
            "status": "pass" if ku_worst == 0.0 else "fail",
        },
    ]


def _dense_port_matrix(n_atoms: int, port: PortProjector) -> np.ndarray:
    single = np.array(
        [[port.a_left], [port.a_right]], dtype=complex
    ) @ np.array([[port.a_left.conjugate(), port.a_right.conjugate()]])
    total = np.zeros((2 ** n_atoms, 2 ** n_atoms), dtype=complex)
    for i in range(n_atoms):
        op = np.eye(1, dtype=complex)
        for j in range(n_atoms):
            op = np.kron(op, single if j == i else np.eye(2, dtype=complex))
        total += op
    return total


def _check_moments(spec: ExperimentSpec, params: DecoherenceParams) -> Dict[str, Any]:
    port = PortProjector.symmetric()
    dense_op = _dense_port_matrix(spec.n_atoms, port)
    rho = full_rho(spec, params).entries
    worst, worst_label = 0.0, ""
    power = np.eye(2 ** spec.n_atoms, dtype=complex)
    for eta in range(1, 5):
        power = power @ dense_op
        dense = float(np.real(np.trace(rho @ power)))
        fast = moment(eta, spec, params, port)
        err = abs(dense - fast) / max(1.0, abs(dense))
        if err > worst:
            worst = err
            worst_label = f"eta={eta}"
    return {
        "check": "moment_vs_dense_trace",
        "label": worst_label,
        "worst": worst,
        "tolerance": ORACLE_REL_TOL,
        "status": "pass" if worst <= ORACLE_REL_TOL else "fail",
    }


def cmd_oracle_check(config: RunConfig) -> Tuple[List[Dict[str, Any]], bool]:
    spec = config.experiment
    if spec.n_atoms > 10:
        raise ConfigError(f"oracle-check requires n_atoms <= 10, got {spec.n_atoms}")
    params = resolve_params(config)
    rows = [_check_kernels(spec)]
    if isinstance(spec.prep, Noon):
        rows.extend(_check_noon(spec, params))
    else:
        rows.append(_check_reduced(spec, params))
        rows.append(_check_moments(spec, params))
    ok = all(row["status"] == "pass" for row in rows)
    return rows, ok


# ---------------------------------------------------------------------------
# output emission
# ---------------------------------------------------------------------------


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))  # round-trip exact; strips numpy scalar wrappers
    return str(value)


def render_rows(rows: List[Dict[str, Any]], fmt: str) -> str:
    """Render row dicts as CSV (header + rows) or a JSON array of records."""
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow(_format_cell(v) for v in row.values())
    return buf.getvalue()


def _thread_count() -> Optional[int]:
    raw = os.environ.get("DECOHEREN_THREADS")
    if raw is None:
        return None
    try:
        count = int(raw)
    except ValueError as exc:
        raise ConfigError(f"DECOHEREN_THREADS must be an integer, got {raw!r}") from exc
    if count < 1:
        raise ConfigError(f"DECOHEREN_THREADS must be >= 1, got {count}")
    return count


def run_command(command: str, config: RunConfig, args) -> Tuple[List[Dict[str, Any]], int]:
    """Execute one subcommand over all sweep points; rows keep sweep order."""
    if config.sweep is None:
        points: List[Tuple[Optional[float], RunConfig]] = [(None, config)]
    else:
        name, values = config.sweep
        points = [(v, apply_sweep_value(config, name, v)) for v in values]

    def run_point(item) -> List[Dict[str, Any]]:
        _, point_config = item
        if command == "rates":
            return cmd_rates(point_config)
        if command == "observe":
            return cmd_observe(point_config)
        if command == "moments":
            return cmd_moments(point_config, args.eta_max)
        if command == "sample":
            return cmd_sample(point_config, args.runs, args.seed)
        return cmd_oracle_check(point_config)[0]

    workers = _thread_count()
    if workers == 1 or len(points) == 1:
        results = [run_point(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_point, points))

    rows: List[Dict[str, Any]] = []
    for index, ((value, _), point_rows) in enumerate(zip(points, results)):
        for row in point_rows:
            out: Dict[str, Any] = {"index": index}
            if config.sweep is not None:
                out[config.sweep[0]] = value
            out.update(row)
            rows.append(out)
    failed = command == "oracle-check" and any(r["status"] == "fail" for r in rows)
    return rows, EXIT_ORACLE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoheren",
        description="Collisional decoherence of a two-mode atom interferometer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "rates": "integrate the environment into (s, gamma, tau)",
        "observe": "mean, visibility, phase, and variance of the port count",
        "moments": "raw and central moments of the port count",
        "sample": "simulate runs of the experiment and report estimators",
        "oracle-check": "closed forms vs brute-force evolution on this config",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="TOML or JSON run configuration")
        p.add_argument("--sweep", help="name=v1,v2,... (overrides the config sweep)")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
        p.add_argument("--seed", type=int, help="sampling seed (overrides config)")
        if name == "moments":
            p.add_argument("--eta-max", type=int, default=4, dest="eta_max")
        if name == "sample":
            p.add_argument("--runs", type=int, default=10000)
    return parser


def _parse_sweep_flag(raw: str):
    name, sep, values = raw.partition("=")
    if not sep or not values:
        raise ConfigError(f"--sweep must look like name=v1,v2,..., got {raw!r}")
    if name not in SWEEP_WHITELIST:
        raise ConfigError(
            f"sweep parameter {name!r} is not in the whitelist {sorted(SWEEP_WHITELIST)}"
        )
    try:
        parsed = tuple(float(v) for v in values.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad sweep values in {raw!r}: {exc}") from exc
    return name, parsed


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.sweep:
            config = replace(config, sweep=_parse_sweep_flag(args.sweep))
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if getattr(args, "runs", None) is not None and getattr(args, "runs", 1) < 1:
            raise ConfigError(f"--runs must be >= 1, got {args.runs}")
        args.seed = config.seed
        fmt = "json" if args.json else config.out_format
        rows, code = run_command(args.command, config, args)
    except (ConfigError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    text = render_rows(rows, fmt)
    path = args.output or config.out_path
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_ORACLE:
        print("error: oracle mismatch, see report rows", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
