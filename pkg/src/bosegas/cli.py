"""Batch command-line front end: sweeps, reports, and the invariant runner.

Commands: scatter, bounds, gp, tf, gp-tf-limit, foldy, bogolubov, verify.
Configuration comes from flags and/or a flat JSON file (flags win).  Reports
are CSV (with #-prefixed metadata lines) or JSON; identical configurations
produce byte-identical bodies apart from the timestamp metadata line.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Set BOSEGAS_THREADS to cap sweep concurrency (default 1).
"""

from __future__ import annotations

import difflib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import __version__
from . import bogolubov, gp, homogeneous, scattering
from .errors import (
    AnsatzInfeasible,
    BoseGasError,
    DomainError,
    ParseError,
    UnknownKey,
)
from .numerics import Tolerances
from .potentials import parse_pair_potential, parse_trap_potential
from .verify import run_all

__all__ = ["RunConfig", "Report", "parse_config", "serialize_config", "run",
           "main"]


# Parameter schema per command: name -> (python type, default, unit).
# `None` default means required.
_COMMON = {
    "output": (str, None, "path"),
    "format": (str, "csv", "csv|json"),
    "abs_tol": (float, None, "dimensionless"),
    "rel_tol": (float, None, "dimensionless"),
}

_SCHEMAS: Dict[str, Dict[str, tuple]] = {
    "scatter": {
        "potential": (str, "__required__", "spec string"),
        "mu": (float, 1.0, "energy*length^2"),
        "dim": (int, 3, "2|3"),
        "grid_points": (int, 256, "count"),
    },
    "bounds": {
        "dim": (int, 3, "2|3"),
        "y_grid": (str, "1e-12:1e-4:50:log", "sweep"),
        "rho_a2_grid": (str, "1e-30:1e-6:25:log", "sweep"),
        "lower_c": (float, homogeneous.LOWER_RATIO_C, "dimensionless"),
    },
    "gp": {
        "trap": (str, "harmonic", "spec string"),
        "dim": (int, 3, "2|3"),
        "n": (float, 1.0, "count"),
        "coupling": (float, "__required__", "length (3D) | dimensionless (2D)"),
        "mu_const": (float, 1.0, "energy*length^2"),
        "grid_points": (int, 2000, "count"),
        "profile_out": (str, None, "path"),
    },
    "tf": {
        "trap": (str, "harmonic", "spec string"),
        "dim": (int, 3, "2|3"),
        "n": (float, 1.0, "count"),
        "coupling": (float, "__required__", "length (3D) | 1 (2D)"),
        "mu_const": (float, 1.0, "energy*length^2"),
    },
    "gp-tf-limit": {
        "trap": (str, "harmonic", "spec string"),
        "dim": (int, 3, "2|3"),
        "g_grid": (str, "10:10000:4:log", "sweep"),
        "grid_points": (int, 2000, "count"),
    },
    "foldy": {
        "rho_grid": (str, "1:256:3:log", "sweep"),
        "mu_const": (float, 1.0, "energy*length^2"),
    },
    "bogolubov": {
        "a_value": (float, 5.0, "energy"),
        "b_value": (float, 3.0, "energy"),
        "n_max": (int, 120, "count"),
    },
    "verify": {},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict
    output_path: Optional[str] = None
    output_format: str = "csv"
    abs_tol: Optional[float] = None
    rel_tol: Optional[float] = None


@dataclass
class Report:
    metadata: dict
    columns: List[Tuple[str, str]]   # (name, unit)
    rows: List[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = [f"# command = {self.metadata['command']}",
                 f"# config = {self.metadata['config']}",
                 f"# version = {self.metadata['version']}",
                 f"# timestamp = {self.metadata['timestamp']}"]
        units = "; ".join(f"{name} [{unit}]" for name, unit in self.columns)
        lines.append(f"# units: {units}")
        names = [name for name, _ in self.columns]
        lines.append(",".join(names))
        for row in self.rows:
            lines.append(",".join(_fmt(row[name]) for name in names))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "metadata": dict(self.metadata,
                             columns=[{"name": n, "unit": u}
                                      for n, u in self.columns]),
            "rows": self.rows,
        }
        return json.dumps(payload, indent=2, default=_json_default) + "\n"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"not serializable: {type(value)}")


def _coerce(key, raw, typ):
    if raw is None:
        return None
    if isinstance(raw, typ):
        return raw
    try:
        if typ is bool and isinstance(raw, str):
            return raw.lower() in ("1", "true", "yes")
        return typ(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"parameter {key!r}: cannot convert {raw!r} "
                         f"to {typ.__name__}") from exc


def _suggest(key, valid):
    close = difflib.get_close_matches(key, sorted(valid), n=1)
    hint = f"; did you mean {close[0]!r}?" if close else ""
    return f"unknown key {key!r}{hint}"


def parse_config(argv: List[str]) -> RunConfig:
    """Build a RunConfig from flags plus an optional --config JSON file.

    Flags override file values.  Unknown keys are rejected at parse time with
    the nearest valid key named in the error.
    """
    flags: Dict[str, str] = {}
    positional: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token.startswith("--"):
            key = token[2:].replace("-", "_")
            if "=" in key:
                key, value = key.split("=", 1)
            else:
                if i + 1 >= len(argv):
                    raise ParseError(f"flag {token!r} is missing a value")
                value = argv[i + 1]
                i += 1
            flags[key] = value
        elif token.startswith("-"):
            raise ParseError(f"unrecognized token {token!r}")
        else:
            positional.append(token)
        i += 1
    if len(positional) > 1:
        raise ParseError(f"at most one positional command, got {positional}")

    merged: Dict[str, object] = {}
    if "config" in flags:
        path = flags.pop("config")
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read config file {path!r}: {exc}")
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file {path!r}: line {exc.lineno}: "
                             f"{exc.msg}")
        if not isinstance(loaded, dict):
            raise ParseError("config file must hold a flat JSON object")
        merged.update({str(k).replace("-", "_"): v for k, v in loaded.items()})
    merged.update(flags)
    if positional:
        merged["command"] = positional[0]

    command = merged.pop("command", None)
    if command is None:
        raise ParseError(f"no command given; choose from "
                         f"{', '.join(sorted(_SCHEMAS))}")
    command = str(command)
    if command not in _SCHEMAS:
        close = difflib.get_close_matches(command, _SCHEMAS, n=1)
        hint = f"; did you mean {close[0]!r}?" if close else ""
        raise ParseError(f"unknown command {command!r}{hint}")
    schema = _SCHEMAS[command]
    valid = set(schema) | set(_COMMON)

    parameters: Dict[str, object] = {}
    out_path: Optional[str] = None
    out_format = "csv"
    abs_tol = rel_tol = None
    for key, raw in merged.items():
        if key not in valid:
            raise UnknownKey(_suggest(key, valid))
        if key == "output":
            out_path = str(raw)
        elif key == "format":
            out_format = str(raw)
            if out_format not in ("csv", "json"):
                raise ParseError(f"format must be csv or json, "
                                 f"got {out_format!r}")
        elif key == "abs_tol":
            abs_tol = _coerce(key, raw, float)
        elif key == "rel_tol":
            rel_tol = _coerce(key, raw, float)
        else:
            parameters[key] = _coerce(key, raw, schema[key][0])
    for key, (typ, default, _unit) in schema.items():
        if key not in parameters:
            if default == "__required__":
                raise ParseError(f"command {command!r} requires --"
                                 + key.replace("_", "-"))
            if default is not None:
                parameters[key] = default
    return RunConfig(command=command, parameters=parameters,
                     output_path=out_path, output_format=out_format,
                     abs_tol=abs_tol, rel_tol=rel_tol)


def serialize_config(config: RunConfig) -> str:
    """Flat JSON form of a RunConfig; parse_config on it round-trips."""
    flat: Dict[str, object] = {"command": config.command,
                               "format": config.output_format}
    if config.output_path is not None:
        flat["output"] = config.output_path
    if config.abs_tol is not None:
        flat["abs_tol"] = config.abs_tol
    if config.rel_tol is not None:
        flat["rel_tol"] = config.rel_tol
    flat.update(config.parameters)
    return json.dumps(flat, sort_keys=True, default=_json_default)


def _parse_sweep(text: str) -> np.ndarray:
    """`lo:hi:points` (linear) or `lo:hi:points:log`."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ParseError(f"sweep {text!r}: expected lo:hi:points[:log]")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        n = int(parts[2])
    except ValueError as exc:
        raise ParseError(f"sweep {text!r}: {exc}")
    if n < 1:
        raise ParseError("sweep needs at least one point")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ParseError(f"sweep suffix must be 'log', got {parts[3]!r}")
        if lo <= 0:
            raise ParseError("log sweep needs lo > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _sweep_map(fn, values):
    threads = int(os.environ.get("BOSEGAS_THREADS", "1"))
    if threads <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, values))


def _tolerances(config: RunConfig) -> Optional[Tolerances]:
    if config.abs_tol is None and config.rel_tol is None:
        return None
    return Tolerances(abs_tol=config.abs_tol or 0.0,
                      rel_tol=config.rel_tol or 0.0)


# --- command implementations -----------------------------------------------------


def _run_scatter(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    p = parse_pair_potential(pars["potential"], dimension=pars["dim"])
    sol = scattering.solve_zero_energy(p, pars["mu"], tol=_tolerances(config))
    try:
        born = scattering.born_integral(p)
    except BoseGasError:
        born = math.nan
    row = {
        "potential": pars["potential"],
        "dim": p.dimension,
        "mu": pars["mu"],
        "a": sol.a,
        "s": scattering.kinetic_fraction(sol) if p.dimension == 3 and sol.a > 0
        else (1.0 if p.dimension == 2 else math.nan),
        "born_integral": born,
        "converged": sol.converged,
    }
    columns = [("potential", "spec"), ("dim", "1"),
               ("mu", "energy*length^2"), ("a", "length"),
               ("s", "dimensionless"), ("born_integral", "energy*length^dim"),
               ("converged", "bool")]
    return columns, [row]


def _run_bounds(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    if pars["dim"] == 3:
        ys = _parse_sweep(pars["y_grid"])

        def one(y):
            lower = homogeneous.dilute_lower_ratio(y, pars["lower_c"])
            try:
                # unit-scale instantiation: rho = 1, a from Y
                a = (3.0 * y / (4.0 * math.pi)) ** (1.0 / 3.0)
                cell = homogeneous.cell_lower_bound(
                    homogeneous.DiluteParams(rho=1.0, a=a, mu=1.0))
                cell_ratio = cell.value / (4.0 * math.pi * a)
            except AnsatzInfeasible:
                cell_ratio = 0.0
            return {
                "Y": y,
                "dyson_upper": homogeneous.dyson_upper_ratio(y),
                "dyson_upper_improved": homogeneous.dyson_upper_ratio(y, True),
                "lower_ratio": lower.value,
                "lower_valid": lower.valid,
                "dyson_lower_const": homogeneous.DYSON_LOWER_RATIO,
                "cell_lower_ratio": cell_ratio,
            }

        rows = _sweep_map(one, [float(y) for y in ys])
        columns = [("Y", "dimensionless"), ("dyson_upper", "dimensionless"),
                   ("dyson_upper_improved", "dimensionless"),
                   ("lower_ratio", "dimensionless"), ("lower_valid", "bool"),
                   ("dyson_lower_const", "dimensionless"),
                   ("cell_lower_ratio", "dimensionless")]
        return columns, rows

    xs = _parse_sweep(pars["rho_a2_grid"])

    def one2(x):
        p = homogeneous.DiluteParams(rho=1.0, a=math.sqrt(x), mu=1.0, d=2)
        upper, lower = homogeneous.schick_2d_bounds(p)
        lead = homogeneous.leading_energy(p).value
        return {"rho_a2": x, "leading": lead, "upper": upper.value,
                "lower": lower.value}

    rows = _sweep_map(one2, [float(x) for x in xs])
    columns = [("rho_a2", "dimensionless"), ("leading", "energy"),
               ("upper", "energy"), ("lower", "energy")]
    return columns, rows


def _run_gp(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    trap = parse_trap_potential(pars["trap"], dimension=pars["dim"])
    state = gp.gp_minimize(trap, pars["n"], pars["coupling"],
                           mu_const=pars["mu_const"],
                           grid_points=pars["grid_points"])
    if pars.get("profile_out"):
        gp.export_profile(state, pars["profile_out"])
    row = {
        "trap": pars["trap"], "dim": pars["dim"], "N": pars["n"],
        "coupling": pars["coupling"], "E": state.E,
        "kinetic": state.kinetic, "trap_energy": state.trap_energy,
        "interaction": state.interaction, "mu_gp": state.mu_gp,
        "rho_bar": gp.mean_density(state), "residual": state.residual,
        "iterations": state.iterations,
    }
    columns = [("trap", "spec"), ("dim", "1"), ("N", "count"),
               ("coupling", "length|dimensionless"), ("E", "energy"),
               ("kinetic", "energy"), ("trap_energy", "energy"),
               ("interaction", "energy"), ("mu_gp", "energy"),
               ("rho_bar", "length^-dim"), ("residual", "dimensionless"),
               ("iterations", "count")]
    return columns, [row]


def _run_tf(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    trap = parse_trap_potential(pars["trap"], dimension=pars["dim"])
    state = gp.tf_solve(trap, pars["n"], pars["coupling"],
                        mu_const=pars["mu_const"])
    row = {
        "trap": pars["trap"], "dim": pars["dim"], "N": pars["n"],
        "coupling": pars["coupling"], "mu_tf": state.mu_tf,
        "support_radius": state.support_radius, "E_tf": state.E_tf,
        "identity_gap": gp.tf_chemical_identity_gap(state),
    }
    columns = [("trap", "spec"), ("dim", "1"), ("N", "count"),
               ("coupling", "length|dimensionless"), ("mu_tf", "energy"),
               ("support_radius", "length"), ("E_tf", "energy"),
               ("identity_gap", "dimensionless")]
    return columns, [row]


def _run_gp_tf_limit(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    trap = parse_trap_potential(pars["trap"], dimension=pars["dim"])
    gs = _parse_sweep(pars["g_grid"])
    rows = gp.gp_tf_limit(trap, [float(g) for g in gs],
                           grid_points=pars["grid_points"])
    columns = [("g", "dimensionless"), ("E_gp", "energy"),
               ("E_tf", "energy"), ("ratio", "dimensionless"),
               ("l1_rescaled", "dimensionless")]
    return columns, rows


def _run_foldy(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    rhos = _parse_sweep(pars["rho_grid"])
    rows = _sweep_map(lambda r: bogolubov.foldy_report(r, pars["mu_const"]),
                      [float(r) for r in rhos])
    columns = [("rho", "length^-3"), ("mode_integral", "energy"),
               ("closed_form", "energy"),
               ("displayed_prefactor_form", "energy"),
               ("numeric_over_closed", "dimensionless"),
               ("closed_over_displayed", "dimensionless"),
               ("correlation_length", "length"), ("mean_distance", "length"),
               ("correlation_over_mean", "dimensionless")]
    return columns, rows


def _run_bogolubov(config: RunConfig) -> Tuple[list, list]:
    pars = config.parameters
    a_val, b_val = pars["a_value"], pars["b_value"]
    mode = bogolubov.pair_mode_bound(a_val, b_val)
    exact = math.sqrt(a_val ** 2 - b_val ** 2) - a_val
    row = {
        "A": a_val, "B": b_val, "alpha": mode.alpha, "D": mode.D,
        "ground_bound_coeff": mode.ground_bound_coeff,
        "fock_energy": bogolubov.fock_oracle(a_val, b_val, pars["n_max"]),
        "exact_pair_energy": exact,
    }
    columns = [("A", "energy"), ("B", "energy"), ("alpha", "dimensionless"),
               ("D", "energy"), ("ground_bound_coeff", "energy"),
               ("fock_energy", "energy"), ("exact_pair_energy", "energy")]
    return columns, [row]


def _run_verify(config: RunConfig) -> Tuple[list, list]:
    results = run_all()
    rows = [{"suite": r.suite, "check": r.name, "passed": r.passed,
             "detail": r.detail.replace(",", ";")} for r in results]
    columns = [("suite", "name"), ("check", "name"), ("passed", "bool"),
               ("detail", "text")]
    return columns, rows


_RUNNERS = {
    "scatter": _run_scatter,
    "bounds": _run_bounds,
    "gp": _run_gp,
    "tf": _run_tf,
    "gp-tf-limit": _run_gp_tf_limit,
    "foldy": _run_foldy,
    "bogolubov": _run_bogolubov,
    "verify": _run_verify,
}


def run(config: RunConfig) -> Report:
    """Execute a command and assemble its report (deterministic per config)."""
    columns, rows = _RUNNERS[config.command](config)
    metadata = {
        "command": config.command,
        "config": serialize_config(config),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    return Report(metadata=metadata, columns=columns, rows=rows)


_HELP = """bosegas COMMAND [--key value ...]

Commands and their keys (defaults in parentheses):
  scatter      --potential SPEC  --mu (1.0)  --dim (3)  --grid-points (256)
               potential specs: hardcore:r0=X | squarewell:r0=X,v0=Y
                                softsphere:r0=X,v0=Y | table:path=FILE
  bounds       --dim (3)  --y-grid (1e-12:1e-4:50:log)  --lower-c (8.9)
               --rho-a2-grid (1e-30:1e-6:25:log)   [2D]
  gp           --trap (harmonic) --dim (3) --n (1.0) --coupling REQUIRED
               --mu-const (1.0) --grid-points (2000) --profile-out PATH
               trap specs: harmonic[:scale=S] | box:l=L | power:s=S[,scale=C]
  tf           --trap (harmonic) --dim (3) --n (1.0) --coupling REQUIRED
  gp-tf-limit  --trap (harmonic) --dim (3) --g-grid (10:10000:4:log)
  foldy        --rho-grid (1:256:3:log)  --mu-const (1.0)
  bogolubov    --a-value (5.0)  --b-value (3.0)  --n-max (120)
  verify       (no keys; runs the invariant battery)

Common keys: --config FILE (flat JSON; flags override), --output PATH,
  --format csv|json, --abs-tol X, --rel-tol X.
Sweeps use lo:hi:points[:log].  BOSEGAS_THREADS caps sweep concurrency.
Exit codes: 0 ok, 2 config error, 3 numerical failure.
"""


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if not argv or argv[0] in ("-h", "--help", "help"):
        print(_HELP, end="")
        return 0
    try:
        config = parse_config(argv)
    except (ParseError, UnknownKey, DomainError) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(config)
    except (ParseError, UnknownKey) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except BoseGasError as exc:
        print(f"{config.command}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"{config.command}: io error: {exc}", file=sys.stderr)
        return 3
    text = report.to_csv() if config.output_format == "csv" \
        else report.to_json()
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.command == "verify":
        failed = [row for row in report.rows if not row["passed"]]
        print(f"verify: {len(report.rows) - len(failed)} passed, "
              f"{len(failed)} failed", file=sys.stderr)
        if failed:
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
