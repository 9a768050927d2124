"""JSON-config command line front end.

Usage:
    circlethermo CONFIG.json [--out DIR] [--scheme ulam|collocation]
                             [--n INT] [--tol FLOAT]

The config document selects a map and a command; flags override the
corresponding config keys.  Every run writes ``summary.json`` plus a
command-appropriate CSV into the output directory.  Identical configs
produce bit-identical outputs.

Exit codes: 0 success, 2 validation error (bad document, bad parameters -
nothing was computed), 3 numerical failure (the failing operation is named
on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import maps, oracles, spectral, thermo
from .errors import (
    BranchSolverError,
    BudgetError,
    ConfigError,
    ConvergenceError,
    InvalidMapError,
    NoSignStructureError,
    PerronStructureError,
)

_NUMERICAL_ERRORS = (
    BranchSolverError,
    ConvergenceError,
    NoSignStructureError,
    PerronStructureError,
)

_MAP_PARAMS = {
    "d_adic": {"d"},
    "perturbed_expanding": {"d", "eps"},
    "neutral_doubling": set(),
    "piecewise_linear": {"slopes"},
    "manneville_pomeau_circle": {"alpha"},
}

# keys each command accepts beyond map/command/out; scheme/n/tol are global
_COMMAND_KEYS = {
    "validate": set(),
    "pressure": {"t"},
    "curve": {"t_grid", "t_min", "t_max", "t_step", "with_gap"},
    "t0": {"max_period"},
    "classify": {"max_period"},
    "spectrum": {"t"},
    "equilibrium": {"t"},
    "lyapunov": {"max_period"},
    "variance": {"s", "delta", "n_corr"},
    "gapcheck": {"t", "alpha"},
    "oracle": {"method", "t", "period", "x0", "n_iter"},
}

_GLOBAL_KEYS = {"map", "command", "scheme", "n", "tol", "out"}


class RunConfig:
    """Validated run description: map, command, and checked parameters."""

    def __init__(self, map_obj, command, params, scheme, n, tol, out):
        self.map = map_obj
        self.command = command
        self.params = params
        self.scheme = scheme
        self.n = n
        self.tol = tol
        self.out = out


def _require(cond, message):
    if not cond:
        raise ConfigError(message)


def _as_float(doc, key, default=None):
    if key not in doc:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    v = doc[key]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool),
             f"key {key!r} must be a number, got {v!r}")
    return float(v)


def _as_int(doc, key, default=None):
    if key not in doc:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    v = doc[key]
    _require(isinstance(v, int) and not isinstance(v, bool),
             f"key {key!r} must be an integer, got {v!r}")
    return int(v)


def _build_map(spec) -> maps.CircleMap:
    _require(isinstance(spec, dict), "config key 'map' must be an object")
    _require("family" in spec, "map spec needs a 'family' key")
    family = spec["family"]
    _require(family in _MAP_PARAMS,
             f"unknown family {family!r}; choose from {sorted(_MAP_PARAMS)}")
    extra = set(spec) - {"family"} - _MAP_PARAMS[family]
    _require(not extra, f"unknown map keys for {family}: {sorted(extra)}")
    missing = _MAP_PARAMS[family] - set(spec)
    _require(not missing, f"map family {family} needs keys {sorted(missing)}")
    params = {k: spec[k] for k in _MAP_PARAMS[family]}
    try:
        return maps.make_map(family, **params)
    except InvalidMapError as exc:
        raise ConfigError(f"invalid map: {exc}") from exc


def parse_config(doc, overrides=None) -> RunConfig:
    """Validate a config document (strict: unknown keys are errors) and
    check every numeric parameter against the preconditions of the
    dispatched operation before any computation starts."""
    _require(isinstance(doc, dict), "config must be a JSON object")
    _require("command" in doc, "config needs a 'command' key")
    command = doc["command"]
    _require(command in _COMMAND_KEYS,
             f"unknown command {command!r}; choose from {sorted(_COMMAND_KEYS)}")
    allowed = _GLOBAL_KEYS | _COMMAND_KEYS[command]
    unknown = set(doc) - allowed
    _require(not unknown,
             f"unknown config keys for command {command!r}: {sorted(unknown)}")

    doc = dict(doc)
    for key, value in (overrides or {}).items():
        if value is not None:
            doc[key] = value

    m = _build_map(doc.get("map"))
    scheme = doc.get("scheme", "ulam" if not m.smooth else "collocation")
    _require(scheme in ("ulam", "collocation"),
             f"scheme must be 'ulam' or 'collocation', got {scheme!r}")
    n = _as_int(doc, "n", 256)
    _require(n >= 8, f"n must be >= 8, got {n}")
    if scheme == "collocation":
        _require(n % 2 == 0, f"collocation n must be even, got {n}")
    tol = _as_float(doc, "tol", 1e-3)
    _require(tol > 0, f"tol must be positive, got {tol}")
    out = Path(doc.get("out", "."))

    params = {}
    if command in ("pressure", "spectrum", "equilibrium"):
        params["t"] = _as_float(doc, "t")
    elif command == "curve":
        if "t_grid" in doc:
            for bad in ("t_min", "t_max", "t_step"):
                _require(bad not in doc,
                         f"give either t_grid or t_min/t_max/t_step, not both")
            grid = doc["t_grid"]
            _require(isinstance(grid, list) and len(grid) >= 2,
                     "t_grid must be a list of at least two numbers")
            grid = [float(v) for v in grid]
        else:
            t_min = _as_float(doc, "t_min")
            t_max = _as_float(doc, "t_max")
            t_step = _as_float(doc, "t_step")
            _require(t_step > 0 and t_max > t_min,
                     "need t_max > t_min and t_step > 0")
            k = int(round((t_max - t_min) / t_step))
            grid = [t_min + i * t_step for i in range(k + 1)]
        _require(all(b > a for a, b in zip(grid, grid[1:])),
                 "t_grid must be sorted strictly ascending")
        params["t_grid"] = grid
        with_gap = doc.get("with_gap", True)
        _require(isinstance(with_gap, bool), "with_gap must be a boolean")
        params["with_gap"] = with_gap
    elif command in ("t0", "classify", "lyapunov"):
        default_p = {"t0": 8, "classify": 12, "lyapunov": 12}[command]
        p = _as_int(doc, "max_period", default_p)
        _require(1 <= p <= 20, f"max_period must be in 1..20, got {p}")
        _require(m.degree ** p <= oracles.ORBIT_BUDGET,
                 f"degree^max_period = {m.degree}^{p} exceeds the budget")
        params["max_period"] = p
    elif command == "variance":
        params["s"] = _as_float(doc, "s")
        params["delta"] = _as_float(doc, "delta", 1e-3)
        _require(params["delta"] > 0, "delta must be positive")
        params["n_corr"] = _as_int(doc, "n_corr", 64)
        _require(params["n_corr"] >= 0, "n_corr must be >= 0")
    elif command == "gapcheck":
        params["t"] = _as_float(doc, "t")
        params["alpha"] = _as_float(doc, "alpha", 1.0)
        _require(0 < params["alpha"] <= 1.0, "alpha must lie in (0, 1]")
    elif command == "oracle":
        method = doc.get("method")
        _require(method in ("exact_pressure", "orbit_pressure", "birkhoff"),
                 "oracle method must be exact_pressure, orbit_pressure or "
                 f"birkhoff, got {method!r}")
        params["method"] = method
        if method == "exact_pressure":
            _require(m.family == "piecewise_linear",
                     "exact_pressure applies to piecewise_linear maps only")
            params["t"] = _as_float(doc, "t")
        elif method == "orbit_pressure":
            params["t"] = _as_float(doc, "t")
            p = _as_int(doc, "period", 10)
            _require(1 <= p <= 20, f"period must be in 1..20, got {p}")
            _require(m.degree ** p <= oracles.ORBIT_BUDGET,
                     f"degree^period = {m.degree}^{p} exceeds the budget")
            params["period"] = p
        else:
            params["x0"] = _as_float(doc, "x0")
            _require(0.0 <= params["x0"] < 1.0, "x0 must lie in [0, 1)")
            params["n_iter"] = _as_int(doc, "n_iter", 100_000)
            _require(params["n_iter"] >= 1, "n_iter must be >= 1")

    return RunConfig(m, command, params, scheme, n, tol, out)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run(config: RunConfig) -> int:
    """Dispatch the command, write summary.json and the command CSV."""
    m, cmd, ps = config.map, config.command, config.params
    scheme, n, tol = config.scheme, config.n, config.tol
    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    csv_name = None

    if cmd == "validate":
        diag = maps.diagnose(m)
        results = {
            "min_derivative": diag.min_derivative,
            "is_expanding": diag.is_expanding,
            "neutral_points": list(diag.neutral_points),
            "degree": diag.degree,
            "smooth": diag.smooth,
        }
    elif cmd == "pressure":
        value = thermo.pressure(m, ps["t"], scheme, n)
        results = {"t": ps["t"], "P": value}
        csv_name = "pressure.csv"
        _write_csv(out / csv_name, "t,P", [(ps["t"], value)])
    elif cmd == "curve":
        curve = thermo.pressure_curve(m, ps["t_grid"], scheme, n,
                                      with_gap=ps["with_gap"])
        results = curve.to_json_dict()
        csv_name = "curve.csv"
        curve.to_csv(out / csv_name)
    elif cmd in ("t0", "classify"):
        fn = thermo.find_t0 if cmd == "t0" else thermo.classify_transition
        rep = fn(m, scheme, n, tol=tol, max_period=ps["max_period"])
        results = rep.to_json_dict()
        csv_name = f"{cmd}.csv"
        _write_csv(
            out / csv_name,
            "t0,classification,chi_min,chi_max,dynamical_dimension,"
            "residual,bowen_root",
            [(
                rep.t0, rep.classification, rep.chi_min, rep.chi_max,
                rep.dynamical_dimension, rep.residual, rep.bowen_root,
            )],
        )
    elif cmd == "spectrum":
        sd = spectral.spectral_data(m, ps["t"], scheme, n)
        results = sd.to_json_dict()
        csv_name = "spectrum.csv"
        _write_csv(
            out / csv_name, "i,node,h,nu",
            [(i, float(sd.nodes[i]), float(sd.h[i]), float(sd.nu[i]))
             for i in range(sd.n)],
        )
    elif cmd == "equilibrium":
        sd = spectral.spectral_data(m, ps["t"], scheme, n, with_gap=False)
        es = spectral.equilibrium_state(sd, m)
        results = {
            "t": ps["t"],
            "lambda1": es.lambda1,
            "nodes": es.nodes,
            "mu": es.mu,
            "jacobian": es.jacobian,
        }
        csv_name = "equilibrium.csv"
        _write_csv(
            out / csv_name, "i,node,mu,jacobian",
            [(i, float(es.nodes[i]), float(es.mu[i]), float(es.jacobian[i]))
             for i in range(len(es.mu))],
        )
    elif cmd == "lyapunov":
        chi_min, chi_max = thermo.lyapunov_extrema(m, ps["max_period"])
        results = {
            "chi_min": chi_min,
            "chi_max": chi_max,
            "max_period": ps["max_period"],
        }
        csv_name = "lyapunov.csv"
        _write_csv(out / csv_name, "chi_min,chi_max,max_period",
                   [(chi_min, chi_max, ps["max_period"])])
    elif cmd == "variance":
        vr = thermo.variance(m, ps["s"], scheme, n,
                             delta=ps["delta"], n_corr=ps["n_corr"])
        results = vr.to_json_dict()
        csv_name = "variance.csv"
        _write_csv(out / csv_name, "s,sigma2_nagaev,sigma2_green_kubo,agreement",
                   [(vr.s, vr.sigma2_nagaev, vr.sigma2_green_kubo,
                     vr.agreement)])
    elif cmd == "gapcheck":
        eb = thermo.essential_bound_check(m, ps["t"], alpha=ps["alpha"],
                                          scheme=scheme, n=n)
        results = eb.to_json_dict()
        csv_name = "gapcheck.csv"
        _write_csv(out / csv_name, "t,alpha,observed_ratio,bound,ok",
                   [(eb.t, eb.alpha, eb.observed_ratio, eb.bound, eb.ok)])
    elif cmd == "oracle":
        method = ps["method"]
        if method == "exact_pressure":
            value = oracles.exact_pressure_piecewise_linear(
                m.branch_slopes, ps["t"]
            )
            results = {"method": method, "t": ps["t"], "P": value}
        elif method == "orbit_pressure":
            value = oracles.pressure_periodic_orbits(m, ps["t"], ps["period"])
            results = {"method": method, "t": ps["t"],
                       "period": ps["period"], "P": value}
        else:
            log_df = lambda x: np.log(m.deriv(x))
            value = oracles.birkhoff_average(m, log_df, ps["x0"],
                                             ps["n_iter"])
            results = {"method": method, "x0": ps["x0"],
                       "n_iter": ps["n_iter"], "average_log_df": value}
        csv_name = "oracle.csv"
        _write_csv(out / csv_name, "method,value",
                   [(method, list(results.values())[-1])])

    summary = {
        "command": cmd,
        "map": {"family": m.family, "params": list(m.params)},
        "scheme": scheme,
        "n": n,
        "tol": tol,
        "params": {k: v for k, v in ps.items()},
        "results": _jsonable(results),
    }
    if csv_name is not None:
        summary["csv"] = csv_name
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="circlethermo",
        description="Transfer-operator thermodynamics for circle maps",
    )
    parser.add_argument("config", help="JSON config document")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--scheme", default=None,
                        choices=["ulam", "collocation"])
    parser.add_argument("--n", default=None, type=int)
    parser.add_argument("--tol", default=None, type=float)
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON (line {exc.lineno}, "
              f"column {exc.colno}): {exc.msg}", file=sys.stderr)
        return 2

    try:
        config = parse_config(doc, overrides={
            "out": args.out, "scheme": args.scheme,
            "n": args.n, "tol": args.tol,
        })
    except (ConfigError, InvalidMapError, BudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        return run(config)
    except _NUMERICAL_ERRORS as exc:
        print(f"error in {config.command}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
