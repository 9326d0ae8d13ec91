"""Scenario runner: ``dissint <config.json> [--out FILE] [--format csv|json] [--seed N]``.

A config is one JSON object with a ``mode`` and mode-specific
``parameters``.  Complex numbers are ``[re, im]`` pairs, matrices are nested
arrays of such pairs, grids are ``{t0, t1, steps}`` and an optional
``sweep`` is ``{name, min, max, points, scale}``.  Output is one table row per
sweep point (per random gauge in gauge-check mode), complex results split
into ``_re``/``_im`` columns.

Exit codes: 0 success, 2 configuration error, 3 computation error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Callable

import jsonschema
import numpy as np

from . import algebra, biortho, gate, geometric, interferometer, propagator
from .algebra import TimeGrid
from .errors import ComputationError, ConfigError, DissintError, NotCyclic
from .prng import SplitMix64
from .tables import FORMATS, ResultTable, emit

MODES = ("mzi-scalar", "mzi-internal", "gate", "robustness", "gauge-check")

_NUM = {"type": "number"}
_COMPLEX = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_VECTOR = {"type": "array", "items": _COMPLEX, "minItems": 1}
_MATRIX = {"type": "array", "items": _VECTOR, "minItems": 1}
_GRID = {
    "type": "object",
    "properties": {"t0": _NUM, "t1": _NUM, "steps": {"type": "integer", "minimum": 2}},
    "required": ["t1", "steps"],
    "additionalProperties": False,
}
_SWEEP = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "min": _NUM,
        "max": _NUM,
        "points": {"type": "integer", "minimum": 1},
        "scale": {"enum": ["linear", "log"]},
    },
    "required": ["name", "min", "max", "points"],
    "additionalProperties": False,
}
_COEFFICIENT = {
    "type": "object",
    "properties": {
        "shape": {"enum": ["cos", "sin", "exp"]},
        "amplitude": _COMPLEX,
        "frequency": _NUM,
        "phase": _NUM,
    },
    "additionalProperties": False,
}
_HAMILTONIAN = {
    "type": "object",
    "oneOf": [
        {"required": ["matrix"]},
        {"required": ["terms"]},
    ],
    "properties": {
        "matrix": _MATRIX,
        "terms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"matrix": _MATRIX, "coefficient": _COEFFICIENT},
                "required": ["matrix"],
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}
_STATE = {
    "type": "object",
    "oneOf": [
        {"required": ["matrix"]},
        {"required": ["weights", "alphas", "betas"]},
        {"required": ["pure"]},
    ],
    "properties": {
        "matrix": _MATRIX,
        "weights": {"type": "array", "items": _NUM, "minItems": 1},
        "alphas": _MATRIX,
        "betas": _MATRIX,
        "pure": _VECTOR,
        "beta": _VECTOR,
    },
    "additionalProperties": False,
}
_GATE_PARAMS = {
    "eta": _NUM,
    "gamma": {"type": "number", "minimum": 0},
    "theta": _NUM,
    "r": _NUM,
    "tau": _NUM,
}


def _params_schema(props: dict, required: list[str]) -> dict:
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


PARAMETER_SCHEMAS = {
    "mzi-scalar": _params_schema({"T": _NUM, "chi": _NUM}, []),
    "mzi-internal": _params_schema(
        {"hamiltonian": _HAMILTONIAN, "state": _STATE, "grid": _GRID, "T": _NUM, "chi": _NUM},
        ["hamiltonian", "state", "grid"],
    ),
    "gate": _params_schema(
        {**_GATE_PARAMS, "pipeline": {"type": "boolean"}, "expansions": {"type": "boolean"},
         "steps": {"type": "integer", "minimum": 2}},
        ["eta", "theta", "r"],
    ),
    "robustness": _params_schema(
        {k: v for k, v in _GATE_PARAMS.items() if k != "gamma"}
        | {"quantities": {"type": "array", "items": {"enum": sorted(gate.QUANTITIES)}, "minItems": 1}},
        ["eta", "theta", "r"],
    ),
    "gauge-check": _params_schema(
        {"gate": _params_schema(_GATE_PARAMS, ["eta", "theta", "r"]),
         "hamiltonian": _HAMILTONIAN, "state": _STATE, "grid": _GRID,
         "gauges": {"type": "integer", "minimum": 1},
         "steps": {"type": "integer", "minimum": 2}},
        [],
    ),
}

SWEEPABLE = {
    "mzi-scalar": ("T", "chi"),
    "mzi-internal": ("T", "chi", "t1"),
    "gate": ("eta", "gamma", "theta", "r", "tau"),
    "robustness": ("gamma",),
    "gauge-check": (),
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "mode": {"enum": list(MODES)},
        "parameters": {"type": "object"},
        "sweep": _SWEEP,
        "seed": {"type": "integer", "minimum": 0},
        "output": {
            "type": "object",
            "properties": {"format": {"enum": list(FORMATS)}, "path": {"type": "string"}},
            "additionalProperties": False,
        },
    },
    "required": ["mode"],
    "additionalProperties": False,
}


class SweepPointError(ComputationError):
    """A computation error annotated with the sweep point that raised it."""

    def __init__(self, index: int, point: dict, cause: Exception):
        self.index = index
        self.point = point
        self.cause = cause
        where = ", ".join(f"{k}={v!r}" for k, v in point.items())
        super().__init__(f"sweep point {index} ({where}): {type(cause).__name__}: {cause}")


# -- config loading ---------------------------------------------------------------

def _path_str(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _validate(instance, schema, prefix=()):
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(_path_str([*prefix, *err.absolute_path]), err.message)


def validate_config(config: Any) -> dict:
    """Schema-check a parsed config; raises ``ConfigError`` with a field path."""
    _validate(config, CONFIG_SCHEMA)
    mode = config["mode"]
    params = config.get("parameters", {})
    _validate(params, PARAMETER_SCHEMAS[mode], ("parameters",))
    sweep = config.get("sweep")
    if sweep is not None:
        if sweep["name"] not in SWEEPABLE[mode]:
            raise ConfigError("sweep.name", f"{sweep['name']!r} cannot be swept in mode {mode} (allowed: {SWEEPABLE[mode]})")
        if sweep.get("scale") == "log" and (sweep["min"] <= 0 or sweep["max"] <= 0):
            raise ConfigError("sweep", "log sweeps need positive bounds")
    if mode == "robustness" and sweep is None:
        raise ConfigError("sweep", "robustness mode needs a gamma sweep")
    return config


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return validate_config(config)


def sweep_values(sweep: dict | None) -> np.ndarray:
    if sweep is None:
        return np.array([math.nan])
    if sweep.get("scale", "linear") == "log":
        return np.geomspace(sweep["min"], sweep["max"], sweep["points"])
    return np.linspace(sweep["min"], sweep["max"], sweep["points"])


def _complex(pair) -> complex:
    return complex(pair[0], pair[1])


def _matrix(rows, path: str) -> np.ndarray:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ConfigError(path, "matrix must be square")
    return np.array([[_complex(x) for x in r] for r in rows], dtype=complex)


def _vector(items) -> np.ndarray:
    return np.array([_complex(x) for x in items], dtype=complex)


def _coefficient(spec: dict | None) -> Callable[[float], complex]:
    spec = spec or {}
    amp = _complex(spec.get("amplitude", [1.0, 0.0]))
    w = float(spec.get("frequency", 0.0))
    ph = float(spec.get("phase", 0.0))
    shape = spec.get("shape", "cos")
    if shape == "cos":
        return lambda t: amp * math.cos(w * t + ph)
    if shape == "sin":
        return lambda t: amp * math.sin(w * t + ph)
    return lambda t: amp * complex(math.cos(w * t + ph), math.sin(w * t + ph))


def build_hamiltonian(spec: dict, path: str) -> propagator.Hamiltonian:
    if "matrix" in spec:
        return propagator.Hamiltonian.constant(_matrix(spec["matrix"], f"{path}.matrix"))
    terms = []
    for j, term in enumerate(spec["terms"]):
        m = _matrix(term["matrix"], f"{path}.terms[{j}].matrix")
        coef = term.get("coefficient")
        if coef is None or (coef.get("frequency", 0.0) == 0 and coef.get("shape", "cos") != "sin"):
            # time-independent term; keep the constant fast path when all terms are
            f = _coefficient(coef)
            terms.append((f, m, True))
        else:
            terms.append((_coefficient(coef), m, False))
    dims = {m.shape for _, m, _ in terms}
    if len(dims) != 1:
        raise ConfigError(f"{path}.terms", "terms differ in dimension")
    if all(const for *_, const in terms):
        return propagator.Hamiltonian.constant(sum(f(0.0) * m for f, m, _ in terms))
    return propagator.Hamiltonian.from_terms([(f, m) for f, m, _ in terms])


def build_state(spec: dict, path: str) -> biortho.GeneralizedDensityOperator:
    try:
        if "matrix" in spec:
            return biortho.decompose_density(_matrix(spec["matrix"], f"{path}.matrix"))
        if "pure" in spec:
            beta = _vector(spec["beta"]) if "beta" in spec else None
            return biortho.pure_state(_vector(spec["pure"]), beta)
        alphas = np.array([_vector(a) for a in spec["alphas"]])
        betas = np.array([_vector(b) for b in spec["betas"]])
        return biortho.assemble_density(spec["weights"], alphas, betas)
    except (ValueError, ComputationError) as exc:
        raise ConfigError(path, f"invalid state: {exc}") from exc


def build_grid(spec: dict, path: str) -> TimeGrid:
    try:
        grid = TimeGrid(float(spec.get("t0", 0.0)), float(spec["t1"]), int(spec["steps"]))
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc
    if grid.steps % 2:
        raise ConfigError(f"{path}.steps", "Simpson quadrature needs an even step count")
    return grid


def _gate_params(values: dict, path: str) -> gate.GateParams:
    try:
        return gate.GateParams(
            float(values["eta"]), float(values.get("gamma", 0.0)), float(values["theta"]),
            float(values["r"]), None if values.get("tau") is None else float(values["tau"]),
        )
    except ValueError as exc:
        # GateParams messages start with the offending field name
        field = str(exc).split()[0]
        known = {"eta", "gamma", "theta", "r", "tau"}
        raise ConfigError(f"{path}.{field}" if field in known else path, str(exc)) from exc


def _absorber(values: dict, path: str) -> interferometer.AbsorberSetting:
    try:
        return interferometer.AbsorberSetting(float(values.get("T", 1.0)), float(values.get("chi", 0.0)))
    except ValueError as exc:
        raise ConfigError(f"{path}.T", str(exc)) from exc


def _split(prefix: str, z: complex) -> dict:
    z = complex(z)
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


# -- modes ------------------------------------------------------------------------

def _run_points(config: dict, row: Callable[[dict], dict]) -> list[dict]:
    params = config.get("parameters", {})
    sweep = config.get("sweep")
    rows = []
    for j, value in enumerate(sweep_values(sweep)):
        point = dict(params)
        if sweep is not None:
            point[sweep["name"]] = float(value)
        try:
            rows.append(row(point))
        except ComputationError as exc:
            shown = {sweep["name"]: float(value)} if sweep is not None else {}
            raise SweepPointError(j, shown, exc) from exc
    return rows


def _mzi_scalar(config: dict) -> list[dict]:
    one = biortho.pure_state(np.array([1.0]))

    def row(point):
        setting = _absorber(point, "parameters")
        z = setting.z
        std, nu = interferometer.standard_intensity(setting)
        vartheta, mag = interferometer.polar_interference(setting)
        arms = interferometer.ArmConfiguration(z, np.eye(1), np.eye(1))
        block = 4 * interferometer.channel0_block_trace(interferometer.output_state(one, arms), 1)
        return {
            "T": setting.T, "chi": setting.chi,
            **_split("intensity", interferometer.scalar_intensity(z)),
            **_split("block_intensity", block),
            "standard_intensity": std, "standard_visibility": nu,
            "vartheta": vartheta, "J_abs": mag,
        }

    rows = _run_points(config, row)
    sweep = config.get("sweep")
    if sweep is not None and sweep["name"] == "chi" and len(rows) > 1:
        # replace the pointwise angle by the one continued over the chi sweep
        T = rows[0]["T"]
        theta, _ = interferometer.polar_interference_sweep(T, [r["chi"] for r in rows])
        for r, th in zip(rows, theta):
            r["vartheta"] = float(th)
    return rows


def _mzi_internal(config: dict) -> list[dict]:
    params = config["parameters"]
    H = build_hamiltonian(params["hamiltonian"], "parameters.hamiltonian")
    rho = build_state(params["state"], "parameters.state")
    if H.dim != rho.dim:
        raise ConfigError("parameters.state", f"state dimension {rho.dim} differs from Hamiltonian dimension {H.dim}")
    base_grid = build_grid(params["grid"], "parameters.grid")

    def row(point):
        setting = _absorber(point, "parameters")
        t1 = float(point.get("t1", base_grid.t1))
        grid = build_grid({"t0": base_grid.t0, "t1": t1, "steps": base_grid.steps}, "sweep")
        pair = propagator.evolve(H, grid)
        L, R = pair.final()
        arms = interferometer.ArmConfiguration(setting.z, L, R)
        path = interferometer.relative_phase_visibility_path(rho, pair.L, pair.R, setting.z)[-1]
        point_res = interferometer.relative_phase_visibility(rho, L, R, setting.z)
        block = 4 * interferometer.channel0_block_trace(interferometer.output_state(rho, arms), rho.dim)
        evolved = biortho.evolve_density(rho, L, R)
        exact_error = math.nan
        if H.is_constant:
            L_exact, _ = propagator.evolve_constant(H(grid.t0), grid.t1 - grid.t0)
            exact_error = algebra.max_abs(L - L_exact)
        return {
            "t1": t1, "T": setting.T, "chi": setting.chi,
            **_split("intensity", interferometer.channel0_intensity(rho, arms)),
            **_split("block_intensity", block),
            **_split("Phi", path.phase), **_split("V", path.visibility),
            **_split("Phi_principal", point_res.phase), **_split("V_principal", point_res.visibility),
            **_split("trace", algebra.trace(evolved.matrix_form())),
            "defect": propagator.binorm_defect(pair),
            "exact_error": exact_error,
        }

    return _run_points(config, row)


def _ideal_minus_phase(theta: float) -> complex:
    _, minus = gate.tilted_basis(theta)
    U = gate.ideal_gate(theta)
    return complex(minus.conj() @ U @ minus)


def _gate(config: dict) -> list[dict]:
    params = config["parameters"]
    pipeline = bool(params.get("pipeline", False))
    expansions = bool(params.get("expansions", False))
    steps = int(params.get("steps", 10_000))

    def row(point):
        p = _gate_params(point, "parameters")
        rep = gate.report(p)
        out = {
            "eta": p.eta, "gamma": p.gamma, "theta": p.theta, "r": p.r, "tau": p.tau,
            **_split("Phi", rep.Phi), **_split("V", rep.V),
            **_split("Gamma", rep.Gamma), **_split("Omega", rep.Omega),
            "branch_unwound": float(rep.branch_unwound), "pole_crossing": float(rep.pole_crossing),
            **_split("U_minus", _ideal_minus_phase(p.theta)),
        }
        if expansions:
            out.update(_expansion_columns(p))
        if pipeline:
            out.update(_pipeline_columns(p, steps))
        return out

    return _run_points(config, row)


def _expansion_columns(p: gate.GateParams) -> dict:
    try:
        approx, coef = gate.omega_expansion(p)
    except ComputationError:
        approx, coef = complex(math.nan, math.nan), math.nan
    try:
        phi_im = gate.phi_expansion(p)
    except ComputationError:
        phi_im = math.nan
    return {**_split("Omega_expansion", approx), "Omega_expansion_coef": coef, "Phi_expansion_im": phi_im}


def _pipeline_columns(p: gate.GateParams, steps: int) -> dict:
    H = propagator.Hamiltonian.constant(gate.hamiltonian(p))
    grid = TimeGrid(0.0, p.tau, steps + steps % 2)
    pair = propagator.evolve(H, grid)
    rho = gate.input_state(p)
    conn = geometric.connection(pair, rho, H)
    Gamma = geometric.geometric_phase(pair, rho, conn)
    Phi, V = gate.pipeline_phase_visibility(p)
    plus, _ = gate.tilted_basis(p.theta)
    try:
        cyclic = geometric.cyclic_pure_phase(pair, plus)
    except NotCyclic:
        cyclic = complex(math.nan, math.nan)
    return {
        **_split("Gamma_pipeline", Gamma), **_split("Phi_pipeline", Phi), **_split("V_pipeline", V),
        **_split("Gamma_cyclic_pure", cyclic),
        "defect": pair.max_defect,
    }


def _robustness(config: dict) -> list[dict]:
    params = dict(config["parameters"])
    quantities = params.pop("quantities", ["Omega", "Gamma", "Phi_im"])
    template = _gate_params({**params, "gamma": 0.0}, "parameters")
    gammas = sweep_values(config["sweep"])
    if np.any(gammas <= 0):
        raise ConfigError("sweep.min", "decay rates must be positive for a log-log fit")
    if gammas.size < 7:
        raise ConfigError("sweep.points", "slope fit needs at least 7 decay rates")
    slopes = {}
    diffs = {}
    for q in quantities:
        fn = gate.QUANTITIES[q]
        try:
            slopes[q] = gate.robustness_order(template, q, gammas)
        except ComputationError as exc:
            raise SweepPointError(0, {"quantity": q}, exc) from exc
        base = fn(template)
        diffs[q] = [abs(fn(template.with_(gamma=float(g))) - base) for g in gammas]
    rows = []
    for j, g in enumerate(gammas):
        p = template.with_(gamma=float(g))
        row = {"gamma": float(g)}
        for q in quantities:
            row[f"d_{q}"] = diffs[q][j]
            row[f"slope_{q}"] = slopes[q]
        row.update(_expansion_columns(p))
        omega = gate.solid_angle(p)
        row["Omega_expansion_residual"] = abs(omega - complex(row["Omega_expansion_re"], row["Omega_expansion_im"]))
        rows.append(row)
    return rows


def _random_gauge(rng: SplitMix64, grid: TimeGrid, n: int) -> geometric.GaugeFunction:
    """``z_k = exp(g_k)``, ``g_k(t) = sum_m c_km (1 - cos(m π s)) / 2`` with s the grid fraction.

    ``|Re c_km| <= 0.5`` keeps ``|z_k|`` within ``[e^-1.5, e^1.5]``, inside [0.2, 5].
    """
    coeffs = np.array([[complex(rng.uniform(-0.5, 0.5), rng.uniform(-math.pi, math.pi)) for _ in range(3)]
                       for _ in range(n)])
    span = grid.t1 - grid.t0
    s = (grid.times - grid.t0) / span
    m = np.arange(1, 4)
    shape = (1 - np.cos(np.pi * np.outer(s, m))) / 2
    dshape = (np.pi * m / span) * np.sin(np.pi * np.outer(s, m)) / 2
    g = shape @ coeffs.T
    z = np.exp(g)
    z[0] = 1.0
    return geometric.GaugeFunction(grid, z, (dshape @ coeffs.T) * z)


def _gauge_check(config: dict) -> list[dict]:
    params = config.get("parameters", {})
    if "hamiltonian" in params or "state" in params:
        missing = [k for k in ("hamiltonian", "state", "grid") if k not in params]
        if missing:
            raise ConfigError("parameters", f"missing {missing} for an explicit system")
        H = build_hamiltonian(params["hamiltonian"], "parameters.hamiltonian")
        rho = build_state(params["state"], "parameters.state")
        if H.dim != rho.dim:
            raise ConfigError("parameters.state", "state and Hamiltonian dimensions differ")
        grid = build_grid(params["grid"], "parameters.grid")
    else:
        p = _gate_params(params.get("gate", {"eta": 1.0, "gamma": 0.1, "theta": math.pi / 3, "r": 0.8}),
                         "parameters.gate")
        H = propagator.Hamiltonian.constant(gate.hamiltonian(p))
        rho = gate.input_state(p)
        steps = int(params.get("steps", 2000))
        grid = TimeGrid(0.0, p.tau, steps + steps % 2)
    count = int(params.get("gauges", 100))
    rng = SplitMix64(int(config.get("seed", 0)))

    try:
        pair = propagator.evolve(H, grid)
        conn = geometric.connection(pair, rho, H)
        baseline = geometric.geometric_phase(pair, rho, conn)
        z_par = geometric.parallel_factors(conn)
        par_defect = geometric.parallel_defect(pair, rho, geometric.parallel_gauge(pair, rho, H), H)
    except ComputationError as exc:
        raise SweepPointError(0, {"gauge": "baseline"}, exc) from exc
    factor = np.exp(1j * baseline)
    state_path = pair.L @ rho.matrix_form() @ np.conj(np.swapaxes(pair.R, -1, -2))

    rows = []
    for j in range(count):
        g = _random_gauge(rng, grid, rho.dim)
        try:
            gauged = geometric.gauge_transform(pair, rho, g)
            gamma = geometric.geometric_phase(gauged, rho, geometric.connection(gauged, rho))
        except ComputationError as exc:
            raise SweepPointError(j, {"gauge": j}, exc) from exc
        path = gauged.L @ rho.matrix_form() @ np.conj(np.swapaxes(gauged.R, -1, -2))
        rows.append({
            "gauge": float(j),
            "delta_phase_factor": abs(np.exp(1j * gamma) - factor),
            "delta_state_path": algebra.max_abs(path - state_path),
            "z_abs_min": float(np.abs(g.values).min()),
            "z_abs_max": float(np.abs(g.values).max()),
            **_split("Gamma_baseline", baseline),
            "parallel_defect": par_defect,
            **_split("z_parallel_0", z_par[0]),
        })
    return rows


RUNNERS = {
    "mzi-scalar": _mzi_scalar,
    "mzi-internal": _mzi_internal,
    "gate": _gate,
    "robustness": _robustness,
    "gauge-check": _gauge_check,
}


def run(config: dict) -> ResultTable:
    """Validate ``config`` and evaluate it into a table."""
    config = validate_config(config)
    rows = RUNNERS[config["mode"]](config)
    if not rows:
        return ResultTable((), np.empty((0, 0)), config["mode"])
    columns = tuple(rows[0])
    return ResultTable.from_records(columns, [[r[c] for c in columns] for r in rows], config["mode"])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="dissint", description="Dissipative interferometry scenarios.")
    parser.add_argument("config", help="scenario JSON file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=FORMATS, help="table format (default csv)")
    parser.add_argument("--seed", type=int, help="PRNG seed for gauge-check")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed", "seed must be nonnegative")
        if args.seed is not None:
            config["seed"] = args.seed
        output = config.get("output", {})
        fmt = args.format or output.get("format", "csv")
        out_path = args.out or output.get("path")
        text = emit(run(config), fmt)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ComputationError, DissintError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 3
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
