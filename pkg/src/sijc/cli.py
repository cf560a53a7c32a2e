"""Config-driven scenario runner.

Subcommands: spectrum, evolve, inversion, verify.  A JSON config fully
determines each run; outputs are CSV time series plus a JSON diagnostics
report with deterministic, byte-stable formatting (shortest round-trip
floats, sorted keys, LF endings).  Exit codes: 0 success, 1 verification or
tolerance failure, 2 config error (the message names the offending field).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import evolution, inversion, oracle, spectrum, twochannel
from .models import ShapeInvariantModel, build_ladder, validate_model
from .twochannel import PHASE_MINUS_I, PHASE_PLUS_I

OUTPUT_DIR_ENV = "SIJC_OUTPUT_DIR"

_PHASE_NAMES = {"paper_plus_i": PHASE_PLUS_I, "oracle_minus_i": PHASE_MINUS_I}

DEFAULT_TOLERANCES = {
    "hermiticity": 1e-13,
    "spectrum_pairing": 1e-10,
    "spectrum_eigenvector": 1e-10,
    "orthonormality": 1e-12,
    "cross_branch": 1e-12,
    "ratio_relation": 1e-12,
    "lambda_consistency": 1e-12,
    "branch_gap": 1e-12,
    "identity_suite": 1e-12,
    "propagator_t0": 1e-15,
    "second_order_residual": 1e-6,
    "second_order_ratio": 1.0 / 3.5,
    "unitarity_paired": 1e-10,
    "ansatz_conditions": 1e-10,
    "resonant_oracle_supnorm": 1e-9,
    "f_dual_path": 1e-10,
    "fxy_vs_quadrature": 1e-8,
    "kernel_vs_quadrature": 1e-9,
    "sigmap_t0": 1e-14,
    "sigmap_rate_t0": 1e-9,
    "sigmap_ode": 1e-5,
    "sigma3_t0": 1e-15,
    "resonant_inversion_oracle": 1e-8,
    "jc_consistency": 1e-12,
    "series_tail": 1e-9,
}


class ConfigError(ValueError):
    """Invalid or missing config field; carries the dotted field path."""

    def __init__(self, path, message):
        super().__init__(f"config error at {path}: {message}")
        self.path = path


@dataclass
class RunConfig:
    model: ShapeInvariantModel
    levels: int
    t_start: float
    t_stop: float
    t_steps: int
    series_order: int
    phase: str
    phase_name: str
    initial_state_spec: dict
    tolerances: dict
    output_dir: Path
    fd_step: float
    raw: dict = field(repr=False, default_factory=dict)

    def time_grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_stop, self.t_steps)

    def tolerance(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def initial_state(self) -> np.ndarray:
        return build_initial_state(self.initial_state_spec, self.levels)


def _section(raw, name, required=True):
    value = raw.get(name)
    if value is None:
        if required:
            raise ConfigError(name, "missing required section")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(name, f"expected an object, got {type(value).__name__}")
    return value


def _number(section, section_name, key, default=None, required=False):
    if key not in section:
        if required:
            raise ConfigError(f"{section_name}.{key}", "missing required value")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section_name}.{key}", f"expected a number, got {value!r}")
    return float(value)


def parse_config(raw: dict) -> RunConfig:
    """Validate a raw config mapping; raises ConfigError naming the bad field."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")

    model_sec = _section(raw, "model")
    kind = model_sec.get("kind")
    if kind is None:
        raise ConfigError("model.kind", "missing required value")
    if kind not in ("harmonic", "morse_class", "scaling_class"):
        raise ConfigError("model.kind", f"unknown model kind {kind!r}")
    param_keys = {"harmonic": ["omega"], "morse_class": ["c1", "c2"], "scaling_class": ["r1", "q"]}[kind]
    params = {k: _number(model_sec, "model", k, required=True) for k in param_keys}

    coupling = _section(raw, "coupling")
    omega_coupling = _number(coupling, "coupling", "Omega", required=True)
    delta = _number(coupling, "coupling", "Delta", default=0.0)
    constants = _section(raw, "constants", required=False)
    hbar = _number(constants, "constants", "hbar", default=1.0)

    try:
        model = ShapeInvariantModel(kind, params, omega_coupling, delta, hbar)
    except ValueError as exc:
        raise ConfigError("model", str(exc)) from exc

    trunc = _section(raw, "truncation", required=False)
    levels = int(_number(trunc, "truncation", "N", default=8.0))
    if levels < 3:
        raise ConfigError("truncation.N", f"must be >= 3, got {levels}")
    report = validate_model(model, levels)
    if not report.valid:
        raise ConfigError("truncation.N", str(report))

    time_sec = _section(raw, "time", required=False)
    t_start = _number(time_sec, "time", "start", default=0.0)
    t_stop = _number(time_sec, "time", "stop", default=2.0)
    t_steps_f = _number(time_sec, "time", "steps", default=41.0)
    t_steps = int(t_steps_f)
    if t_steps < 1:
        raise ConfigError("time.steps", f"must be >= 1, got {t_steps}")
    if not (t_stop > t_start >= 0.0):
        raise ConfigError("time", f"need stop > start >= 0, got start={t_start}, stop={t_stop}")

    series = _section(raw, "series", required=False)
    order = int(_number(series, "series", "order", default=40.0))
    if order < 1:
        raise ConfigError("series.order", f"must be >= 1, got {order}")

    phase_name = raw.get("phase_convention", "oracle_minus_i")
    if phase_name not in _PHASE_NAMES:
        raise ConfigError(
            "phase_convention", f"expected one of {sorted(_PHASE_NAMES)}, got {phase_name!r}"
        )

    state_spec = raw.get("initial_state", {"channel": "down", "level": 1})
    if not isinstance(state_spec, dict):
        raise ConfigError("initial_state", "expected an object")
    build_initial_state(state_spec, levels)  # validate eagerly

    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances", "expected an object of name -> number")
    for name, value in tolerances.items():
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"tolerances.{name}", "unknown tolerance name")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"tolerances.{name}", f"expected a number, got {value!r}")

    output = _section(raw, "output", required=False)
    out_dir = output.get("dir", "sijc-out")
    if not isinstance(out_dir, str):
        raise ConfigError("output.dir", f"expected a string, got {out_dir!r}")
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        out_dir = env_dir

    diag = _section(raw, "diagnostics", required=False)
    fd_step = _number(diag, "diagnostics", "fd_step", default=1e-3)
    if fd_step <= 0:
        raise ConfigError("diagnostics.fd_step", f"must be > 0, got {fd_step}")

    return RunConfig(
        model=model,
        levels=levels,
        t_start=t_start,
        t_stop=t_stop,
        t_steps=t_steps,
        series_order=order,
        phase=_PHASE_NAMES[phase_name],
        phase_name=phase_name,
        initial_state_spec=state_spec,
        tolerances={k: float(v) for k, v in tolerances.items()},
        output_dir=Path(out_dir),
        fd_step=fd_step,
        raw=raw,
    )


def build_initial_state(spec: dict, levels: int) -> np.ndarray:
    """Initial two-channel amplitude vector; normalized after parsing."""
    if "amplitudes" in spec:
        amps = spec["amplitudes"]
        if not isinstance(amps, list) or not all(
            isinstance(a, (int, float)) and not isinstance(a, bool) for a in amps
        ):
            raise ConfigError("initial_state.amplitudes", "expected a list of numbers")
        if len(amps) != 2 * levels - 1:
            raise ConfigError(
                "initial_state.amplitudes",
                f"expected length {2 * levels - 1} for N = {levels}, got {len(amps)}",
            )
        vec = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ConfigError("initial_state.amplitudes", "zero vector cannot be normalized")
        return vec / norm
    channel = spec.get("channel")
    if channel not in ("up", "down"):
        raise ConfigError("initial_state.channel", f"expected 'up' or 'down', got {channel!r}")
    level = spec.get("level")
    if isinstance(level, bool) or not isinstance(level, int):
        raise ConfigError("initial_state.level", f"expected an integer, got {level!r}")
    try:
        if channel == "up":
            return twochannel.upper_basis_state(levels, level)
        return twochannel.lower_basis_state(levels, level)
    except ValueError as exc:
        raise ConfigError("initial_state.level", str(exc)) from exc


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("<file>", f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from exc
    return parse_config(raw)


# ---------------------------------------------------------------------------
# deterministic serialization


def fmt(x) -> str:
    """Shortest round-trip decimal for a float; plain str for ints/strings."""
    if isinstance(x, (np.floating, float)):
        return repr(float(x))
    return str(x)


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def write_json(path: Path, obj):
    path.write_text(
        json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )


def _model_summary(config: RunConfig) -> dict:
    return {
        "kind": config.model.kind,
        "params": dict(config.model.params),
        "Omega": config.model.Omega,
        "Delta": config.model.Delta,
        "hbar": config.model.hbar,
        "N": config.levels,
        "phase_convention": config.phase_name,
    }


# ---------------------------------------------------------------------------
# subcommands


def run_spectrum(config: RunConfig) -> int:
    """Write spectrum.csv (one row per pair plus the m = -1 singlet row) and diagnostics."""
    model = config.model
    ladder = build_ladder(model, config.levels)
    table = spectrum.analytic_spectrum(ladder, model.Omega, model.Delta, model.hbar)
    parts = twochannel.build_hamiltonian(ladder, model.Omega, model.Delta, model.hbar)
    comparison = spectrum.oracle_comparison(table, parts)
    invariants = spectrum.spectrum_invariant_residuals(table)

    header = [
        "model", "m",
        "E_analytic_plus", "E_analytic_minus",
        "C_up_plus", "C_low_plus",
        "lambda_plus", "lambda_minus",
        "E_oracle_plus", "E_oracle_minus",
        "abs_residual",
    ]
    rows = []
    for m in range(table.pair_count):
        residual = max(
            abs(table.energies_plus[m] - comparison.oracle_plus[m]),
            abs(table.energies_minus[m] - comparison.oracle_minus[m]),
        )
        rows.append(
            [
                model.kind, m,
                table.energies_plus[m], table.energies_minus[m],
                table.c_up_plus[m], table.c_low_plus[m],
                table.lambda_plus[m], table.lambda_minus[m],
                comparison.oracle_plus[m], comparison.oracle_minus[m],
                residual,
            ]
        )
    singlet_residual = abs(table.singlet_energy - comparison.oracle_singlet)
    rows.append(
        [
            model.kind, -1,
            table.singlet_energy, table.singlet_energy,
            0.0, 1.0,
            table.singlet_energy, table.singlet_energy,
            comparison.oracle_singlet, comparison.oracle_singlet,
            singlet_residual,
        ]
    )

    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_csv(config.output_dir / "spectrum.csv", header, rows)

    tol = config.tolerance("spectrum_pairing")
    ok = comparison.pairing_residual <= tol and singlet_residual <= tol
    write_json(
        config.output_dir / "diagnostics.json",
        {
            "command": "spectrum",
            "model": _model_summary(config),
            "pairing_residual": comparison.pairing_residual,
            "eigenvector_residual": comparison.eigenvector_residual,
            "invariants": invariants,
            "tolerance": tol,
            "pass": ok,
        },
    )
    return 0 if ok else 1


def run_evolve(config: RunConfig) -> int:
    """Write evolution.csv with per-sample propagator residuals and diagnostics."""
    model = config.model
    ladder = build_ladder(model, config.levels)
    samples = evolution.propagator_diagnostics(
        ladder, model.Omega, model.Delta, model.hbar,
        config.time_grid(), config.phase, config.fd_step,
    )
    header = [
        "t", "first_order_residual", "second_order_residual",
        "unitarity_paired", "singlet_deviation", "oracle_supnorm",
    ]
    rows = [
        [s.t, s.residual_first_order, s.residual_second_order,
         s.residual_unitarity, s.singlet_deviation, s.oracle_supnorm]
        for s in samples
    ]
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_csv(config.output_dir / "evolution.csv", header, rows)

    max_second = max(s.residual_second_order for s in samples)
    max_unitarity = max(s.residual_unitarity for s in samples)
    max_first = max(s.residual_first_order for s in samples)
    max_supnorm = max(s.oracle_supnorm for s in samples)
    checks = {
        "second_order_residual": {
            "residual": max_second, "tolerance": config.tolerance("second_order_residual"),
        },
        "unitarity_paired": {
            "residual": max_unitarity, "tolerance": config.tolerance("unitarity_paired"),
        },
    }
    if model.Delta == 0.0:
        checks["resonant_oracle_supnorm"] = {
            "residual": max_supnorm, "tolerance": config.tolerance("resonant_oracle_supnorm"),
        }
    for check in checks.values():
        check["pass"] = check["residual"] <= check["tolerance"]
    ok = all(c["pass"] for c in checks.values())
    write_json(
        config.output_dir / "diagnostics.json",
        {
            "command": "evolve",
            "model": _model_summary(config),
            "fd_step": config.fd_step,
            "checks": checks,
            "informational": {
                "first_order_residual": max_first,
                "oracle_supnorm": max_supnorm,
                "singlet_deviation": max(s.singlet_deviation for s in samples),
            },
            "pass": ok,
        },
    )
    return 0 if ok else 1


def run_inversion(config: RunConfig, strict=False) -> int:
    """Write inversion.csv (both W routes, their gap, and the series tail bound)."""
    model = config.model
    ladder = build_ladder(model, config.levels)
    state = config.initial_state()
    series = inversion.inversion_series(
        ladder, model.Omega, model.Delta, model.hbar,
        state, config.time_grid(), config.series_order, config.phase,
    )
    header = ["t", "W_paper", "W_oracle", "abs_diff", "series_tail_bound"]
    rows = [
        [series.t_grid[i], series.w_paper[i], series.w_oracle[i],
         series.abs_diff[i], series.tail_bounds[i]]
        for i in range(len(series.t_grid))
    ]
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_csv(config.output_dir / "inversion.csv", header, rows)

    tail_tol = config.tolerance("series_tail")
    flagged = [i for i in range(len(series.t_grid)) if series.tail_bounds[i] > tail_tol]
    write_json(
        config.output_dir / "diagnostics.json",
        {
            "command": "inversion",
            "model": _model_summary(config),
            "series_order": series.series_order,
            "imag_leakage": series.imag_leakage,
            "max_abs_diff": float(np.max(series.abs_diff)),
            "max_tail_bound": float(np.max(series.tail_bounds)),
            "tail_tolerance": tail_tol,
            "flagged_rows": flagged,
            "strict": bool(strict),
        },
    )
    return 1 if (strict and flagged) else 0


def _verify_checks(config: RunConfig):
    """Assemble the full verification battery for one config.

    Returns (checks, informational): checks maps name -> {residual,
    tolerance, pass}; informational entries are reported but never gate the
    exit code (known representation deviations and detuned-case data).
    """
    model = config.model
    ladder = build_ladder(model, config.levels)
    parts = twochannel.build_hamiltonian(ladder, model.Omega, model.Delta, model.hbar)
    checks = {}
    info = {}

    def add(name, residual, tol_name):
        checks[name] = {"residual": float(residual), "tolerance": config.tolerance(tol_name)}

    # spectrum closed forms vs brute force
    table = spectrum.analytic_spectrum(ladder, model.Omega, model.Delta, model.hbar)
    comparison = spectrum.oracle_comparison(table, parts)
    invariants = spectrum.spectrum_invariant_residuals(table)
    scale = max(float(np.max(np.abs(parts.total.matrix))), 1.0)
    add("hermiticity", parts.total.hermiticity_residual() / scale, "hermiticity")
    add("spectrum_pairing", comparison.pairing_residual, "spectrum_pairing")
    add("spectrum_eigenvector", comparison.eigenvector_residual, "spectrum_eigenvector")
    add("orthonormality", invariants["orthonormality"], "orthonormality")
    add("cross_branch", invariants["cross_branch"], "cross_branch")
    add("ratio_relation", invariants["ratio_relation"], "ratio_relation")
    add("lambda_consistency", invariants["lambda_consistency"], "lambda_consistency")
    add("branch_gap", invariants["branch_gap"], "branch_gap")
    if model.kind == "harmonic":
        omega = model.params["omega"]
        add(
            "jc_consistency",
            spectrum.standard_jc_consistency(
                omega, omega - model.Delta, model.Omega, config.levels - 2, model.hbar
            ),
            "jc_consistency",
        )

    # operator identity suite
    suite = twochannel.identity_suite(ladder, model.Omega, model.Delta, model.hbar)
    add("identity_suite", suite.max_residual, "identity_suite")
    info["cdagc_ground_deviation"] = suite.informational["cdagc_ground_deviation"]

    # propagator diagnostics on a thinned grid
    grid = config.time_grid()
    thin = grid[:: max(1, len(grid) // 20)]
    samples = evolution.propagator_diagnostics(
        ladder, model.Omega, model.Delta, model.hbar, thin, config.phase, config.fd_step
    )
    samples_half = evolution.propagator_diagnostics(
        ladder, model.Omega, model.Delta, model.hbar, thin, config.phase, config.fd_step / 2.0
    )
    u0 = evolution.paper_propagator(
        ladder, model.Omega, model.Delta, model.hbar, 0.0, config.phase
    )
    add(
        "propagator_t0",
        float(np.max(np.abs(u0.matrix - np.eye(u0.dim)))),
        "propagator_t0",
    )
    max_second = max(s.residual_second_order for s in samples)
    max_second_half = max(s.residual_second_order for s in samples_half)
    add("second_order_residual", max_second, "second_order_residual")
    ratio = max_second_half / max_second if max_second > 0 else 0.0
    add("second_order_ratio", ratio, "second_order_ratio")
    add("unitarity_paired", max(s.residual_unitarity for s in samples), "unitarity_paired")
    conditions = evolution.ansatz_condition_residuals(
        ladder, model.Omega, model.Delta, model.hbar, float(grid[-1]), config.phase
    )
    add("ansatz_conditions", max(conditions.values()), "ansatz_conditions")
    info["first_order_residual"] = max(s.residual_first_order for s in samples)
    info["singlet_unitarity_deviation"] = max(s.singlet_deviation for s in samples)
    if model.Delta == 0.0 and config.phase == PHASE_MINUS_I:
        add(
            "resonant_oracle_supnorm",
            max(s.oracle_supnorm for s in samples),
            "resonant_oracle_supnorm",
        )
    else:
        info["oracle_supnorm"] = max(s.oracle_supnorm for s in samples)

    # series evaluator vs quadrature on a fixed deterministic sample
    rng = np.random.default_rng(20401)
    worst_f = 0.0
    for _ in range(12):
        x, w = rng.uniform(-5.0, 5.0, size=2)
        t = rng.uniform(0.2, 2.0)
        for kind in inversion.FXY_KINDS:
            series_val = float(inversion.fxy_series(kind, t, x, w, order=40).values)
            quad_val = oracle.trig_product_integral(kind, t, x, w)
            worst_f = max(worst_f, abs(series_val - quad_val))
    add("fxy_vs_quadrature", worst_f, "fxy_vs_quadrature")

    worst_k = 0.0
    kernel_cases = [(1.3, 2.1, 1.1), (0.4, 3.0, 0.9), (2.5, 2.5 + 1e-9, 1.7)]
    for a, r, t in kernel_cases:
        worst_k = max(worst_k, abs(inversion.kernel_sin(t, a, r) - oracle.green_kernel_integral("S", t, a, r)))
        worst_k = max(worst_k, abs(inversion.kernel_cos(t, a, r) - oracle.green_kernel_integral("C", t, a, r)))
    add("kernel_vs_quadrature", worst_k, "kernel_vs_quadrature")

    # inversion source and particular solution
    t_probe = min(0.5, float(grid[-1]))
    pair = inversion.f_matrix(
        ladder, model.Omega, model.Delta, model.hbar, t_probe, config.phase
    )
    add("f_dual_path", pair.discrepancy, "f_dual_path")

    p0 = inversion.particular_solution(
        ladder, model.Omega, model.Delta, model.hbar, 0.0, 30, config.phase
    )
    add("sigmap_t0", float(np.max(np.abs(p0.as_operator().matrix))), "sigmap_t0")
    h = config.fd_step

    def sigma_p_at(time):
        return inversion.particular_solution(
            ladder, model.Omega, model.Delta, model.hbar, time, 30, config.phase
        ).as_operator().matrix

    rate0 = oracle.fd_derivative(sigma_p_at, 0.0, h, order=1)
    add("sigmap_rate_t0", float(np.max(np.abs(rate0))), "sigmap_rate_t0")

    freqs = inversion.rabi_frequencies(ladder, model.Omega, model.hbar)
    nu_sq = np.concatenate([freqs.nu1**2, freqs.nu2**2])
    d2 = oracle.fd_derivative(sigma_p_at, t_probe, h, order=2)
    ode_residual = np.max(np.abs(d2 + nu_sq[:, None] * sigma_p_at(t_probe) - pair.direct.matrix))
    add("sigmap_ode", float(ode_residual), "sigmap_ode")

    s3_0 = inversion.sigma3(
        ladder, model.Omega, model.Delta, model.hbar, 0.0, None, config.series_order, config.phase
    )
    sigma3_init = twochannel.sigma3_operator(config.levels)
    add(
        "sigma3_t0",
        float(np.max(np.abs(s3_0.matrix - sigma3_init.matrix))),
        "sigma3_t0",
    )

    state = config.initial_state()
    w_grid = grid[:: max(1, len(grid) // 10)]
    series = inversion.inversion_series(
        ladder, model.Omega, model.Delta, model.hbar, state, w_grid,
        config.series_order, config.phase,
    )
    if model.Delta == 0.0:
        add("resonant_inversion_oracle", float(np.max(series.abs_diff)), "resonant_inversion_oracle")
    else:
        info["sigma3_oracle_deviation"] = float(np.max(series.abs_diff))
    info["inversion_imag_leakage"] = series.imag_leakage

    if model.kind == "harmonic":
        omega = model.params["omega"]
        info["jc76_vs_series"] = inversion.jc_vs_series_discrepancy(
            omega, omega - model.Delta, model.Omega, model.hbar, t_probe,
            config.levels, config.series_order,
        )

    # quadrature self-test: a tighter tolerance must not move the result
    probe = oracle.trig_product_integral("CS", 1.0, 1.3, 2.7, tol=1e-10)
    probe_tight = oracle.trig_product_integral("CS", 1.0, 1.3, 2.7, tol=1e-11)
    info["quadrature_selftest"] = abs(probe - probe_tight)

    for check in checks.values():
        check["pass"] = check["residual"] <= check["tolerance"]
    return checks, info


def run_verify(config: RunConfig) -> int:
    """Run the verification battery, write verify.json, print one line per check."""
    checks, info = _verify_checks(config)
    ok = all(c["pass"] for c in checks.values())
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_json(
        config.output_dir / "verify.json",
        {
            "command": "verify",
            "model": _model_summary(config),
            "checks": checks,
            "informational": info,
            "pass": ok,
        },
    )
    for name in sorted(checks):
        check = checks[name]
        status = "PASS" if check["pass"] else "FAIL"
        print(f"{status} {name}: residual={fmt(check['residual'])} tolerance={fmt(check['tolerance'])}")
    for name in sorted(info):
        print(f"INFO {name}: {fmt(info[name])}")
    print(f"verify: {'all mandatory checks passed' if ok else 'FAILURES present'}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sijc",
        description="Shape-invariant two-channel ladder systems: spectra, evolution, inversion, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "closed-form spectrum table vs brute-force eigenvalues"),
        ("evolve", "closed-form propagator residual diagnostics"),
        ("inversion", "population inversion by both routes"),
        ("verify", "full verification battery with exit-code semantics"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a JSON run config")
        p.add_argument("--strict", action="store_true", help="flagged rows fail the run")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2

    try:
        if args.command == "spectrum":
            return run_spectrum(config)
        if args.command == "evolve":
            return run_evolve(config)
        if args.command == "inversion":
            return run_inversion(config, strict=args.strict)
        return run_verify(config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
