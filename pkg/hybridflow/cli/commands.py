"""Command implementations behind the hybridflow CLI"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict

import numpy as np
import pandas as pd

from hybridflow.brackets.checks import closure_check, commutator_check
from hybridflow.cli.builders import (
    build_density,
    build_initial_state,
    build_model,
    build_observables,
    build_params,
    build_perturbation,
    build_sampler,
)
from hybridflow.cli.config import RunConfig
from hybridflow.dynamics.flow import trajectory
from hybridflow.dynamics.tangibility import tangibility_experiment
from hybridflow.ensemble.density import normalization, normalization_tolerance, uses_tensor_rule
from hybridflow.ensemble.liouville import liouville_propagate, positivity_normalization_report
from hybridflow.models.bilinear import (
    TRUNCATION_TOL,
    build_bilinear,
    closed_set_series,
    ehrenfest_reference,
    fit_normal_modes,
    normal_mode_frequencies,
    truncation_occupation,
)
from hybridflow.phase_space.operations import decode_state, state_to_dict
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

CONSTRAINT_TOL = 1e-10
DENSITY_TOL = 1e-8
BENCHMARK_TOL = 1e-8
FREQUENCY_TOL = 1e-6


@dataclass
class CommandResult:
    """JSON report, CSV tables keyed by relative path stem, and the property verdict"""

    report: Dict[str, Any]
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    passed: bool = True


def _constraint_tol(cfg: RunConfig) -> float:
    return float(cfg.numerics.get("constraint_tol", CONSTRAINT_TOL))


def simulate(cfg: RunConfig) -> CommandResult:
    model, _ = build_model(cfg.model)
    h0 = build_initial_state(cfg.initial_state, model)
    traj = trajectory(
        model,
        h0,
        cfg.T,
        cfg.dt,
        method=cfg.method,
        renormalize_every=cfg.numerics.get("renormalize_every"),
    )
    checks = {
        "constraint": {
            "value": traj.max_constraint_drift(),
            "tolerance": _constraint_tol(cfg),
        }
    }
    if cfg.numerics.get("energy_tol") is not None:
        checks["energy"] = {
            "value": traj.max_energy_drift(),
            "tolerance": float(cfg.numerics["energy_tol"]),
        }
    for check in checks.values():
        check["passed"] = check["value"] <= check["tolerance"]
    passed = all(check["passed"] for check in checks.values())
    report = {
        "model": model.name,
        "n": model.n,
        "N": model.N,
        "trajectory": traj.summary(),
        "initial_state": state_to_dict(h0),
        "final_state": state_to_dict(traj.final),
        "checks": checks,
        "passed": passed,
    }
    tables = {}
    if cfg.output.get("trajectory_csv", True):
        tables["trajectory"] = traj.to_dataframe()
    return CommandResult(report, tables, passed)


def ensemble(cfg: RunConfig) -> CommandResult:
    model, _ = build_model(cfg.model)
    dens = build_density(cfg.density, model.n)
    sampler = build_sampler(cfg.sampler, model.n, cfg.seed)
    observables = build_observables(cfg.observables, model)
    total = normalization(dens, center=sampler.proposal.mean, width=sampler.proposal.width)
    norm_tol = normalization_tolerance(dens.n)
    if abs(total - 1.0) > norm_tol:
        logger.warning(f"Density weights integrate to {total:.17g}, not 1")
    run = liouville_propagate(
        model,
        dens,
        sampler,
        cfg.T,
        cfg.dt,
        observables,
        method=cfg.method,
        workers=cfg.numerics.get("workers"),
    )
    positivity = positivity_normalization_report(run)
    deviation = run.max_density_deviation()
    passed = (
        positivity.passed
        and deviation <= DENSITY_TOL
        and abs(total - 1.0) <= norm_tol
    )
    report = {
        "model": model.name,
        "seed": cfg.seed,
        "ensemble": run.summary(),
        "positivity": positivity.to_dict(),
        "density_tolerance": DENSITY_TOL,
        "normalization": {
            "value": total,
            "residual": abs(total - 1.0),
            "tolerance": norm_tol,
            "rule": "gauss-hermite" if uses_tensor_rule(dens.n) else "sobol",
        },
        "samples": [
            {
                "index": s.index,
                "component": s.component + 1,
                "weight": float(run.weights[i]),
                "initial_state": state_to_dict(s.point),
            }
            for i, s in enumerate(run.samples)
        ],
        "passed": passed,
    }
    tables = {"ensemble": run.to_dataframe()}
    if cfg.output.get("sample_csv", False):
        for s, traj in zip(run.samples, run.trajectories):
            tables[f"samples/sample_{s.index + 1:04d}"] = traj.to_dataframe()
    return CommandResult(report, tables, passed)


def bracket_check(cfg: RunConfig) -> CommandResult:
    result = commutator_check(cfg.seed, int(cfg.check["N"]), int(cfg.check["pairs"]))
    return CommandResult(result, passed=result["passed"])


def closure(cfg: RunConfig) -> CommandResult:
    result = closure_check(
        cfg.seed,
        int(cfg.check["n"]),
        int(cfg.check["N"]),
        int(cfg.check["pairs"]),
        int(cfg.check["points"]),
    )
    return CommandResult(result, passed=result["passed"])


def benchmark_peres_terno(cfg: RunConfig) -> CommandResult:
    """Bilinear hybrid flow against the exact closed system of first moments"""
    params = build_params(cfg.model)
    model = build_bilinear(params)
    h0 = build_initial_state(cfg.initial_state, model)
    traj = trajectory(model, h0, cfg.T, cfg.dt, method=cfg.method)
    series = closed_set_series(traj, model.basis)
    reference = ehrenfest_reference(params, series[0], traj.times)
    deviation = float(np.max(np.abs(series - reference)))

    fitted = fit_normal_modes(series, traj.metadata["dt"])
    expected = normal_mode_frequencies(params)
    frequency_error = float(np.max(np.abs(fitted - expected)))
    occupation = max(truncation_occupation(decode_state(h.qm), model.N - 2) for h in traj.states)

    passed = (
        deviation <= BENCHMARK_TOL
        and frequency_error <= FREQUENCY_TOL
        and occupation <= TRUNCATION_TOL
    )
    if occupation > TRUNCATION_TOL:
        logger.warning(f"Truncation occupation {occupation:.3e} exceeds {TRUNCATION_TOL:g}")
    logger.info(
        f"Benchmark: max deviation {deviation:.3e}, frequency error {frequency_error:.3e}"
    )
    n = params.n
    columns = [f"x_{k + 1}" for k in range(n)] + [f"p_{k + 1}" for k in range(n)]
    columns += ["X_mean", "P_mean"]
    table = pd.DataFrame({"t": traj.times})
    for j, name in enumerate(columns):
        table[name] = series[:, j]
        table[f"{name}_ref"] = reference[:, j]
    report = {
        "model": model.name,
        "lam": list(params.lam),
        "N": params.N,
        "max_deviation": deviation,
        "deviation_tolerance": BENCHMARK_TOL,
        "fitted_frequencies": fitted,
        "expected_frequencies": expected,
        "frequency_error": frequency_error,
        "frequency_tolerance": FREQUENCY_TOL,
        "max_truncation_occupation": occupation,
        "trajectory": traj.summary(),
        "passed": passed,
    }
    return CommandResult(report, {"benchmark-peres-terno": table}, passed)


def tangibility(cfg: RunConfig) -> CommandResult:
    model, _ = build_model(cfg.model)
    h0 = build_initial_state(cfg.initial_state, model)
    perturbation = build_perturbation(cfg.perturbation)
    result = tangibility_experiment(
        model, h0, perturbation.t0, perturbation, cfg.T, cfg.dt, method=cfg.method
    )
    constraint_ok = result.max_constraint_drift <= _constraint_tol(cfg)
    passed = result.passed and constraint_ok
    report = {
        "model": model.name,
        "perturbation": {
            "t0": perturbation.t0,
            "target": f"{perturbation.kind}_{perturbation.index + 1}",
            "profile": perturbation.name,
            "derivative_bound": perturbation.derivative_bound,
        },
        "tangibility": result.summary(),
        "constraint_tolerance": _constraint_tol(cfg),
        "trajectory": result.perturbed.summary(),
        "passed": passed,
    }
    table = pd.DataFrame(
        {
            "t": result.perturbed.times,
            "z": result.z_series,
            "z_unperturbed": result.z_unperturbed,
        }
    )
    return CommandResult(report, {"tangibility": table}, passed)


COMMAND_MAP: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "simulate": simulate,
    "ensemble": ensemble,
    "bracket-check": bracket_check,
    "benchmark-peres-terno": benchmark_peres_terno,
    "tangibility": tangibility,
    "closure-check": closure,
}
