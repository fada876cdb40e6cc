"""Liouville propagation of hybrid densities along characteristics"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from hybridflow.dynamics.flow import Trajectory, as_method, trajectory
from hybridflow.dynamics.integrator import Method, cayley_step, split_vector
from hybridflow.dynamics.model import ModelSpec
from hybridflow.ensemble.density import DensitySpec
from hybridflow.ensemble.sampling import Sample, SamplerSpec, draw_samples
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.phase_space.operations import decode_state
from hybridflow.utils.errors import DimensionMismatchError, StepFailureError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

DENSITY_FLOOR = -1e-12
WEIGHT_SUM_TOL = 1e-12


@dataclass
class EnsembleRun:
    """Characteristics of a sampled density and the ensemble averages along them"""

    times: np.ndarray
    samples: List[Sample]
    weights: np.ndarray
    trajectories: List[Trajectory]
    density_series: np.ndarray
    observable_names: List[str]
    means: np.ndarray
    stderr: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def max_density_deviation(self) -> float:
        """max over samples and times of |rho(t) - rho(0)| along the characteristic"""
        return float(np.max(np.abs(self.density_series - self.density_series[:, :1])))

    def weight_sum_residual(self) -> float:
        return abs(float(np.sum(self.weights)) - 1.0)

    def to_dataframe(self) -> pd.DataFrame:
        """Per-time ensemble means and standard errors"""
        df = pd.DataFrame({"t": self.times})
        for k, name in enumerate(self.observable_names):
            df[f"mean_{name}"] = self.means[k]
            df[f"stderr_{name}"] = self.stderr[k]
        return df

    def summary(self) -> Dict[str, Any]:
        return {
            "samples": len(self.samples),
            "times": len(self.times),
            "t_final": float(self.times[-1]),
            "observables": {
                name: {
                    "mean_final": float(self.means[k, -1]),
                    "stderr_final": float(self.stderr[k, -1]),
                }
                for k, name in enumerate(self.observable_names)
            },
            "max_density_deviation": self.max_density_deviation(),
            "weight_sum_residual": self.weight_sum_residual(),
            "max_constraint_drift": max(t.max_constraint_drift() for t in self.trajectories),
            "metadata": self.metadata,
        }


def _characteristic(
    model: ModelSpec, dens: DensitySpec, sample: Sample, T: float, dt: float, method: Method
) -> Tuple[Trajectory, np.ndarray]:
    """Integrate one sample and the carried density value

    The projector states are pushed through the same Cayley maps as the sample's
    quantum state; the weights stay at their initial classical point.
    """
    H = model.hamiltonian
    n = model.n
    states = [np.array(s, dtype=complex) for s in dens.states]
    snapshots = [list(states)]

    def co_evolve(y0: np.ndarray, y1: np.ndarray, h: float) -> None:
        x0, p0, _ = split_vector(y0, n)
        x1, p1, _ = split_vector(y1, n)
        G = H.matrix(0.5 * (x0 + x1), 0.5 * (p0 + p1))
        states[:] = [cayley_step(G, s, h) for s in states]

    def record(y: np.ndarray, t_prev: float, t_next: float) -> np.ndarray:
        snapshots.append(list(states))
        return y

    traj = trajectory(
        model, sample.point, T, dt, method=method, hook=record, on_substep=co_evolve
    )
    w0 = dens.weights_at(sample.point.cl.x, sample.point.cl.p)
    rho = np.array(
        [
            float(np.dot(w0, [abs(np.vdot(s, decode_state(h.qm))) ** 2 for s in snap]))
            for h, snap in zip(traj.states, snapshots)
        ]
    )
    return traj, rho


def _run_characteristic(
    model: ModelSpec, dens: DensitySpec, sample: Sample, T: float, dt: float, method: Method
) -> Tuple[Trajectory, np.ndarray]:
    try:
        return _characteristic(model, dens, sample, T, dt, method)
    except StepFailureError:
        logger.error(f"Characteristic of sample {sample.index} failed")
        raise


def liouville_propagate(
    model: ModelSpec,
    dens: DensitySpec,
    sampler: SamplerSpec,
    T: float,
    dt: float,
    observables: Sequence[HybridObservable] = (),
    method: Union[str, Method] = Method.MIDPOINT,
    workers: Optional[int] = None,
) -> EnsembleRun:
    """Sample the density and follow every characteristic of the hybrid flow

    With ``workers`` > 1 characteristics run in joblib worker processes; results
    are collected in sample order.
    """
    if (dens.n, dens.N) != (model.n, model.N):
        raise DimensionMismatchError("density dimensions", (model.n, model.N), (dens.n, dens.N))
    for obs in observables:
        if (obs.n, obs.N) != (model.n, model.N):
            raise DimensionMismatchError(
                f"observable {obs.name!r}", (model.n, model.N), (obs.n, obs.N)
            )
    method = as_method(method)
    samples = draw_samples(dens, sampler)

    if workers and workers > 1:
        results = Parallel(n_jobs=workers)(
            delayed(_run_characteristic)(model, dens, s, T, dt, method) for s in samples
        )
    else:
        results = [_run_characteristic(model, dens, s, T, dt, method) for s in samples]

    trajectories = [r[0] for r in results]
    density_series = np.array([r[1] for r in results])
    weights = np.array([s.weight for s in samples])
    times = trajectories[0].times

    names = [obs.name or f"A{k + 1}" for k, obs in enumerate(observables)]
    means = np.zeros((len(observables), len(times)))
    stderr = np.zeros_like(means)
    for k, obs in enumerate(observables):
        values = np.array([[obs.value(h) for h in traj.states] for traj in trajectories])
        means[k] = weights @ values
        stderr[k] = np.sqrt((weights**2) @ (values - means[k]) ** 2)

    result = EnsembleRun(
        times=times,
        samples=samples,
        weights=weights,
        trajectories=trajectories,
        density_series=density_series,
        observable_names=names,
        means=means,
        stderr=stderr,
        metadata={
            "model": model.name,
            "samples": sampler.samples,
            "seed": sampler.seed,
            "integrator": method.value,
            "dt": trajectories[0].metadata["dt"],
            "workers": workers or 1,
        },
    )
    logger.info(
        f"Propagated {len(samples)} characteristics to t = {T}: "
        f"max density deviation {result.max_density_deviation():.3e}"
    )
    return result


@dataclass
class PositivityReport:
    passed: bool
    min_density: float
    weight_sum_residual: float
    max_density_deviation: float
    offending_index: Optional[int] = None
    message: str = ""
    observables: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "min_density": self.min_density,
            "weight_sum_residual": self.weight_sum_residual,
            "max_density_deviation": self.max_density_deviation,
            "offending_index": self.offending_index,
            "message": self.message,
            "observables": self.observables,
        }


def positivity_normalization_report(run: EnsembleRun) -> PositivityReport:
    """Check nonnegative densities and weights, and unit total weight"""
    min_density = float(np.min(run.density_series))
    residual = run.weight_sum_residual()
    offending: Optional[int] = None
    message = ""
    if np.any(run.weights < 0):
        offending = int(np.flatnonzero(run.weights < 0)[0])
        message = f"Sample {offending} has negative weight {run.weights[offending]:.3e}"
    elif min_density < DENSITY_FLOOR:
        offending = int(np.argmin(np.min(run.density_series, axis=1)))
        message = f"Sample {offending} has negative density {min_density:.3e}"
    elif residual > WEIGHT_SUM_TOL:
        message = f"Importance weights sum to 1 + {residual:.3e}"
    passed = not message
    if not passed:
        logger.warning(f"Positivity/normalization check failed: {message}")
    return PositivityReport(
        passed=passed,
        min_density=min_density,
        weight_sum_residual=residual,
        max_density_deviation=run.max_density_deviation(),
        offending_index=offending,
        message=message,
        observables=list(run.observable_names),
    )
