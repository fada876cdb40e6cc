"""Importance sampling of initial hybrid points from a density"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.stats import norm

from hybridflow.ensemble.density import DensitySpec
from hybridflow.phase_space.operations import encode_state
from hybridflow.phase_space.state import ClassicalPoint, HybridPoint
from hybridflow.utils.errors import DimensionMismatchError, SamplerError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class GaussianProposal:
    """Independent normal proposal for each classical coordinate"""

    mean_x: Sequence[float]
    mean_p: Sequence[float]
    width_x: Sequence[float]
    width_p: Sequence[float]

    def __post_init__(self):
        for name in ("mean_x", "mean_p", "width_x", "width_p"):
            values = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, tuple(float(v) for v in values))
        sizes = {len(self.mean_x), len(self.mean_p), len(self.width_x), len(self.width_p)}
        if len(sizes) != 1:
            raise DimensionMismatchError("proposal parameters", "equal lengths", sorted(sizes))
        if any(w <= 0 for w in self.width_x + self.width_p):
            raise SamplerError("Proposal widths must be positive")

    @classmethod
    def isotropic(cls, n: int, width: float = 1.0) -> "GaussianProposal":
        return cls((0.0,) * n, (0.0,) * n, (width,) * n, (width,) * n)

    @property
    def n(self) -> int:
        return len(self.mean_x)

    @property
    def mean(self) -> np.ndarray:
        return np.array(self.mean_x + self.mean_p)

    @property
    def width(self) -> np.ndarray:
        return np.array(self.width_x + self.width_p)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Array (size, 2n) of proposal draws"""
        return self.mean + self.width * rng.standard_normal((size, 2 * self.n))

    def pdf(self, y: np.ndarray) -> float:
        return float(np.prod(norm.pdf(y, loc=self.mean, scale=self.width)))


@dataclass(frozen=True)
class SamplerSpec:
    samples: int
    seed: int
    proposal: GaussianProposal

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"Sample count must be >= 1, got {self.samples}")


@dataclass(frozen=True)
class Sample:
    """Initial point of one characteristic"""

    index: int
    point: HybridPoint
    component: int
    weight: float


def draw_samples(dens: DensitySpec, sampler: SamplerSpec) -> List[Sample]:
    """Classical coordinates from the proposal, component j with probability w_j / sum w

    Importance weights are sum_j w_j / q and are normalized to sum to 1. All
    random numbers are drawn up front from ``default_rng(seed)``.
    """
    if sampler.proposal.n != dens.n:
        raise DimensionMismatchError("proposal dimension", dens.n, sampler.proposal.n)
    rng = np.random.default_rng(sampler.seed)
    K, n = sampler.samples, dens.n
    ys = sampler.proposal.sample(rng, K)
    us = rng.random(K)

    raw = np.zeros(K)
    chosen = np.zeros(K, dtype=int)
    for i, (y, u) in enumerate(zip(ys, us)):
        w = dens.weights_at(y[:n], y[n:])
        total = float(np.sum(w))
        if total <= 0:
            continue
        chosen[i] = min(int(np.searchsorted(np.cumsum(w), u * total, side="right")), len(w) - 1)
        raw[i] = total / sampler.proposal.pdf(y)

    if not np.any(raw > 0) or not np.all(np.isfinite(raw)):
        raise SamplerError(
            f"Proposal produced no usable samples out of {K}; widen or re-center it"
        )
    weights = raw / np.sum(raw)
    accepted = int(np.count_nonzero(raw))
    logger.info(f"Drew {K} samples, {accepted} with nonzero weight (seed {sampler.seed})")
    return [
        Sample(
            index=i,
            point=HybridPoint(
                ClassicalPoint(ys[i, :n], ys[i, n:]),
                encode_state(dens.components[chosen[i]].state),
            ),
            component=int(chosen[i]),
            weight=float(weights[i]),
        )
        for i in range(K)
    ]
