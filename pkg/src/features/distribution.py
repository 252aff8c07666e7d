"""
Sampling distribution P over feature parameters w = (k, theta_F, theta_H)

k is 1 + Poisson(lambda) truncated to {1..k_max} and renormalized; every
coefficient is an independent centred Gaussian. Draw order per feature:
one uniform for k, then a single standard-normal block split into theta_F
linear, theta_F bias, theta_H linear, theta_H bias.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.stats import norm, poisson

from src.layers.affine import EquivariantLayerParams, InvariantLayerParams
from src.layers.basis import Normalization
from src.tensors.partitions import bell

K_MAX_LIMIT = 3


class Activation(str, Enum):
    SIGMOID = "sigmoid"
    TANH = "tanh"
    RELU = "relu"


class DistributionConfig(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True, use_enum_values=False)

    lam: float = Field(default=1.0, gt=0, alias="lambda", description="Poisson rate for the tensor order")
    k_max: int = Field(default=3, ge=1, le=K_MAX_LIMIT, description="Largest tensor order")
    sigma: float = Field(default=1.0, gt=0, description="Gaussian std of every coefficient")
    activation_e: Activation = Activation.SIGMOID
    activation_i: Activation = Activation.SIGMOID
    normalization: Normalization = Normalization.MEAN
    channels: int = Field(default=1, ge=1, description="Channel count of the graph tensors")

    @field_validator("activation_e")
    @classmethod
    def equivariant_activation_is_squashing(cls, value: Activation) -> Activation:
        if value is not Activation.SIGMOID:
            raise ValueError("activation_e must be a squashing function (sigmoid)")
        return value


@dataclass(frozen=True, eq=False)
class FeatureParams:
    """One sampled parameter vector w = (k, theta_F, theta_H)"""

    k: int
    theta_F: EquivariantLayerParams
    theta_H: InvariantLayerParams

    @property
    def channels(self) -> int:
        return self.theta_F.channels

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureParams):
            return NotImplemented
        return (
            self.k == other.k
            and np.array_equal(self.theta_F.theta_lin, other.theta_F.theta_lin)
            and np.array_equal(self.theta_F.theta_bias, other.theta_F.theta_bias)
            and np.array_equal(self.theta_H.theta, other.theta_H.theta)
            and self.theta_H.bias == other.theta_H.bias
        )

    def __repr__(self) -> str:
        return f"FeatureParams(k={self.k}, |theta_F|={self.theta_F.size}, |theta_H|={self.theta_H.size})"


def theta_sizes(k: int, channels: int = 1) -> Tuple[int, int, int, int]:
    """Lengths of (theta_F linear, theta_F bias, theta_H linear, theta_H bias)"""
    return bell(k + 2) * channels, bell(k), bell(k), 1


def order_masses(config: DistributionConfig) -> np.ndarray:
    """Truncated shifted-Poisson mass of k = 1..k_max"""
    mass = poisson.pmf(np.arange(config.k_max), config.lam)
    return mass / mass.sum()


def truncated_tail(config: DistributionConfig) -> float:
    """Poisson mass discarded by the truncation at k_max"""
    return float(poisson.sf(config.k_max - 1, config.lam))


def linear_sigma(config: DistributionConfig, k: int) -> float:
    """Std of theta_F linear coefficients; shrunk by sqrt(Bell(k+2)) under sum normalization"""
    if config.normalization is Normalization.SUM:
        return config.sigma / np.sqrt(bell(k + 2))
    return config.sigma


class ParameterSampler:
    """Sequential sampler bound to one generator; reused across the M draws of a map"""

    def __init__(self, config: DistributionConfig, rng: np.random.Generator):
        self.config = config
        self.rng = rng
        self.cdf = np.cumsum(order_masses(config))

    def draw(self) -> FeatureParams:
        config = self.config
        u = self.rng.random()
        k = min(1 + int(np.searchsorted(self.cdf, u, side="right")), config.k_max)
        a, b, c, _ = theta_sizes(k, config.channels)
        z = self.rng.standard_normal(a + b + c + 1)
        theta_F = EquivariantLayerParams(
            k=k,
            theta_lin=z[:a] * linear_sigma(config, k),
            theta_bias=z[a:a + b] * config.sigma,
            channels=config.channels,
        )
        theta_H = InvariantLayerParams(
            k=k,
            theta=z[a + b:a + b + c] * config.sigma,
            bias=z[a + b + c] * config.sigma,
        )
        return FeatureParams(k, theta_F, theta_H)


def sample_parameter(config: DistributionConfig, rng: np.random.Generator) -> FeatureParams:
    """Draw one w ~ P"""
    return ParameterSampler(config, rng).draw()


def log_density(params: FeatureParams, config: DistributionConfig) -> float:
    """
    Mixed-type log density log p(w) = log p_k(k) + log p_theta(theta_F, theta_H | k).
    Returns -inf outside the support.
    """
    k = params.k
    if k < 1 or k > config.k_max or params.channels != config.channels:
        return float("-inf")
    mass = order_masses(config)[k - 1]
    if mass <= 0:
        return float("-inf")
    total = float(np.log(mass))
    total += float(norm.logpdf(params.theta_F.theta_lin, scale=linear_sigma(config, k)).sum())
    total += float(norm.logpdf(params.theta_F.theta_bias, scale=config.sigma).sum())
    total += float(norm.logpdf(params.theta_H.theta, scale=config.sigma).sum())
    total += float(norm.logpdf(params.theta_H.bias, scale=config.sigma))
    return total
