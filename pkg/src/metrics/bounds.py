"""Embedding-dimension selection and probability bounds on the distance estimate"""

import math
from typing import Dict, Optional

import numpy as np
from scipy.special import ndtr

from src.utils.errors import ArgumentError

DISTANCE_CONSTANT = 16.0
KERNEL_CONSTANT = 1.0
TWO_MAP_CONSTANT = 128.0


def embedding_dim_for(epsilon: float, delta: float, kind: str = "distance") -> int:
    """
    Smallest M guaranteeing P(|estimate - target| >= epsilon) <= delta:
    M >= 16 / (delta epsilon^2) for distances, 1 / (delta epsilon^2) for kernels.
    """
    if not epsilon > 0:
        raise ArgumentError(f"epsilon must be positive, got {epsilon}")
    if not 0 < delta < 1:
        raise ArgumentError(f"delta must lie in (0, 1), got {delta}")
    if kind == "distance":
        constant = DISTANCE_CONSTANT
    elif kind == "kernel":
        constant = KERNEL_CONSTANT
    else:
        raise ArgumentError(f"Unknown bound kind '{kind}' (expected distance or kernel)")
    bound = constant / (delta * epsilon ** 2)
    return int(math.ceil(round(bound, 9)))


def _clamp(value: float) -> float:
    return float(min(1.0, max(0.0, value)))


def delta_bounds(M: int, epsilon: float, sigma_hat: Optional[float] = None, clt: bool = None) -> Dict[str, Optional[float]]:
    """
    delta_M = 128/(M eps^2) for two independent maps, delta_star = 16/(M eps^2)
    against the reference, delta_clt = 2 Phi(-sqrt(M) eps / sigma_hat).
    delta_clt is computed when sigma_hat is given; asking for it without
    sigma_hat is an error.
    """
    if M < 1:
        raise ArgumentError(f"M must be positive, got {M}")
    if not epsilon > 0:
        raise ArgumentError(f"epsilon must be positive, got {epsilon}")
    want_clt = sigma_hat is not None if clt is None else clt
    result = {
        "delta_M": _clamp(TWO_MAP_CONSTANT / (M * epsilon ** 2)),
        "delta_star": _clamp(DISTANCE_CONSTANT / (M * epsilon ** 2)),
        "delta_clt": None,
    }
    if want_clt:
        if sigma_hat is None or not sigma_hat > 0:
            raise ArgumentError("delta_clt needs a positive sigma_hat")
        result["delta_clt"] = _clamp(2.0 * float(ndtr(-np.sqrt(M) * epsilon / sigma_hat)))
    return result
