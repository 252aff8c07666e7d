"""
Monte-Carlo check of the concentration of the distance estimate

For a pair of graphs, a large reference map gives Delta_* (taken as the
true squared distance). Each trial draws two independent maps of the
largest grid dimension; smaller dimensions use their prefixes. The
empirical exceedance frequencies are reported next to the analytic bounds.
"""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.features.distribution import DistributionConfig
from src.features.grnf import build_grnf, plain_weights
from src.metrics.bounds import delta_bounds
from src.utils.errors import ArgumentError
from src.utils.seeds import derive_seed

logger = logging.getLogger(__name__)

CSV_HEADER = ["M", "delta_hat_M", "delta_M", "delta_hat_star", "delta_star", "delta_clt", "epsilon"]


@dataclass(frozen=True)
class DiagnosticsRow:
    M: int
    delta_hat_M: float
    delta_M: float
    delta_hat_star: float
    delta_star: float
    delta_clt: float
    epsilon: float
    median_abs_error: float
    variance: float

    def csv_values(self) -> List[str]:
        return [repr(v) if isinstance(v, float) else str(v) for v in (getattr(self, c) for c in CSV_HEADER)]


def _squared_distance(f1: np.ndarray, f2: np.ndarray, M: int) -> float:
    w = plain_weights(M)
    diff = w * f1[:M] - w * f2[:M]
    return float(np.dot(diff, diff))


def reference_distance(g1, g2, reference_M: int, seed: int, config: DistributionConfig) -> Tuple[float, float]:
    """(Delta_*, sigma_hat) from one large map; sigma_hat is the std of (psi1 - psi2)^2"""
    reference = build_grnf(reference_M, config, derive_seed(seed, "reference"))
    f1, f2 = reference.feature_values(g1), reference.feature_values(g2)
    per_feature = (f1 - f2) ** 2
    return _squared_distance(f1, f2, reference_M), float(np.std(per_feature))


def _trial(g1, g2, grid: Sequence[int], config: DistributionConfig, seed: int, t: int) -> np.ndarray:
    top = max(grid)
    out = np.empty((2, len(grid)), dtype=np.float64)
    for j, role in enumerate((1, 2)):
        grnf = build_grnf(top, config, derive_seed(seed, "trial", t, role))
        f1, f2 = grnf.feature_values(g1), grnf.feature_values(g2)
        out[j] = [_squared_distance(f1, f2, M) for M in grid]
    return out


def convergence_diagnostics(
    g1,
    g2,
    M_grid: Sequence[int],
    reference_M: int = 100_000,
    trials: int = 500,
    seed: int = 0,
    epsilon: Optional[float] = None,
    config: Optional[DistributionConfig] = None,
    workers: int = 1,
) -> List[DiagnosticsRow]:
    """One row per M: empirical exceedance frequencies next to delta_M, delta_star and delta_clt"""
    config = config or DistributionConfig()
    grid = [int(M) for M in M_grid]
    if not grid or min(grid) < 1:
        raise ArgumentError("M grid must hold positive dimensions")
    if trials < 0:
        raise ArgumentError(f"Trial count must be non-negative, got {trials}")
    if trials == 0:
        return []
    if reference_M <= max(grid):
        logger.warning(f"⚠️ Reference dimension {reference_M} is not above the grid maximum {max(grid)}")

    logger.info(f"🚀 Convergence diagnostics: grid={grid} reference_M={reference_M} trials={trials}")
    delta_ref, sigma_hat = reference_distance(g1, g2, reference_M, seed, config)
    if epsilon is None:
        epsilon = 0.25 * delta_ref
    if not epsilon > 0:
        raise ArgumentError("epsilon must be positive; the reference distance of the pair is zero")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda t: _trial(g1, g2, grid, config, seed, t), range(trials)))
    else:
        samples = [_trial(g1, g2, grid, config, seed, t) for t in range(trials)]
    first = np.stack([s[0] for s in samples])
    second = np.stack([s[1] for s in samples])

    rows = []
    for j, M in enumerate(grid):
        bounds = delta_bounds(M, epsilon, sigma_hat if sigma_hat > 0 else None)
        errors = np.abs(first[:, j] - delta_ref)
        rows.append(
            DiagnosticsRow(
                M=M,
                delta_hat_M=float(np.mean(np.abs(first[:, j] - second[:, j]) >= epsilon)),
                delta_M=bounds["delta_M"],
                delta_hat_star=float(np.mean(errors >= epsilon)),
                delta_star=bounds["delta_star"],
                delta_clt=bounds["delta_clt"] if bounds["delta_clt"] is not None else 0.0,
                epsilon=float(epsilon),
                median_abs_error=float(np.median(errors)),
                variance=float(np.var(first[:, j], ddof=1)) if trials > 1 else 0.0,
            )
        )
    logger.info(f"✅ Convergence diagnostics finished: reference distance {delta_ref:.6g}, epsilon {epsilon:.6g}")
    return rows


def convergence_rate(rows: Sequence[DiagnosticsRow]) -> float:
    """Slope of log median |Delta - Delta_*| against log M"""
    points = [(r.M, r.median_abs_error) for r in rows if r.median_abs_error > 0]
    if len(points) < 2:
        raise ArgumentError("Convergence rate needs at least two dimensions with non-zero error")
    M, err = np.array(points, dtype=np.float64).T
    slope, _ = np.polyfit(np.log(M), np.log(err), 1)
    return float(slope)


def diagnostics_csv(rows: Sequence[DiagnosticsRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_values())
    return buffer.getvalue()
