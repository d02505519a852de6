"""System parameters and channel sampling.

Users are dropped uniformly in a disk of radius D around the transmitter.
Small-scale fading is Rayleigh, so fading power is Exp(1), and the
effective gain of a user at distance d is fading * d^(-eta). Channel
knowledge comes in three flavors:

* "imperfect": the scheduler ranks users by MMSE channel estimates whose
  power is Exp with mean d^(-eta) - sigma2_zeta (error variance subtracted).
* "perfect": same pipeline with sigma2_zeta = 0; estimates equal the truth.
* "sos": only statistical knowledge; users are ranked by distance and no
  per-realization estimate exists.
"""

from math import comb

import numpy as np
from dataclasses import dataclass
from typing import Optional

CSI_IMPERFECT = "imperfect"
CSI_PERFECT = "perfect"
CSI_SOS = "sos"
CSI_MODES = (CSI_IMPERFECT, CSI_PERFECT, CSI_SOS)

# Chebyshev orders (c, m, n, l, q) used by the analytic evaluators:
# c outage integral, m/n the two nested secrecy integrals under imperfect
# CSI, l/q the nested pair for the statistical-CSI secrecy form.
DEFAULT_QUAD_ORDERS = (50, 5, 10, 100, 10)


@dataclass(frozen=True)
class SystemConfig:
    K: int = 8
    D: float = 5.0
    eta: float = 2.0
    rho: float = 1000.0
    R_M: float = 0.5
    sigma2_zeta: float = 0.01
    csi_mode: str = CSI_IMPERFECT
    quad_orders: tuple = DEFAULT_QUAD_ORDERS

    def __post_init__(self):
        if not isinstance(self.K, (int, np.integer)) or self.K < 1:
            raise ValueError("K must be a positive integer")
        if not self.D > 0:
            raise ValueError("D must be positive")
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not self.rho > 0:
            raise ValueError("rho must be positive (linear SNR)")
        if not self.R_M > 0:
            raise ValueError("R_M must be positive")
        if self.sigma2_zeta < 0:
            raise ValueError("sigma2_zeta must be nonnegative")
        # cell-edge users must keep positive estimate power
        if not self.sigma2_zeta < self.D ** (-self.eta):
            raise ValueError("sigma2_zeta must be below D^(-eta)")
        if self.csi_mode not in CSI_MODES:
            raise ValueError(f"csi_mode must be one of {CSI_MODES}")
        if len(self.quad_orders) != 5 or any(
            not isinstance(o, (int, np.integer)) or o < 1 for o in self.quad_orders
        ):
            raise ValueError("quad_orders must be five positive integers")
        if self.csi_mode == CSI_PERFECT and self.sigma2_zeta != 0.0:
            raise ValueError("perfect CSI requires sigma2_zeta = 0")

    @property
    def eps_multicast(self) -> float:
        """SINR threshold for decoding the multicast stream at rate R_M."""
        return 2.0 ** self.R_M - 1.0

    @property
    def eps_multicast_oma(self) -> float:
        """Threshold under OMA, where the multicast slot is halved."""
        return 2.0 ** (2.0 * self.R_M) - 1.0


@dataclass(frozen=True)
class ChannelRealization:
    """One snapshot, users sorted by distance (nearest first)."""
    distances: np.ndarray
    fading_powers: np.ndarray
    true_gains: np.ndarray
    est_gains: Optional[np.ndarray]


def sample_batch(config: SystemConfig, rng: np.random.Generator, size: int):
    """Draw `size` independent snapshots as (size, K) arrays.

    Returns (distances, fading_powers, true_gains, est_gains); rows are
    sorted by distance and est_gains is None under statistical CSI.
    """
    K = config.K
    d = config.D * np.sqrt(rng.random((size, K)))
    order = np.argsort(d, axis=1, kind="stable")
    d = np.take_along_axis(d, order, axis=1)
    fading = rng.exponential(1.0, (size, K))
    true_gains = fading * d ** (-config.eta)
    if config.csi_mode == CSI_SOS:
        est_gains = None
    elif config.sigma2_zeta == 0.0:
        est_gains = true_gains
    else:
        mean = d ** (-config.eta) - config.sigma2_zeta
        est_gains = rng.exponential(1.0, (size, K)) * mean
    return d, fading, true_gains, est_gains


def sample_realization(config: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    d, fading, true_gains, est_gains = sample_batch(config, rng, 1)
    return ChannelRealization(
        distances=d[0],
        fading_powers=fading[0],
        true_gains=true_gains[0],
        est_gains=None if est_gains is None else est_gains[0],
    )


def distance_order_pdf(k: int, K: int, D: float, x):
    """Density of the k-th nearest of K uniform-in-disk distances at x.

    Standard order-statistic form with parent cdf (x/D)^2 on [0, D].
    """
    if not isinstance(k, (int, np.integer)) or not isinstance(K, (int, np.integer)):
        raise ValueError("k and K must be integers")
    if not 1 <= k <= K:
        raise ValueError("need 1 <= k <= K")
    if not D > 0:
        raise ValueError("D must be positive")
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    if np.any((x_arr < 0) | (x_arr > D)):
        raise ValueError("x must lie in [0, D]")
    cdf = (x_arr / D) ** 2
    pdf = 2.0 * x_arr / D ** 2
    out = k * comb(K, k) * cdf ** (k - 1) * (1.0 - cdf) ** (K - k) * pdf
    return float(out) if scalar else out
