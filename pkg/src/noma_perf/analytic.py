"""Closed-form evaluators for outage probability and secrecy throughput.

Each function consumes a SystemConfig and returns a float. The multicast
outage forms come from ranking statistics of the effective gains; the
secrecy forms approximate the mean unicast rate gap between the two
strongest scheduled users via nested Gauss-Chebyshev quadrature. OMA
benchmarks reuse the same machinery with the half-slot threshold
2^(2 R_M) - 1 and without the power-split coupling.

Outage values are clamped to [0, 1]. Secrecy values are left unclamped:
the high-SNR expansions can dip below zero at low SNR with aggressive
rate targets, and hiding that would mask the approximation quality.
"""

import itertools
from math import comb, lgamma, log

import numpy as np

from .channel import SystemConfig
from .specfun import chebyshev_rule, expint_e1_scaled, lower_incomplete_gamma

LN2 = log(2.0)

_CHUNK = 16384

DEFAULT_COMPOSITION_CAP = 10_000_000


class CompositionLimitError(Exception):
    """Raised when a secrecy evaluation would enumerate too many index tuples."""

    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(
            f"evaluation needs {count} weak compositions, above the cap of {cap}"
        )


def weak_compositions(total: int, parts: int, cap=None):
    """Yield all tuples of `parts` nonnegative ints summing to `total`.

    Lexicographically increasing. If `cap` is given and the count
    C(total+parts-1, parts-1) exceeds it, raises CompositionLimitError
    before yielding anything.
    """
    if not isinstance(total, (int, np.integer)) or total < 0:
        raise ValueError("total must be a nonnegative integer")
    if not isinstance(parts, (int, np.integer)) or parts < 1:
        raise ValueError("parts must be a positive integer")
    count = comb(total + parts - 1, parts - 1)
    if cap is not None and count > cap:
        raise CompositionLimitError(count, cap)

    def gen():
        slots = total + parts - 1
        for bars in itertools.combinations(range(slots), parts - 1):
            prev = -1
            out = []
            for b in bars:
                out.append(b - prev - 1)
                prev = b
            out.append(slots - 1 - prev)
            yield tuple(out)

    return gen()


def _clamp01(p: float) -> float:
    return float(min(1.0, max(0.0, p)))


# ---------------------------------------------------------------------------
# outage probability
# ---------------------------------------------------------------------------

def _outage_est_ranked(config: SystemConfig, threshold: float) -> float:
    # ranking by per-realization estimates: estimates are iid across users
    # given the distances, so non-outage factorizes over users
    rule = chebyshev_rule(config.quad_orders[0], config.D)
    x = rule.nodes
    est_mean = x ** (-config.eta) - config.sigma2_zeta
    density = 2.0 * x / config.D ** 2
    p_single = float(np.sum(rule.weights * density * np.exp(-threshold / (config.rho * est_mean))))
    return _clamp01(1.0 - p_single ** config.K)


def _outage_exact(config: SystemConfig, threshold: float) -> float:
    # no quadrature: the single-user survival probability integrates in
    # closed form through the lower incomplete gamma function
    z = threshold / config.rho
    a = 2.0 / config.eta
    surv = (a / (z ** a * config.D ** 2)) * lower_incomplete_gamma(
        a, z * config.D ** config.eta
    )
    return _clamp01(1.0 - surv ** config.K)


def _outage_distance_ranked(config: SystemConfig, threshold: float) -> float:
    # product of per-rank marginal survival probabilities; ranks are only
    # conditionally independent, so this is an approximation, tightest at
    # moderate-to-high SNR
    z = threshold / config.rho
    K, D, eta = config.K, config.D, config.eta
    prod = 1.0
    for k in range(1, K + 1):
        s = 0.0
        for j in range(K - k + 1):
            e = 2.0 * (k + j) / eta
            s += (
                comb(K - k, j)
                * (-1.0) ** j
                / D ** (2 * (k + j))
                * z ** (-e)
                / eta
                * lower_incomplete_gamma(e, z * D ** eta)
            )
        prod *= 2.0 * k * comb(K, k) * s
    return _clamp01(1.0 - prod)


def outage_noma_imperfect(config: SystemConfig) -> float:
    """Multicast outage probability when users are ranked by noisy estimates."""
    return _outage_est_ranked(config, config.eps_multicast)


def outage_noma_perfect(config: SystemConfig) -> float:
    """Exact multicast outage probability under perfect CSI."""
    if config.sigma2_zeta != 0.0:
        raise ValueError("perfect-CSI outage requires sigma2_zeta = 0")
    return _outage_exact(config, config.eps_multicast)


def outage_noma_sos(config: SystemConfig) -> float:
    """Multicast outage probability when users are ranked by distance only."""
    return _outage_distance_ranked(config, config.eps_multicast)


def outage_oma_imperfect(config: SystemConfig) -> float:
    """OMA benchmark of outage_noma_imperfect (half slot, doubled threshold)."""
    return _outage_est_ranked(config, config.eps_multicast_oma)


def outage_oma_perfect(config: SystemConfig) -> float:
    """OMA benchmark of outage_noma_perfect."""
    if config.sigma2_zeta != 0.0:
        raise ValueError("perfect-CSI outage requires sigma2_zeta = 0")
    return _outage_exact(config, config.eps_multicast_oma)


def outage_oma_sos(config: SystemConfig) -> float:
    """OMA benchmark of outage_noma_sos."""
    return _outage_distance_ranked(config, config.eps_multicast_oma)


# ---------------------------------------------------------------------------
# secrecy throughput, estimate-ranked ordering
# ---------------------------------------------------------------------------

def _comp_chunks(total, parts, cap):
    it = weak_compositions(total, parts, cap=cap)
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def _secrecy_est_ranked_mean(config: SystemConfig, oma: bool, cap) -> float:
    """Mean rate gap between the two largest order statistics of the estimates.

    The joint density of the ordered estimates is expanded through a
    multinomial over quadrature nodes (one weak composition per term), which
    turns the K-fold order-statistics integral into a finite sum.
    """
    K, D, eta = config.K, config.D, config.eta
    rho, s2 = config.rho, config.sigma2_zeta
    if K < 2:
        raise ValueError("secrecy throughput needs K >= 2")
    m, n = config.quad_orders[1], config.quad_orders[2]
    nu = 1.0 if oma else 1.0 + config.eps_multicast

    outer = chebyshev_rule(m, 1.0)
    tau = outer.nodes
    inner = chebyshev_rule(n, D)
    x = inner.nodes
    inv = 1.0 / (x ** (-eta) - s2)  # mean estimate power at each node

    # log(|sin_t| x_t) with the sine recovered from the weight
    sin_n = inner.weights * (2 * n) / (np.pi * D)
    log_sx = np.log(sin_n * x)
    log_node_factor = log(np.pi / (n * D))
    # log r! for r = 0 .. K-1
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, K, dtype=float)))))

    inner_sum = np.zeros(m)
    for R in _comp_chunks(K - 1, n + 1, cap):
        Rn = R[:, 1:].astype(float)
        S = Rn.sum(axis=1)
        log_a = log_fact[K - 1] - log_fact[R].sum(axis=1) + S * log_node_factor + Rn @ log_sx
        a = np.where(S % 2 == 0, 1.0, -1.0) * np.exp(log_a)
        b_base = Rn @ inv
        all_zero = S == 0
        for u in range(m):
            rt = rho * tau[u]
            b = tau[u] * b_base
            mu = (b[:, None] + inv[None, :]) / rt
            # e^(nu mu) Ei(-nu mu) = -expint_e1_scaled(nu mu)
            g = 1.0 - b[:, None] / (rt * mu) - nu * expint_e1_scaled(nu * mu) * (
                mu - b[:, None] / rt
            )
            h = -(np.pi / (n * D * rt)) * (g @ (sin_n * x))
            h += np.where(all_zero, 1.0 / rt, 0.0)
            inner_sum[u] += a @ h

    sin_m = outer.weights * (2 * m) / np.pi
    bracket = 1.0 / (rho * tau) - inner_sum
    scale = 4.0 if oma else 2.0
    return float(K * np.pi * rho / (scale * m * LN2) * np.dot(sin_m, bracket))


def secrecy_noma_imperfect(config: SystemConfig, composition_cap=DEFAULT_COMPOSITION_CAP) -> float:
    """Average secrecy unicast throughput with estimate-based ranking.

    Product of the non-outage probability and the mean rate gap between the
    two strongest estimated gains (high-SNR power-split surrogate).
    """
    p_out = outage_noma_imperfect(config)
    return (1.0 - p_out) * _secrecy_est_ranked_mean(config, oma=False, cap=composition_cap)


def secrecy_oma_imperfect(config: SystemConfig, composition_cap=DEFAULT_COMPOSITION_CAP) -> float:
    """OMA benchmark secrecy throughput with estimate-based ranking.

    Half-slot rate gap between the two strongest estimates; no power split,
    so the result does not depend on R_M.
    """
    return _secrecy_est_ranked_mean(config, oma=True, cap=composition_cap)


# ---------------------------------------------------------------------------
# secrecy throughput, distance-ranked ordering (two users)
# ---------------------------------------------------------------------------

def secrecy_noma_sos_k2(config: SystemConfig) -> float:
    """Average secrecy unicast throughput for two distance-ranked users.

    High-SNR form: the power split is approximated by its SNR-free limit,
    and the remaining two-user expectation is reduced to nested quadrature
    over the distance ratio and the farther distance.
    """
    if config.K != 2:
        raise ValueError("distance-ranked secrecy form needs exactly K = 2")
    D, eta, rho = config.D, config.eta, config.rho
    eps = config.eps_multicast
    nu = 1.0 + eps
    l, q = config.quad_orders[3], config.quad_orders[4]

    ratio = chebyshev_rule(l, 1.0)
    kappa = ratio.nodes
    sin_l = ratio.weights * (2 * l) / np.pi
    inner = chebyshev_rule(q, D)
    x = inner.nodes
    sin_q = inner.weights * (2 * q) / (np.pi * D)
    xe = x ** eta
    a = 4.0 / eta

    g_near = lower_incomplete_gamma(a, eps * kappa * D ** eta / rho)
    decay_edge = np.exp(-eps * D ** eta * kappa / rho)
    j0 = (
        D ** 4 / 2.0 * decay_edge
        - g_near / (eta * (eps * kappa / rho) ** a)
        + D ** 4 / (4.0 * (kappa + 1.0))
    )
    t2 = (
        log(nu + eps)
        * lower_incomplete_gamma(a, (kappa + 1.0) * eps * D ** eta / rho)
        / (eta * (kappa + 1.0) * ((kappa + 1.0) * eps / rho) ** a)
    )

    # inner integrand over the farther distance, (l, q)
    e1_near = expint_e1_scaled(nu * xe / rho)
    term1 = e1_near[None, :] * (
        D ** 2 * decay_edge[:, None]
        - (x ** 2)[None, :] * np.exp(-eps * np.outer(kappa, xe) / rho)
    )
    w = (kappa[:, None] + 1.0) * xe[None, :] / rho
    term2 = (x ** 2)[None, :] / (kappa[:, None] + 1.0) * (
        expint_e1_scaled(nu * w) - np.exp(-eps * w) * expint_e1_scaled((nu + eps) * w)
    )
    v = D ** eta * kappa[:, None] + xe[None, :]
    term3 = -D ** 2 * (xe[None, :] / v) * (log(nu) + expint_e1_scaled(nu * v / rho))
    jbar = term1 + term2 + term3

    per_ratio = j0 * log(nu) - t2 + (D * np.pi / (2 * q)) * (jbar @ (sin_q * x))
    weight = sin_l * kappa ** (2.0 / eta - 1.0)
    return float(4.0 * np.pi / (l * eta * D ** 4 * LN2) * np.dot(weight, per_ratio))


def secrecy_oma_sos_k2(config: SystemConfig) -> float:
    """OMA benchmark secrecy throughput for two distance-ranked users."""
    if config.K != 2:
        raise ValueError("distance-ranked secrecy form needs exactly K = 2")
    D, eta, rho = config.D, config.eta, config.rho
    l, q = config.quad_orders[3], config.quad_orders[4]

    ratio = chebyshev_rule(l, 1.0)
    kappa = ratio.nodes
    sin_l = ratio.weights * (2 * l) / np.pi
    inner = chebyshev_rule(q, D)
    x = inner.nodes
    sin_q = inner.weights * (2 * q) / (np.pi * D)
    xe = x ** eta

    j_single = expint_e1_scaled(xe / rho) * (D ** 2 - x ** 2)
    v = D ** eta * kappa[:, None] + xe[None, :]
    j_pair = -(D ** 2 * xe[None, :] / v) * expint_e1_scaled(v / rho)

    term1 = np.pi / (q * D ** 3 * LN2) * np.dot(sin_q * x, j_single)
    weight = sin_l * kappa ** (2.0 / eta - 1.0)
    term2 = np.pi ** 2 / (q * l * eta * D ** 3 * LN2) * np.dot(weight, j_pair @ (sin_q * x))
    return float(term1 + term2)
