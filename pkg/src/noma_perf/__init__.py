"""Performance analysis toolkit for a mixed multicast/unicast NOMA downlink.

Closed-form outage and secrecy-throughput evaluators under imperfect,
perfect, and purely statistical channel knowledge, a Monte Carlo oracle
with confidence intervals, and a CSV sweep CLI.
"""

from .analytic import (
    CompositionLimitError,
    outage_noma_imperfect,
    outage_noma_perfect,
    outage_noma_sos,
    outage_oma_imperfect,
    outage_oma_perfect,
    outage_oma_sos,
    secrecy_noma_imperfect,
    secrecy_noma_sos_k2,
    secrecy_oma_imperfect,
    secrecy_oma_sos_k2,
    weak_compositions,
)
from .channel import (
    CSI_IMPERFECT,
    CSI_PERFECT,
    CSI_SOS,
    ChannelRealization,
    SystemConfig,
    distance_order_pdf,
    sample_realization,
)
from .montecarlo import (
    METRIC_OUTAGE,
    METRIC_SECRECY,
    METRIC_SECRECY_SURROGATE,
    MetricEstimate,
    SCHEME_NOMA,
    SCHEME_OMA,
    simulate,
)
from .noma_core import (
    PowerSplit,
    multicast_rate,
    oma_rates,
    power_split,
    secrecy_throughput_noma,
    unicast_rate,
)
from .specfun import (
    QuadratureRule,
    chebyshev_rule,
    expint_e1_scaled,
    expint_ei,
    lower_incomplete_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "CSI_IMPERFECT",
    "CSI_PERFECT",
    "CSI_SOS",
    "ChannelRealization",
    "CompositionLimitError",
    "METRIC_OUTAGE",
    "METRIC_SECRECY",
    "METRIC_SECRECY_SURROGATE",
    "MetricEstimate",
    "PowerSplit",
    "QuadratureRule",
    "SCHEME_NOMA",
    "SCHEME_OMA",
    "SystemConfig",
    "chebyshev_rule",
    "distance_order_pdf",
    "expint_e1_scaled",
    "expint_ei",
    "lower_incomplete_gamma",
    "multicast_rate",
    "oma_rates",
    "outage_noma_imperfect",
    "outage_noma_perfect",
    "outage_noma_sos",
    "outage_oma_imperfect",
    "outage_oma_perfect",
    "outage_oma_sos",
    "power_split",
    "sample_realization",
    "secrecy_noma_imperfect",
    "secrecy_noma_sos_k2",
    "secrecy_oma_imperfect",
    "secrecy_oma_sos_k2",
    "secrecy_throughput_noma",
    "simulate",
    "unicast_rate",
    "weak_compositions",
]
