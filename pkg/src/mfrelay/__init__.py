"""Secrecy analysis and simulation for the untrusted two-hop relay
channel: closed-form rates and outage laws for modulo-forward,
amplify-forward, and decode-forward relaying, high-SNR exponents, and a
sample-level modulo-lattice signal chain, all cross-validated by Monte
Carlo.
"""

from .asymptotics import (Scheme, estimate_gsdof, estimate_gsdg,
                          gsdg_closed_form, gsdof_closed_form)
from .channel import (ChannelRealization, RateConfig, SystemParams, Thresholds,
                      derived_ratios, rng_stream, sample_realization, thresholds)
from .latticesim import (ChainReport, LatticeConfig, mmse_scalings, mod_lattice,
                         scan_scaling, simulate_chain)
from .numerics import Interval, bessel_k1, slope_fit
from .outage import (MCEstimate, OutageProbs, mc_outage, outage_probs, p_conn_af,
                     p_conn_cutset_lower, p_conn_mf, p_secrecy,
                     p_secrecy_threshold, tradeoff_residual)
from .rates import (AfRates, DfComparison, MfRates, RateReport, af_rates,
                    cutset_capacity, df_comparison, mf_gap, mf_rates,
                    rate_report, relay_capacity, secrecy_upper_bound,
                    sigma_e_sq)

__version__ = "0.1.0"

__all__ = [
    "AfRates", "ChainReport", "ChannelRealization", "DfComparison", "Interval",
    "LatticeConfig", "MCEstimate", "MfRates", "OutageProbs", "RateConfig",
    "RateReport", "Scheme", "SystemParams", "Thresholds", "af_rates",
    "bessel_k1", "cutset_capacity", "derived_ratios", "df_comparison",
    "estimate_gsdof", "estimate_gsdg", "gsdg_closed_form", "gsdof_closed_form",
    "mc_outage", "mf_gap", "mf_rates", "mmse_scalings", "mod_lattice",
    "outage_probs", "p_conn_af", "p_conn_cutset_lower", "p_conn_mf",
    "p_secrecy", "p_secrecy_threshold", "rate_report", "relay_capacity",
    "rng_stream", "sample_realization", "scan_scaling", "secrecy_upper_bound",
    "sigma_e_sq", "simulate_chain", "slope_fit", "thresholds",
    "tradeoff_residual", "__version__",
]
