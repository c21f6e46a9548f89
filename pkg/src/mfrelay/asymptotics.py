"""High-SNR laws: generalized secure degrees of freedom (prelog of the
secrecy rate) and generalized secure diversity gain (decay exponent of
the total outage probability), as closed piecewise forms in
rho = log(INR)/log(SNR) plus finite-SNR slope estimators that verify
them.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .channel import ChannelRealization, RateConfig, SystemParams
from .numerics import slope_fit
from .rates import af_rates, mf_rates, secrecy_upper_bound

DEFAULT_SNR_GRID = tuple(np.logspace(6, 12, 10))


class Scheme(Enum):
    UPPER = "upper"
    MF = "mf"
    AF = "af"
    CUTSET = "upper"  # alias: the cut-set law backs the upper bound


def _check_rho(rho):
    if not np.isfinite(rho) or rho < 0:
        raise ValueError("rho must be finite and nonnegative")


def gsdof_closed_form(scheme: Scheme, rho: float) -> float:
    """Secure-DoF law: rho/2 capped at 1/2 for the bound and MF; AF falls
    back to 1 - rho/2 on [1, 2) and to 0 beyond."""
    _check_rho(rho)
    if scheme in (Scheme.UPPER, Scheme.MF):
        return rho / 2.0 if rho < 1.0 else 0.5
    if rho < 1.0:
        return rho / 2.0
    if rho < 2.0:
        return 1.0 - rho / 2.0
    return 0.0


def gsdg_closed_form(scheme: Scheme, rho: float) -> float:
    """Secure diversity law: 0 up to rho=1, then rho-1, saturating at 1
    for the bound and MF; AF peaks at 1/2 (rho=3/2) and collapses to 0
    for rho >= 2."""
    _check_rho(rho)
    if scheme in (Scheme.UPPER, Scheme.MF):
        if rho <= 1.0:
            return 0.0
        return rho - 1.0 if rho <= 2.0 else 1.0
    if rho <= 1.0:
        return 0.0
    if rho <= 1.5:
        return rho - 1.0
    if rho <= 2.0:
        return 2.0 - rho
    return 0.0


def _check_grid(snr_grid):
    grid = np.asarray(snr_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("snr_grid must be a 1-d grid with >= 2 points")
    if np.any(np.diff(grid) <= 0) or grid[0] < 1e4:
        raise ValueError("snr_grid must be increasing with min >= 1e4")
    return grid


def _rate_fn(scheme: Scheme):
    if scheme is Scheme.UPPER:
        return secrecy_upper_bound
    if scheme is Scheme.MF:
        return lambda p, r: mf_rates(p, r).rs
    return lambda p, r: af_rates(p, r).rs_af


def estimate_gsdof(scheme: Scheme, rho: float, snr_grid=DEFAULT_SNR_GRID,
                   real: ChannelRealization | None = None) -> float:
    """Finite-SNR slope estimate of the secure DoF at a given rho.

    Walks the grid with ps = snr*sigma2 and pd = snr^rho*sigma2, then fits
    the rate (in nats) against ln(snr).  The limit is independent of the
    fixed realization, which defaults to g1 = g2 = 1.
    """
    _check_rho(rho)
    grid = _check_grid(snr_grid)
    if real is None:
        real = ChannelRealization.from_gains(1.0, 1.0)
    fn = _rate_fn(scheme)
    pts = []
    for snr in grid:
        params = SystemParams(ps=snr, pd=snr ** rho, sigma2=1.0)
        rate_bits = fn(params, real)
        pts.append((np.log(snr), rate_bits * np.log(2.0)))
    return slope_fit(pts)


def estimate_gsdg(scheme: Scheme, rho: float, snr_grid=DEFAULT_SNR_GRID,
                  config: RateConfig | None = None) -> float:
    """Finite-SNR decay-exponent estimate of the secure diversity gain.

    Uses the closed-form outage probabilities, with the total outage
    proxied by max(connection, secrecy) (the two bounds share the
    exponent).
    """
    from . import outage  # deferred: outage imports Scheme from here

    _check_rho(rho)
    grid = _check_grid(snr_grid)
    if config is None:
        config = RateConfig(rd=1.0, rs=0.5)
    if scheme in (Scheme.UPPER, Scheme.CUTSET):
        conn = lambda p: outage.p_conn_cutset_lower(p, config.rd)
    elif scheme is Scheme.MF:
        conn = lambda p: outage.p_conn_mf(p, config.rd)
    else:
        conn = lambda p: outage.p_conn_af(p, config.rd)
    pts = []
    for snr in grid:
        params = SystemParams(ps=snr, pd=snr ** rho, sigma2=1.0)
        p_t = max(conn(params), outage.p_secrecy(params, config))
        if p_t <= 0.0:
            raise ValueError("total outage proxy underflowed to 0 on the grid")
        pts.append((np.log(snr), np.log(p_t)))
    return -slope_fit(pts)
