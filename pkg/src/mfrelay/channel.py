"""Parameter records, derived quantities, and Rayleigh-fading sampling.

The model is real-valued per dimension: amplitudes are h = ±sqrt(g) with
the gains g exponentially distributed (mean eps per hop), which is the
per-dimension view of Rayleigh fading.  All rates downstream carry the
matching 1/2 log2 prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _all_finite(*vals) -> bool:
    return all(np.all(np.isfinite(v)) for v in vals)


@dataclass(frozen=True)
class SystemParams:
    """Transmit powers, noise variance, and fading means (all linear).

    Fields broadcast: scalars for a single operating point, arrays for
    vectorized parameter sweeps.
    """

    ps: float
    pd: float
    sigma2: float
    eps1: float = 1.0
    eps2: float = 1.0

    def __post_init__(self):
        if not _all_finite(self.ps, self.pd, self.sigma2, self.eps1, self.eps2):
            raise ValueError("system parameters must be finite")
        if np.any(np.asarray(self.ps) <= 0) or np.any(np.asarray(self.sigma2) <= 0):
            raise ValueError("ps and sigma2 must be positive")
        if np.any(np.asarray(self.eps1) <= 0) or np.any(np.asarray(self.eps2) <= 0):
            raise ValueError("fading means eps1, eps2 must be positive")
        if np.any(np.asarray(self.pd) < 0):
            raise ValueError("pd must be nonnegative")

    @property
    def snr(self):
        return self.ps / self.sigma2

    @property
    def inr(self):
        return self.pd / self.sigma2


def derived_ratios(params: SystemParams):
    """(snr, inr, rho) with rho = log(inr)/log(snr); needs snr > 1."""
    snr = params.snr
    inr = params.inr
    if np.any(np.asarray(snr) <= 1.0):
        raise ValueError("rho is undefined for snr <= 1 (0 dB)")
    rho = np.log(inr) / np.log(snr)
    return snr, inr, rho


@dataclass(frozen=True)
class RateConfig:
    """Total rate rd and confidential rate rs, bits per real dimension."""

    rd: float
    rs: float

    def __post_init__(self):
        if not _all_finite(self.rd, self.rs):
            raise ValueError("rates must be finite")
        if np.any(np.asarray(self.rd) < 0) or np.any(np.asarray(self.rs) < 0):
            raise ValueError("rates must be nonnegative")
        if np.any(np.asarray(self.rs) > np.asarray(self.rd)):
            raise ValueError("confidential rate rs cannot exceed rd")


@dataclass(frozen=True)
class Thresholds:
    """SNR thresholds implied by a rate pair.

    gamma_o = 2^(2 rd) - 1 (connection), gamma_1 = 2^(2 rd) - 1/2 (the
    achievable-rate threshold, exactly gamma_o + 1/2), and
    gamma_s = 2^(2 (rd - rs)) - 1 (secrecy).
    """

    gamma_o: float
    gamma_1: float
    gamma_s: float


def thresholds(config: RateConfig) -> Thresholds:
    gamma_o = 2.0 ** (2.0 * config.rd) - 1.0
    return Thresholds(
        gamma_o=gamma_o,
        gamma_1=gamma_o + 0.5,
        gamma_s=2.0 ** (2.0 * (config.rd - config.rs)) - 1.0,
    )


@dataclass(frozen=True)
class ChannelRealization:
    """Instantaneous gains g_i = h_i^2 and signed amplitudes h_i.

    Fields may be scalars or equally-shaped arrays (a batch of draws).
    """

    g1: float
    g2: float
    h1: float
    h2: float

    def __post_init__(self):
        if not _all_finite(self.g1, self.g2, self.h1, self.h2):
            raise ValueError("channel realization must be finite")
        if np.any(np.asarray(self.g1) < 0) or np.any(np.asarray(self.g2) < 0):
            raise ValueError("gains must be nonnegative")
        for g, h in ((self.g1, self.h1), (self.g2, self.h2)):
            if not np.allclose(np.asarray(h) ** 2, g, rtol=1e-9, atol=1e-12):
                raise ValueError("amplitude/gain mismatch: need g = h^2")

    @classmethod
    def from_gains(cls, g1, g2, sign1=1.0, sign2=1.0):
        g1 = np.asarray(g1, dtype=float) if np.ndim(g1) else float(g1)
        g2 = np.asarray(g2, dtype=float) if np.ndim(g2) else float(g2)
        return cls(g1=g1, g2=g2, h1=sign1 * np.sqrt(g1), h2=sign2 * np.sqrt(g2))


def rng_stream(seed: int, index=None) -> np.random.Generator:
    """Deterministic counter-based generator (Philox).

    ``index`` (an int or tuple of ints) selects an independent substream;
    disjoint indices give independent streams for the same seed, which is
    how Monte Carlo work is partitioned reproducibly.
    """
    if index is None:
        key = (int(seed),)
    elif np.ndim(index) == 0:
        key = (int(seed), int(index))
    else:
        key = (int(seed), *(int(i) for i in index))
    return np.random.Generator(np.random.Philox(key=np.random.SeedSequence(key).generate_state(2, np.uint64)))


def sample_realization(params: SystemParams, rng: np.random.Generator, size=None) -> ChannelRealization:
    """Draw gains exponential(eps_i) and signs as fair coin flips.

    With ``size=None`` returns a scalar realization; otherwise array
    fields of that shape.  Deterministic given the generator state.
    """
    g1 = rng.exponential(params.eps1, size)
    g2 = rng.exponential(params.eps2, size)
    s1 = 2.0 * rng.integers(0, 2, size) - 1.0
    s2 = 2.0 * rng.integers(0, 2, size) - 1.0
    if size is None:
        return ChannelRealization.from_gains(float(g1), float(g2), float(s1), float(s2))
    return ChannelRealization.from_gains(g1, g2, s1, s2)


def sample_gains(params: SystemParams, rng: np.random.Generator, size: int):
    """Gains-only batch draw (signs are irrelevant to outage events)."""
    return rng.exponential(params.eps1, size), rng.exponential(params.eps2, size)
