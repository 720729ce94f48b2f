"""Block-constant Rayleigh fading with complex AWGN, one receive antenna."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpm import CpmConfig, IqBlock


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Channel coefficients for one fading block and the per-sample noise variance."""

    h: np.ndarray
    noise_var: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "h", np.asarray(self.h, dtype=complex).reshape(-1))
        if self.noise_var < 0:
            raise ValueError("noise_var must be non-negative")

    def with_noise(self, noise_var: float) -> "ChannelRealization":
        return ChannelRealization(self.h, noise_var)


def draw_channel(Lt: int, rng: np.random.Generator) -> ChannelRealization:
    """Independent unit-power complex Gaussian coefficients (Rayleigh amplitude, uniform phase)."""
    h = (rng.standard_normal(Lt) + 1j * rng.standard_normal(Lt)) / np.sqrt(2.0)
    return ChannelRealization(h)


def snr_to_noise_var(ebno_db: float, cfg: CpmConfig, Lt: int) -> float:
    """Complex noise variance per sample for a given Eb/N0 in dB.

    Eb is the energy each antenna spends per information bit,
    ``E_B / (Lt * log2 M)``. White noise of one-sided density N0 sampled at
    spacing ``dt`` has variance ``N0 / dt`` (``N0 / (2 dt)`` per real
    component), so a rectangle-rule correlator ``dt * sum(n * conj(s))``
    sees noise variance ``N0 * energy(s)`` independent of ``Ns``.
    """
    if np.isposinf(ebno_db):
        return 0.0
    if not np.isfinite(ebno_db):
        raise ValueError(f"Eb/N0 must be finite or +inf, got {ebno_db}")
    eb = cfg.block_energy(Lt) / (Lt * cfg.bits_per_symbol)
    n0 = eb / 10.0 ** (ebno_db / 10.0)
    return n0 / cfg.dt


def complex_noise(n: int, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    scale = np.sqrt(noise_var / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def transmit(signals, chan: ChannelRealization, rng: np.random.Generator | None = None) -> IqBlock:
    """Received signal ``sum_m h_m s_m + n`` on the common sample grid."""
    signals = list(signals)
    if len(signals) != chan.h.size:
        raise ValueError(f"{len(signals)} antenna signals for {chan.h.size} channel coefficients")
    ref = signals[0]
    for s in signals[1:]:
        if not ref.same_grid(s):
            raise ValueError("antenna signals are not on the same sample grid")
    r = chan.h @ np.stack([s.samples for s in signals])
    if chan.noise_var > 0:
        if rng is None:
            raise ValueError("a random generator is required when noise_var > 0")
        r = r + complex_noise(r.size, chan.noise_var, rng)
    return IqBlock(r, t0=ref.t0, dt=ref.dt)
