"""Linear-phase correction functions, one per transmit antenna."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpm import IqBlock


@dataclass(frozen=True)
class CorrectionBank:
    """Antenna ``m`` (1-based) gets phase ``(m-1) * alpha * t / (Lt*T) + betas[m-1]`` cycles.

    Any real ``alpha`` is accepted so that non-orthogonal banks can be
    studied; only nonzero integer slopes give L2-orthogonal antennas.
    """

    Lt: int
    alpha: float = 1
    betas: tuple = ()

    def __post_init__(self):
        if self.Lt < 1:
            raise ValueError("Lt must be >= 1")
        betas = tuple(float(b) for b in self.betas) or (0.0,) * self.Lt
        if len(betas) != self.Lt:
            raise ValueError(f"betas has {len(betas)} entries, expected Lt={self.Lt}")
        object.__setattr__(self, "betas", betas)

    @property
    def is_orthogonal(self) -> bool:
        return self.alpha != 0 and float(self.alpha).is_integer()

    def phases(self, t, T: float = 1.0) -> np.ndarray:
        """Correction phases in cycles, shape ``(Lt, len(t))``."""
        t = np.asarray(t, dtype=float)
        slope = np.arange(self.Lt)[:, None] * self.alpha / (self.Lt * T)
        ramp = slope * t[None, :]
        if self.is_orthogonal:
            # integer slope: only the fractional part matters, keeps long bursts exact
            ramp = np.mod(ramp, 1.0)
        return ramp + np.asarray(self.betas)[:, None]

    def values(self, t, T: float = 1.0) -> np.ndarray:
        """Complex correction factors c_m(t), shape ``(Lt, len(t))``."""
        return np.exp(2j * np.pi * self.phases(t, T))


def correction_phase(bank: CorrectionBank, m: int, t: float, T: float = 1.0) -> float:
    """Unreduced phase of antenna ``m`` at time ``t``, in cycles."""
    if not 1 <= m <= bank.Lt:
        raise ValueError(f"antenna index {m} outside 1..{bank.Lt}")
    return (m - 1) / (bank.Lt * T) * bank.alpha * t + bank.betas[m - 1]


def apply_corrections(s: IqBlock, bank: CorrectionBank, T: float = 1.0) -> list:
    """Split one CPM signal into ``Lt`` antenna signals."""
    c = bank.values(s.times, T)
    return [IqBlock(s.samples * c[m], t0=s.t0, dt=s.dt) for m in range(bank.Lt)]


def gram_matrix(bank: CorrectionBank, Ns: int = 16, T: float = 1.0) -> np.ndarray:
    """Rectangle-rule Gram matrix of the correction functions over one block ``[0, Lt*T)``."""
    dt = T / Ns
    t = np.arange(bank.Lt * Ns) * dt
    c = bank.values(t, T)
    return dt * (c @ c.conj().T)
