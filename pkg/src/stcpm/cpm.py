"""Continuous phase modulation with exact rational phase-state bookkeeping.

Time is measured in units of the symbol duration ``T``. Symbols of the
burst are numbered from 1; symbol ``i`` starts its phase pulse at
``(i - 1) T``, so block ``l`` of an ``Lt``-antenna code occupies
``[l Lt T, (l + 1) Lt T)`` and carries symbols ``l Lt + 1 ... (l + 1) Lt``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log2

import numpy as np


@dataclass(frozen=True)
class PulseSpec:
    """Phase pulse description. Only the rectangular-frequency ``LREC`` family."""

    kind: str = "REC"
    length: int = 2

    def __post_init__(self):
        if self.kind != "REC":
            raise ValueError(f"unsupported pulse kind {self.kind!r}, only 'REC'")
        if self.length < 1:
            raise ValueError("pulse length must be >= 1")


def phase_pulse(pulse: PulseSpec, t, T: float = 1.0):
    """Phase pulse q(t) of an LREC pulse: 0 before 0, t/(2LT) on the ramp, 1/2 after LT."""
    t = np.asarray(t, dtype=float)
    q = np.clip(t / (2.0 * pulse.length * T), 0.0, 0.5)
    return q if q.ndim else float(q)


@dataclass(frozen=True)
class CpmConfig:
    """Modulation parameters.

    ``E_B`` is the block energy per antenna; ``None`` means ``Lt * T`` so
    every sample has unit magnitude whatever the number of antennas.
    """

    M: int = 4
    m0: int = 1
    p: int = 2
    gamma: int = 2
    pulse: PulseSpec | None = None
    T: float = 1.0
    E_B: float | None = None
    Ns: int = 16
    Lb: int = 130

    def __post_init__(self):
        if self.M < 2 or self.M & (self.M - 1):
            raise ValueError(f"M must be a power of two >= 2, got {self.M}")
        if self.m0 < 1 or self.p < 1:
            raise ValueError("m0 and p must be positive integers")
        if gcd(self.m0, self.p) != 1:
            raise ValueError(f"m0={self.m0} and p={self.p} are not coprime")
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        if self.Ns < 2:
            raise ValueError("Ns must be >= 2")
        if self.Lb < 1:
            raise ValueError("Lb must be >= 1")
        if self.T <= 0:
            raise ValueError("T must be positive")
        if self.pulse is None:
            object.__setattr__(self, "pulse", PulseSpec("REC", self.gamma))
        elif self.pulse.length != self.gamma:
            raise ValueError("pulse length must equal the memory gamma")

    @property
    def h(self) -> Fraction:
        return Fraction(self.m0, self.p)

    @property
    def alphabet(self) -> np.ndarray:
        return np.arange(-self.M + 1, self.M, 2)

    @property
    def bits_per_symbol(self) -> int:
        return int(log2(self.M))

    @property
    def phase_denom(self) -> int:
        # h/2 * d = m0*d/(2p) with d odd: half-steps only survive for odd m0
        return 2 * self.p if self.m0 % 2 else self.p

    @property
    def n_phase_states(self) -> int:
        return self.phase_denom

    @property
    def phase_step(self) -> int:
        """Phase increment, in units of 1/phase_denom cycles, per unit of symbol value."""
        return self.m0 if self.m0 % 2 else self.m0 // 2

    @property
    def dt(self) -> float:
        return self.T / self.Ns

    def block_energy(self, Lt: int) -> float:
        return Lt * self.T if self.E_B is None else self.E_B

    def amplitude(self, Lt: int) -> float:
        return float(np.sqrt(self.block_energy(Lt) / (self.T * Lt)))

    def check_symbols(self, symbols) -> np.ndarray:
        symbols = np.asarray(symbols, dtype=int).reshape(-1)
        bad = (symbols % 2 == 0) | (np.abs(symbols) > self.M - 1)
        if bad.any():
            raise ValueError(f"symbol {symbols[bad][0]} outside the alphabet for M={self.M}")
        return symbols


@dataclass(frozen=True)
class PhaseState:
    """Accumulated phase ``numer/denom`` cycles, kept reduced modulo one."""

    numer: int
    denom: int

    def __post_init__(self):
        if self.denom < 1:
            raise ValueError("denom must be positive")
        object.__setattr__(self, "numer", int(self.numer) % self.denom)

    @classmethod
    def zero(cls, cfg: CpmConfig) -> "PhaseState":
        return cls(0, cfg.phase_denom)

    @property
    def cycles(self) -> float:
        return self.numer / self.denom

    def as_fraction(self) -> Fraction:
        return Fraction(self.numer, self.denom)

    def advance(self, symbols, cfg: CpmConfig) -> "PhaseState":
        """Add h/2 times the sum of ``symbols``."""
        total = int(np.sum(np.asarray(symbols, dtype=np.int64)))
        return PhaseState(self.numer + cfg.phase_step * total, self.denom)


@dataclass(frozen=True, eq=False)
class IqBlock:
    """Uniformly sampled complex baseband segment."""

    samples: np.ndarray
    t0: float = 0.0
    dt: float = 1.0 / 16
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))

    def __len__(self):
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))

    def same_grid(self, other: "IqBlock") -> bool:
        return (len(self) == len(other) and np.isclose(self.dt, other.dt)
                and np.isclose(self.t0, other.t0))


def _gray_table(M: int) -> np.ndarray:
    idx = np.arange(M)
    return idx ^ (idx >> 1)


def map_bits_to_symbols(bits, M: int) -> np.ndarray:
    """Gray-map groups of log2(M) bits (MSB first) onto {-M+1, ..., M-1}."""
    k = int(log2(M))
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    if bits.size % k:
        raise ValueError(f"{bits.size} bits is not a multiple of log2(M)={k}")
    words = bits.reshape(-1, k) @ (1 << np.arange(k - 1, -1, -1))
    inverse = np.argsort(_gray_table(M))
    return 2 * inverse[words] - (M - 1)


def symbols_to_bits(symbols, M: int) -> np.ndarray:
    k = int(log2(M))
    idx = (np.asarray(symbols, dtype=np.int64).reshape(-1) + M - 1) // 2
    words = _gray_table(M)[idx]
    return ((words[:, None] >> np.arange(k - 1, -1, -1)) & 1).reshape(-1)


def accumulated_phase(history, l: int, cfg: CpmConfig, Lt: int,
                      first_index: int = 1) -> PhaseState:
    """Accumulated phase at the start of block ``l``.

    Sums h/2 * d_i over every symbol index ``i <= l*Lt - gamma + 1``.
    ``history[k]`` holds symbol index ``first_index + k``; earlier symbols
    are taken to contribute nothing.
    """
    last = l * Lt - cfg.gamma + 1
    n = last - first_index + 1
    if n <= 0:
        return PhaseState.zero(cfg)
    history = np.asarray(history, dtype=np.int64).reshape(-1)
    if history.size < n:
        raise ValueError(
            f"block {l} needs symbols up to index {last}, history ends at "
            f"{first_index + history.size - 1}")
    return PhaseState.zero(cfg).advance(history[:n], cfg)


def startup_tail(cfg: CpmConfig) -> np.ndarray:
    """Known symbols assumed to precede every burst (all +1)."""
    return np.ones(cfg.gamma - 1, dtype=int)


def modulate_block(d, theta: PhaseState, tail, cfg: CpmConfig, Lt: int,
                   l: int = 0) -> IqBlock:
    """Samples of one ``Lt``-symbol CPM block.

    ``tail`` holds the ``gamma - 1`` symbols preceding the block whose pulses
    are still ramping at the block start.
    """
    d = cfg.check_symbols(d)
    tail = cfg.check_symbols(tail)
    if d.size != Lt:
        raise ValueError(f"block needs {Lt} symbols, got {d.size}")
    if tail.size != cfg.gamma - 1:
        raise ValueError(f"tail needs {cfg.gamma - 1} symbols, got {tail.size}")
    syms = np.concatenate([tail, d])
    starts = (np.arange(syms.size) - (cfg.gamma - 1)) * cfg.T
    tau = np.arange(Lt * cfg.Ns) * cfg.dt
    q = phase_pulse(cfg.pulse, tau[:, None] - starts[None, :], cfg.T)
    phase = theta.cycles + float(cfg.h) * (q @ syms)
    samples = cfg.amplitude(Lt) * np.exp(2j * np.pi * phase)
    return IqBlock(samples, t0=l * Lt * cfg.T, dt=cfg.dt)


def modulate_burst(symbols, cfg: CpmConfig, Lt: int, tail=None) -> IqBlock:
    """Modulate a burst block by block, threading the accumulated phase.

    The burst starts with zero accumulated phase; ``tail`` defaults to
    :func:`startup_tail`. All blocks are evaluated at once; the result
    equals concatenating :func:`modulate_block` over the blocks with
    :func:`accumulated_phase` supplying each block's phase.
    """
    symbols = cfg.check_symbols(symbols)
    if symbols.size % Lt:
        raise ValueError(f"burst length {symbols.size} is not divisible by Lt={Lt}")
    tail = startup_tail(cfg) if tail is None else cfg.check_symbols(tail)
    if tail.size != cfg.gamma - 1:
        raise ValueError(f"tail needs {cfg.gamma - 1} symbols, got {tail.size}")
    g = cfg.gamma - 1
    n_blocks = symbols.size // Lt
    full = np.concatenate([tail, symbols])  # full[k] is symbol index k - g + 1
    # block l sums indices <= l*Lt - g, i.e. full[:l*Lt]
    summed = np.concatenate([[0], np.cumsum(full, dtype=np.int64)])[np.arange(n_blocks) * Lt]
    theta = (cfg.phase_step * summed) % cfg.phase_denom / cfg.phase_denom
    windows = np.lib.stride_tricks.sliding_window_view(full, g + Lt)[::Lt][:n_blocks]
    starts = (np.arange(g + Lt) - g) * cfg.T
    tau = np.arange(Lt * cfg.Ns) * cfg.dt
    q = phase_pulse(cfg.pulse, tau[:, None] - starts[None, :], cfg.T)
    phase = theta[:, None] + float(cfg.h) * (windows @ q.T)
    samples = cfg.amplitude(Lt) * np.exp(2j * np.pi * phase)
    return IqBlock(samples.reshape(-1), t0=0.0, dt=cfg.dt)
