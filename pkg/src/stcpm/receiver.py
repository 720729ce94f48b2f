"""Separable receiver: dephaser bank, merged CPM trellis and Viterbi MLSE.

All metrics are correlations to be maximised. The brute-force block
decoder :func:`joint_ml_decode` minimises the Euclidean distance over all
``M**Lt`` candidate blocks and serves as an oracle for the fast path.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .channel import ChannelRealization
from .correction import CorrectionBank
from .cpm import (CpmConfig, IqBlock, PhaseState, modulate_block, phase_pulse,
                  startup_tail)


@dataclass(frozen=True, eq=False)
class TrellisSpec:
    """Block-independent CPM trellis.

    A state is ``(phase index, correlative tuple)`` where the phase index
    counts ``1/nu`` cycles and the tuple holds the ``gamma - 1`` most recent
    symbols, oldest first. ``prev_state``/``prev_symbol`` list the ``M``
    incoming edges of every state sorted by predecessor index, and
    ``waveforms[s, k]`` is the unit-amplitude hypothesis over one symbol
    interval for leaving state ``s`` with symbol ``alphabet[k]``.
    """

    cfg: CpmConfig
    states: tuple
    next_state: np.ndarray
    prev_state: np.ndarray
    prev_symbol: np.ndarray
    waveforms: np.ndarray

    @property
    def nu(self) -> int:
        return self.cfg.n_phase_states

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def branches_per_symbol(self) -> int:
        return self.n_states * self.cfg.M

    def state_index(self, theta: PhaseState, tail) -> int:
        if theta.denom != self.nu:
            raise ValueError(f"phase state denominator {theta.denom} != {self.nu}")
        tail = tuple(int(v) for v in np.asarray(tail, dtype=int).reshape(-1))
        return self.states.index((theta.numer, tail))


@dataclass
class DecodeResult:
    symbols: np.ndarray
    metric: float
    branch_evals: int


def hypothesis_waveform(cfg: CpmConfig, state, symbol: int) -> np.ndarray:
    """Unit-amplitude signal over one symbol interval leaving ``state`` with ``symbol``."""
    phase_idx, corr = state
    tau = np.arange(cfg.Ns) * cfg.dt
    g = cfg.gamma - 1
    phase = np.full(cfg.Ns, phase_idx / cfg.phase_denom)
    for a, d in enumerate(corr):
        phase += float(cfg.h) * d * phase_pulse(cfg.pulse, tau + (g - a) * cfg.T, cfg.T)
    phase += float(cfg.h) * symbol * phase_pulse(cfg.pulse, tau, cfg.T)
    return np.exp(2j * np.pi * phase)


@lru_cache(maxsize=32)
def build_trellis(cfg: CpmConfig) -> TrellisSpec:
    M, nu, g = cfg.M, cfg.n_phase_states, cfg.gamma - 1
    alphabet = [int(a) for a in cfg.alphabet]
    states = tuple((ph, corr) for ph in range(nu) for corr in product(alphabet, repeat=g))
    index = {s: i for i, s in enumerate(states)}
    S = len(states)

    next_state = np.empty((S, M), dtype=np.int64)
    waveforms = np.empty((S, M, cfg.Ns), dtype=complex)
    for i, (ph, corr) in enumerate(states):
        for k, d in enumerate(alphabet):
            oldest = corr[0] if g else d
            nxt = ((ph + cfg.phase_step * oldest) % nu, corr[1:] + (d,) if g else ())
            next_state[i, k] = index[nxt]
            waveforms[i, k] = hypothesis_waveform(cfg, (ph, corr), d)

    incoming = [[] for _ in range(S)]
    for i in range(S):
        for k in range(M):
            incoming[next_state[i, k]].append((i, k))
    if any(len(e) != M for e in incoming):
        raise AssertionError("trellis is not regular")
    prev = np.array([sorted(e) for e in incoming])  # (S, M, 2), sorted by predecessor
    waveforms.setflags(write=False)
    return TrellisSpec(cfg, states, next_state, prev[:, :, 0], prev[:, :, 1], waveforms)


def dephase_combine(r: IqBlock, bank: CorrectionBank, chan: ChannelRealization,
                    T: float = 1.0) -> IqBlock:
    """Pseudo received signal ``r(t) * sum_m conj(h_m c_m(t))``."""
    if chan.h.size != bank.Lt:
        raise ValueError("channel and correction bank disagree on Lt")
    w = chan.h @ bank.values(r.times, T)
    return IqBlock(r.samples * np.conj(w), t0=r.t0, dt=r.dt)


def branch_metric(x_segment, state, symbol: int, cfg: CpmConfig, Lt: int = 1) -> float:
    """Rectangle-rule ``Re integral x(t) conj(s~(t))`` over one symbol interval."""
    x_segment = np.asarray(getattr(x_segment, "samples", x_segment), dtype=complex)
    if x_segment.size != cfg.Ns:
        raise ValueError(f"segment has {x_segment.size} samples, expected Ns={cfg.Ns}")
    s = cfg.amplitude(Lt) * hypothesis_waveform(cfg, state, symbol)
    return float(np.real(np.sum(x_segment * np.conj(s))) * cfg.dt)


def branch_metrics(x, trellis: TrellisSpec, Lt: int = 1) -> np.ndarray:
    """All branch metrics, shape ``(..., n_symbols, n_states, M)``."""
    cfg = trellis.cfg
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] % cfg.Ns:
        raise ValueError("signal length is not a whole number of symbol intervals")
    seg = x.reshape(x.shape[:-1] + (-1, cfg.Ns))
    w = (cfg.amplitude(Lt) * trellis.waveforms).reshape(-1, cfg.Ns)
    bm = np.real(seg @ w.conj().T) * cfg.dt
    return bm.reshape(bm.shape[:-1] + (trellis.n_states, cfg.M))


def viterbi_batch(x, trellis: TrellisSpec, known_prefix=(), Lt: int = 1,
                  initial_state: int | None = None):
    """Viterbi over a batch of signals of equal length.

    Returns ``(symbols, metrics, branch_evals)`` with ``symbols`` of shape
    ``(batch, n_symbols)``. Ties go to the lower state index.
    """
    cfg = trellis.cfg
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    bm = branch_metrics(x, trellis, Lt)
    B, L, S, M = bm.shape
    if initial_state is None:
        initial_state = trellis.state_index(PhaseState.zero(cfg), startup_tail(cfg))
    prefix = [int(np.flatnonzero(cfg.alphabet == d)[0]) for d in cfg.check_symbols(known_prefix)]
    if len(prefix) > L:
        raise ValueError("known prefix longer than the signal")

    ps, pk = trellis.prev_state, trellis.prev_symbol
    flat = (ps * M + pk).reshape(-1)
    metric = np.full((B, S), -np.inf)
    metric[:, initial_state] = 0.0
    survivors = np.empty((B, L, S), dtype=np.int8)
    rows = np.arange(B)[:, None]
    for n in range(L):
        cand = metric[:, ps] + bm[:, n].reshape(B, S * M)[:, flat].reshape(B, S, M)
        if n < len(prefix):
            cand[:, pk != prefix[n]] = -np.inf
        best = np.argmax(cand, axis=2)
        survivors[:, n] = best
        metric = np.take_along_axis(cand, best[:, :, None], axis=2)[:, :, 0]

    state = np.argmax(metric, axis=1)
    final = metric[np.arange(B), state]
    out = np.empty((B, L), dtype=int)
    for n in range(L - 1, -1, -1):
        k = survivors[rows[:, 0], n, state]
        out[:, n] = cfg.alphabet[pk[state, k]]
        state = ps[state, k]
    return out, final, L * S * M


def viterbi_decode(x, trellis: TrellisSpec, cfg: CpmConfig | None = None, known_prefix=(),
                   Lt: int = 1, initial_state: int | None = None) -> DecodeResult:
    """Maximum-correlation symbol sequence for one pseudo received signal."""
    if cfg is not None and cfg != trellis.cfg:
        raise ValueError("trellis was built for a different configuration")
    samples = getattr(x, "samples", x)
    symbols, metric, evals = viterbi_batch(samples, trellis, known_prefix, Lt, initial_state)
    return DecodeResult(symbols[0], float(metric[0]), evals)


def block_hypotheses(cfg: CpmConfig, Lt: int) -> np.ndarray:
    return np.array(list(product(cfg.alphabet, repeat=Lt)), dtype=int).reshape(-1, Lt)


def ml_path_count(trellis: TrellisSpec, Lt: int) -> int:
    """Paths a non-separated receiver scores per ST block: states times ``M**Lt``."""
    return trellis.n_states * trellis.cfg.M ** Lt


def ml_block_distances(r: IqBlock, theta: PhaseState, tail, chan: ChannelRealization,
                       bank: CorrectionBank, cfg: CpmConfig, l: int = 0,
                       cap: int = 4096):
    """Squared distance ``integral |r - sum_m h_m c_m s~|^2`` for every candidate block."""
    Lt = bank.Lt
    if cfg.M ** Lt > cap:
        raise ValueError(f"{cfg.M ** Lt} hypotheses exceed the cap of {cap}")
    if len(r) != Lt * cfg.Ns:
        raise ValueError("r must span exactly one ST block")
    hyps = block_hypotheses(cfg, Lt)
    weight = chan.h @ bank.values(r.times, cfg.T)
    dist = np.empty(len(hyps))
    for i, d in enumerate(hyps):
        s = modulate_block(d, theta, tail, cfg, Lt, l).samples
        dist[i] = cfg.dt * np.sum(np.abs(r.samples - weight * s) ** 2)
    return hyps, dist


def joint_ml_decode(r: IqBlock, theta: PhaseState, tail, chan: ChannelRealization,
                    bank: CorrectionBank, cfg: CpmConfig, l: int = 0,
                    cap: int = 4096) -> np.ndarray:
    hyps, dist = ml_block_distances(r, theta, tail, chan, bank, cfg, l, cap)
    return hyps[np.argmin(dist)]


def block_correlations(x: IqBlock, theta: PhaseState, tail, trellis: TrellisSpec, Lt: int):
    """Separable metric of every candidate block, summed symbol by symbol along the trellis."""
    cfg = trellis.cfg
    bm = branch_metrics(x.samples, trellis, Lt)
    if bm.shape[0] != Lt:
        raise ValueError("x must span exactly one ST block")
    start = trellis.state_index(theta, tail)
    hyps = block_hypotheses(cfg, Lt)
    corr = np.zeros(len(hyps))
    for i, d in enumerate(hyps):
        s = start
        for n, sym in enumerate(d):
            k = (sym + cfg.M - 1) // 2
            corr[i] += bm[n, s, k]
            s = trellis.next_state[s, k]
    return hyps, corr


def separable_block_decode(x: IqBlock, theta: PhaseState, tail, trellis: TrellisSpec,
                           Lt: int) -> np.ndarray:
    hyps, corr = block_correlations(x, theta, tail, trellis, Lt)
    return hyps[np.argmax(corr)]
