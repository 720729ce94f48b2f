"""Full-diversity and orthogonality certificates for a correction bank."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .correction import CorrectionBank, gram_matrix
from .cpm import CpmConfig, IqBlock, PhaseState, modulate_block

FULL_RANK_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SignalMatrix:
    entries: np.ndarray
    pair: tuple

    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)


@dataclass
class DiversityReport:
    """``min_singular_value`` is normalised by the block energy."""

    min_singular_value: float
    worst_pair: tuple
    tolerance: float
    rows: list = field(default_factory=list, repr=False)

    @property
    def certified(self) -> bool:
        return self.min_singular_value > self.tolerance

    def verdict(self) -> str:
        word = "FULL DIVERSITY" if self.certified else "RANK DEFICIENT"
        return (f"{word}: min singular value {self.min_singular_value:.6e} E_B over "
                f"{len(self.rows)} pairs (tolerance {self.tolerance:g})")


def signal_difference(d, d_tilde, theta: PhaseState, tail, cfg: CpmConfig,
                      bank: CorrectionBank, l: int = 0) -> list:
    """Per-antenna difference ``c_m(t) (s(t, d) - s(t, d~))``."""
    Lt = bank.Lt
    a = modulate_block(d, theta, tail, cfg, Lt, l)
    b = modulate_block(d_tilde, theta, tail, cfg, Lt, l)
    c = bank.values(a.times, cfg.T)
    diff = a.samples - b.samples
    return [IqBlock(c[m] * diff, t0=a.t0, dt=a.dt) for m in range(Lt)]


def signal_matrix(d, d_tilde, theta: PhaseState, tail, cfg: CpmConfig,
                  bank: CorrectionBank, l: int = 0) -> SignalMatrix:
    delta = np.stack([b.samples for b in signal_difference(d, d_tilde, theta, tail, cfg, bank, l)])
    C = cfg.dt * (delta @ delta.conj().T)
    return SignalMatrix(C, (tuple(np.ravel(d)), tuple(np.ravel(d_tilde))))


def _min_singular_values(diffs: np.ndarray, bank: CorrectionBank, cfg: CpmConfig) -> np.ndarray:
    t = np.arange(diffs.shape[1]) * cfg.dt
    c = bank.values(t, cfg.T)
    w = np.abs(diffs) ** 2
    C = cfg.dt * np.einsum("pn,mn,kn->pmk", w, c, c.conj())
    return np.linalg.svd(C, compute_uv=False)[:, -1]


def _fmt(v) -> str:
    return " ".join(str(int(x)) for x in np.ravel(v))


def diversity_certify(cfg: CpmConfig, bank: CorrectionBank, strategy: str = "exhaustive",
                      n_samples: int = 1000, seed: int = 0, cap: int = 100_000,
                      tol: float = FULL_RANK_TOL) -> DiversityReport:
    """Smallest singular value of the signal matrix over single-block symbol pairs.

    ``exhaustive`` visits every unordered pair ``d != d~`` for every phase
    state and every correlative tail; ``sampled`` draws ``n_samples``
    pairs with a seeded generator.
    """
    Lt, M = bank.Lt, cfg.M
    E_B = cfg.block_energy(Lt)
    thetas = [PhaseState(k, cfg.phase_denom) for k in range(cfg.n_phase_states)]
    tails = [np.array(t, dtype=int) for t in product(cfg.alphabet, repeat=cfg.gamma - 1)]
    blocks = list(product(cfg.alphabet, repeat=Lt))

    if strategy == "exhaustive":
        if M ** (2 * Lt) > cap:
            raise ValueError(f"{M ** (2 * Lt)} symbol pairs exceed the exhaustive cap of {cap}")
        jobs = [(th, tl, blocks[i], blocks[j]) for th in thetas for tl in tails
                for i, j in combinations(range(len(blocks)), 2)]
    elif strategy == "sampled":
        rng = np.random.default_rng(seed)
        jobs = []
        for _ in range(n_samples):
            th = thetas[rng.integers(len(thetas))]
            tl = tails[rng.integers(len(tails))]
            d = rng.choice(cfg.alphabet, Lt)
            dt = d.copy()
            while np.array_equal(d, dt):
                dt = rng.choice(cfg.alphabet, Lt)
            jobs.append((th, tl, tuple(d), tuple(dt)))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    cache = {}

    def wave(th, tl, d):
        key = (th.numer, tuple(tl), tuple(d))
        if key not in cache:
            cache[key] = modulate_block(d, th, tl, cfg, Lt).samples
        return cache[key]

    diffs = np.stack([wave(th, tl, d) - wave(th, tl, dt) for th, tl, d, dt in jobs])
    smin = _min_singular_values(diffs, bank, cfg) / E_B
    rows = [(i, f"{th.numer}/{th.denom}", _fmt(tl), _fmt(d), _fmt(dt), float(v))
            for i, ((th, tl, d, dt), v) in enumerate(zip(jobs, smin))]
    worst = int(np.argmin(smin))
    th, tl, d, dt = jobs[worst]
    pair = tuple(tuple(int(v) for v in seq) for seq in (tl, d, dt))
    return DiversityReport(float(smin[worst]), (th, *pair), tol, rows)


def vandermonde_certificate(bank: CorrectionBank, T: float = 1.0) -> bool:
    """Algebraic full-diversity check for a linear-phase bank.

    ``sum_m u_m c_m(t) = 0`` on a block makes the degree ``Lt - 1``
    polynomial with coefficients ``u_m exp(j2pi beta_m)`` vanish at every
    node ``exp(j2pi alpha t / (Lt T))``; ``Lt`` distinct nodes inside the
    block force ``u = 0``.
    """
    if bank.alpha == 0:
        return False
    # spacing keeps alpha*t/(Lt T) within half a turn so nodes stay distinct
    step = T * min(1.0, 1.0 / (2.0 * abs(bank.alpha)))
    t = step * np.arange(bank.Lt)
    nodes = np.exp(2j * np.pi * bank.alpha * t / (bank.Lt * T))
    V = np.vander(nodes, bank.Lt, increasing=True)
    return bool(np.linalg.matrix_rank(V) == bank.Lt)


def orthogonality_defect(bank: CorrectionBank, Ns: int = 16, T: float = 1.0) -> float:
    """Largest off-diagonal Gram magnitude relative to the block length ``Lt T``."""
    G = gram_matrix(bank, Ns, T)
    off = G - np.diag(np.diag(G))
    return float(np.max(np.abs(off)) / (bank.Lt * T)) if bank.Lt > 1 else 0.0
