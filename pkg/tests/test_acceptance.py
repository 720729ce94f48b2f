"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""
import csv
import time

import numpy as np
import pytest
from scipy.stats import binomtest

from stcpm.analysis import diversity_certify
from stcpm.channel import draw_channel, snr_to_noise_var, transmit
from stcpm.cli import main
from stcpm.correction import CorrectionBank, apply_corrections, gram_matrix
from stcpm.cpm import CpmConfig, PhaseState, modulate_block
from stcpm.harness import ExperimentConfig, run_ber
from stcpm.receiver import (block_correlations, build_trellis, dephase_combine,
                            ml_block_distances, viterbi_decode)


@pytest.fixture
def verdict(capsys):
    def report(n, title, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n} {title}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return report


def test_c1_orthogonality(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_off, worst_diag = 0.0, 0.0
    for Lt in (1, 2, 3, 4):
        for _ in range(100):
            G = gram_matrix(CorrectionBank(Lt, 1, tuple(rng.uniform(0, 1, Lt))), Ns=16)
            off = np.abs(G - np.diag(np.diag(G))).max() / Lt
            diag = np.abs(np.diag(G) - Lt).max() / Lt
            worst_off, worst_diag = max(worst_off, off), max(worst_diag, diag)
    elapsed = time.perf_counter() - t0
    ok = worst_off <= 1e-9 and worst_diag <= 1e-12 and elapsed < 1.0
    verdict(1, "orthogonality", ok, f"max off-diagonal / LtT {worst_off:.1e}, "
            f"diagonal rel. error {worst_diag:.1e}, {elapsed:.2f} s")


def test_c2_diversity(verdict):
    t0 = time.perf_counter()
    cfg = CpmConfig(M=4, m0=1, p=2, gamma=2)
    ex = diversity_certify(cfg, CorrectionBank(2), "exhaustive")
    sa = diversity_certify(cfg, CorrectionBank(3), "sampled", n_samples=1000, seed=0)
    elapsed = time.perf_counter() - t0
    ok = ex.certified and sa.certified and elapsed < 60
    verdict(2, "diversity", ok, f"Lt=2 exhaustive min sv/E_B {ex.min_singular_value:.3e} over "
            f"{len(ex.rows)} pairs, Lt=3 sampled {sa.min_singular_value:.3e}, {elapsed:.1f} s")


def test_c3_decoder_equivalence(verdict):
    t0 = time.perf_counter()
    cfg = CpmConfig(M=4, m0=1, p=2, gamma=2)
    trellis = build_trellis(cfg)
    Lt = 2
    rng = np.random.default_rng(6)
    worst_rel, agree, ties, n = 0.0, 0, 0, 1000
    for _ in range(n):
        bank = CorrectionBank(Lt, 1, tuple(rng.uniform(0, 1, Lt)))
        chan = draw_channel(Lt, rng).with_noise(snr_to_noise_var(6.0, cfg, Lt))
        theta = PhaseState(int(rng.integers(cfg.phase_denom)), cfg.phase_denom)
        tail = [int(rng.choice(cfg.alphabet))]
        l = int(rng.integers(65))
        s = modulate_block(rng.choice(cfg.alphabet, Lt), theta, tail, cfg, Lt, l)
        r = transmit(apply_corrections(s, bank), chan, rng)
        x = dephase_combine(r, bank, chan)
        hyps, dist = ml_block_distances(r, theta, tail, chan, bank, cfg, l)
        _, corr = block_correlations(x, theta, tail, trellis, Lt)
        const = cfg.dt * np.sum(np.abs(r.samples) ** 2) + cfg.block_energy(Lt) * np.sum(np.abs(chan.h) ** 2)
        worst_rel = max(worst_rel, np.max(np.abs(dist - (const - 2 * corr)) / np.abs(dist).max()))
        best = np.sort(dist)
        if best[1] - best[0] <= 1e-9 * np.abs(dist).max():
            ties += 1
            continue
        start = trellis.state_index(theta, tail)
        decided = viterbi_decode(x, trellis, Lt=Lt, initial_state=start).symbols
        agree += np.array_equal(hyps[np.argmin(dist)], decided)
    rate = agree / (n - ties)
    elapsed = time.perf_counter() - t0
    ok = worst_rel <= 1e-9 and rate >= 0.999 and elapsed < 60
    verdict(3, "decoder equivalence", ok, f"identity rel. error {worst_rel:.1e}, agreement "
            f"{agree}/{n - ties} ({ties} ties), {elapsed:.1f} s")


def test_c4_complexity_counts(verdict):
    found = {}
    for m0, p in ((1, 2), (4, 5)):
        for Lt in (1, 2, 3):
            cfg = CpmConfig(M=4, m0=m0, p=p, gamma=2, Lb=6)
            tr = build_trellis(cfg)
            run = run_ber(ExperimentConfig(cfg, CorrectionBank(Lt), (np.inf,), bursts=1))[0]
            found.setdefault((m0, p), set()).add(
                (tr.n_states, tr.branches_per_symbol, run.branch_evals_per_symbol))
    ok = found == {(1, 2): {(16, 64, 64)}, (4, 5): {(20, 80, 80)}}
    verdict(4, "complexity counts", ok, f"(states, branches, evaluated) by h: {found}")


def test_c5_noiseless(verdict):
    t0 = time.perf_counter()
    errors = {}
    for Lt, Lb in ((1, 130), (2, 130), (3, 129)):
        cfg = CpmConfig(M=4, m0=1, p=2, gamma=2, Lb=Lb)
        config = ExperimentConfig(cfg, CorrectionBank(Lt, 1, (0.3,) * Lt), (np.inf,),
                                  bursts=80, master_seed=Lt, min_bit_errors=0)
        rec = run_ber(config)[0]
        assert rec.bits // 2 >= 10_000
        errors[Lt] = rec.bit_errors
    elapsed = time.perf_counter() - t0
    ok = not any(errors.values()) and elapsed < 10
    verdict(5, "noiseless decoding", ok, f"bit errors by Lt {errors}, {elapsed:.1f} s")


def _measure(Lt, m0, p, ebno, bursts):
    Lb = 129 if Lt == 3 else 130
    cfg = CpmConfig(M=4, m0=m0, p=p, gamma=2, Lb=Lb)
    rec = run_ber(ExperimentConfig(cfg, CorrectionBank(Lt), (ebno,), bursts=bursts,
                                   master_seed=17, min_bit_errors=0))[0]
    ci = binomtest(rec.bit_errors, rec.bits).proportion_ci(0.95, method="exact")
    return rec, (ci.low, ci.high)


@pytest.mark.slow
def test_c6_ber_behaviour(verdict):
    t0 = time.perf_counter()
    res = {Lt: _measure(Lt, 1, 2, 20.0, b) for Lt, b in ((1, 4096), (2, 16384), (3, 32768))}
    half, _ = _measure(2, 1, 2, 14.0, 8192)
    eight, _ = _measure(2, 4, 5, 14.0, 8192)
    elapsed = time.perf_counter() - t0
    (r1, c1), (r2, c2), (r3, c3) = res[1], res[2], res[3]
    ordered = r3.ber < r2.ber < r1.ber and c3[1] < c2[0] and c2[1] < c1[0]
    index = eight.ber < half.ber
    ok = ordered and index and min(r.bits for r, _ in res.values()) >= 1e5 and elapsed < 600
    lines = "; ".join(f"Lt={Lt} BER {r.ber:.2e} [{c[0]:.1e}, {c[1]:.1e}] ({r.bit_errors}/{r.bits})"
                      for Lt, (r, c) in res.items())
    verdict(6, "BER behaviour", ok, f"{lines}; 14 dB Lt=2 h=0.5 {half.ber:.2e}, "
            f"h=0.8 {eight.ber:.2e}; {elapsed:.0f} s")


def test_c7_reproducible_csv(verdict, tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("m=4\nm0=1\np=2\ngamma=2\nlt=2\nebno=4,8,12\nbursts=100\nseed=5\n")
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}.csv"
        assert main(["ber", str(path), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    rows = list(csv.reader(outs[0].decode().splitlines()))
    ok = outs[0] == outs[1] and len(rows) == 4
    verdict(7, "reproducible CSV", ok, f"{len(outs[0])} bytes, identical: {outs[0] == outs[1]}")
