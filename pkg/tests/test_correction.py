import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rect_integral
from stcpm.correction import CorrectionBank, apply_corrections, correction_phase, gram_matrix
from stcpm.cpm import IqBlock, modulate_burst


def test_correction_phase_examples():
    assert correction_phase(CorrectionBank(2), 1, 0.37) == 0
    assert correction_phase(CorrectionBank(2, 1, (0, 0)), 2, 2.0) == pytest.approx(1.0)
    assert correction_phase(CorrectionBank(3, 1, (0, 0, 0.25)), 3, 3.0) == pytest.approx(2.25)


@pytest.mark.parametrize("m", [0, 3])
def test_correction_phase_rejects_bad_antenna(m):
    with pytest.raises(ValueError):
        correction_phase(CorrectionBank(2), m, 0.0)


def test_bank_validation():
    with pytest.raises(ValueError):
        CorrectionBank(2, 1, (0.0,))
    with pytest.raises(ValueError):
        CorrectionBank(0)
    assert CorrectionBank(3).betas == (0.0, 0.0, 0.0)


def test_bank_values_agree_with_scalar_phase():
    bank = CorrectionBank(3, 2, (0.1, -0.4, 0.7))
    t = np.linspace(0, 50, 37)
    c = bank.values(t)
    for m in range(1, 4):
        ref = [cmath.exp(2j * math.pi * correction_phase(bank, m, x)) for x in t]
        np.testing.assert_allclose(c[m - 1], ref, atol=1e-11)


def test_identity_for_single_antenna(cfg):
    s = modulate_burst([1, 3, -1, -3], cfg, 1)
    out = apply_corrections(s, CorrectionBank(1))
    assert len(out) == 1
    np.testing.assert_array_equal(out[0].samples, s.samples)


def test_corrections_keep_envelope(cfg, rng):
    bank = CorrectionBank(3, 1, tuple(rng.uniform(0, 1, 3)))
    s = modulate_burst(rng.choice(cfg.alphabet, 12), cfg, 3)
    for sm in apply_corrections(s, bank):
        np.testing.assert_allclose(np.abs(sm.samples), np.abs(s.samples), rtol=1e-14)
        assert sm.t0 == s.t0 and sm.dt == s.dt


@pytest.mark.parametrize("Lt", [1, 2, 3, 4])
def test_integer_drift_per_block(Lt):
    bank = CorrectionBank(Lt, 1, tuple(np.linspace(0, 0.9, Lt)))
    for m in range(1, Lt + 1):
        drift = correction_phase(bank, m, Lt) - correction_phase(bank, m, 0)
        assert drift == pytest.approx(m - 1)
        c = bank.values([0.0, float(Lt), 7.0 * Lt])[m - 1]
        np.testing.assert_allclose(c, c[0], atol=1e-12)


def test_linpc_frequency_offsets():
    # alpha=1: antenna m is shifted by (m-1)/(Lt T) in frequency
    Lt = 4
    bank = CorrectionBank(Lt)
    t = np.arange(512) / 16
    c = bank.values(t)
    for m in range(Lt):
        freq = np.diff(np.unwrap(np.angle(c[m]))) / (2 * np.pi * (t[1] - t[0]))
        np.testing.assert_allclose(freq, m / Lt, atol=1e-9)


@pytest.mark.parametrize("Lt", [1, 2, 3, 4])
def test_gram_diagonal_and_orthogonality(Lt):
    betas = tuple(np.random.default_rng(Lt).uniform(0, 1, Lt))
    G = gram_matrix(CorrectionBank(Lt, 1, betas), Ns=16)
    np.testing.assert_allclose(np.diag(G).real, Lt, rtol=1e-12)
    off = G - np.diag(np.diag(G))
    assert np.abs(off).max() <= 1e-9 * Lt


def test_gram_matches_direct_quadrature():
    bank = CorrectionBank(3, 1.5, (0.0, 0.2, 0.6))
    G = gram_matrix(bank, Ns=16)

    def c(m, t):
        return cmath.exp(2j * math.pi * correction_phase(bank, m, t))

    for m in range(1, 4):
        for k in range(1, 4):
            ref = rect_integral(lambda t: c(m, t) * c(k, t).conjugate(), 0.0, 3.0, 48)
            assert G[m - 1, k - 1] == pytest.approx(ref, abs=1e-12)


def test_half_integer_slope_is_not_orthogonal():
    G = gram_matrix(CorrectionBank(2, 0.5), Ns=16)
    # continuous value |int_0^{2T} exp(j pi t / 2T) dt| = 4T/pi; rectangle rule is O(dt) off
    assert abs(G[0, 1]) == pytest.approx(4 / math.pi, rel=0.05)
    assert abs(G[0, 1]) > 0.1 * 2


@pytest.mark.parametrize("alpha, orthogonal", [(0.5, False), (1, True), (1.5, False), (2, True)])
@pytest.mark.parametrize("Lt", [2, 3, 4])
def test_orthogonal_iff_integer_alpha(alpha, orthogonal, Lt):
    bank = CorrectionBank(Lt, alpha)
    G = gram_matrix(bank, Ns=16)
    off = np.abs(G - np.diag(np.diag(G))).max()
    assert bool(off <= 1e-9 * Lt) is orthogonal
    assert bank.is_orthogonal is orthogonal


@given(st.integers(2, 4), st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_gram_hermitian_any_beta(Lt, betas):
    G = gram_matrix(CorrectionBank(Lt, 1, tuple(betas[:Lt])), Ns=8)
    np.testing.assert_allclose(G, G.conj().T, atol=1e-12)
    assert np.abs(G - Lt * np.eye(Lt)).max() <= 1e-9 * Lt


def test_unit_modulus_everywhere():
    bank = CorrectionBank(4, 3, (0.3, 0.1, 0.7, 0.9))
    c = bank.values(np.linspace(-10, 300, 1001))
    np.testing.assert_allclose(np.abs(c), 1.0, rtol=1e-14)


def test_apply_uses_absolute_time():
    bank = CorrectionBank(2, 0.5)
    s = IqBlock(np.ones(4), t0=3.0, dt=0.25)
    out = apply_corrections(s, bank)[1].samples
    np.testing.assert_allclose(out, np.exp(2j * np.pi * 0.25 * (3.0 + 0.25 * np.arange(4))))
