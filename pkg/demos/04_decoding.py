"""
Separable decoding
==================

The receiver removes the corrections and channel gains in one step,
producing a single pseudo received signal. A Viterbi decoder for the
plain CPM trellis then recovers the symbols, with the same number of
branch metrics per symbol for any antenna count.
"""
# %%
import numpy as np

from stcpm import (CorrectionBank, CpmConfig, apply_corrections, build_trellis, dephase_combine,
                   draw_channel, modulate_burst, snr_to_noise_var, transmit, viterbi_decode)

cfg = CpmConfig(M=4, m0=1, p=2, gamma=2)
trellis = build_trellis(cfg)
print(trellis.n_states, "states,", trellis.branches_per_symbol, "branch metrics per symbol")

# %%
# One burst over three fading antennas at 12 dB.
rng = np.random.default_rng(3)
Lt = 3
bank = CorrectionBank(Lt)
symbols = np.concatenate([[1], rng.choice(cfg.alphabet, 62)])  # known first symbol
chan = draw_channel(Lt, rng).with_noise(snr_to_noise_var(12.0, cfg, Lt))
print("channel gains |h|:", np.round(np.abs(chan.h), 3))

r = transmit(apply_corrections(modulate_burst(symbols, cfg, Lt), bank), chan, rng)
x = dephase_combine(r, bank, chan)
res = viterbi_decode(x, trellis, known_prefix=[1], Lt=Lt)
print("symbol errors:", int(np.sum(res.symbols != symbols)), "of", symbols.size)
print("branch evaluations per symbol:", res.branch_evals // symbols.size)
