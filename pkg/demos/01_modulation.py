"""
Modulating a burst
==================

A quaternary CPM signal with a two-symbol rectangular frequency pulse.
We build one short burst, look at its envelope and phase, and check
that the phase state reached at a block boundary is the exact fraction
the trellis expects.
"""
# %%
import numpy as np

from stcpm import CpmConfig, PhaseState, accumulated_phase, modulate_burst, startup_tail

cfg = CpmConfig(M=4, m0=1, p=2, gamma=2, Ns=16)
print("h =", cfg.h, " alphabet =", cfg.alphabet.tolist(), " phase states =", cfg.n_phase_states)

# %%
# Eight symbols, grouped into blocks of two. The burst is one contiguous
# IQ array sampled 16 times per symbol.
symbols = np.array([3, -1, 1, 1, -3, 3, -1, -1])
Lt = 2
s = modulate_burst(symbols, cfg, Lt)
print(len(s), "samples, dt =", s.dt)

# %%
# Constant envelope: every sample has amplitude sqrt(E_B / Lt).
print("envelope spread:", np.ptp(np.abs(s.samples)))

# %%
# The unwrapped phase moves at most h*(M-1)/2 cycles per symbol, and
# never jumps between samples.
phase = np.unwrap(np.angle(s.samples)) / (2 * np.pi)
per_symbol = phase[:: cfg.Ns]
print("phase at symbol starts (cycles):", np.round(per_symbol, 3))

# %%
# The accumulated phase at the start of block 3 is an exact fraction.
full = np.concatenate([startup_tail(cfg), symbols])
theta = accumulated_phase(full, 3, cfg, Lt, first_index=0)
print("theta(3) =", theta.as_fraction(), "cycles")
assert isinstance(theta, PhaseState)
