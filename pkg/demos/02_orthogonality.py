"""
Correction functions and their Gram matrix
==========================================

Each antenna multiplies the common CPM signal by a unit-modulus
correction with a linear phase. With an integer slope the corrections
complete whole cycles per block, so their inner products over a block
vanish, whatever the phase offsets.
"""
# %%
import numpy as np

from stcpm import CorrectionBank, gram_matrix
from stcpm.analysis import orthogonality_defect

rng = np.random.default_rng(0)
bank = CorrectionBank(Lt=3, alpha=1, betas=tuple(rng.uniform(0, 1, 3)))
with np.printoptions(precision=4, suppress=True):
    print(gram_matrix(bank, Ns=16))

# %%
# Each antenna sits on its own frequency offset of (m-1)/(Lt T).
t = np.arange(48) / 16
c = bank.values(t)
freqs = np.diff(np.unwrap(np.angle(c)), axis=1).mean(axis=1) * 16 / (2 * np.pi)
print("frequency offsets:", np.round(freqs, 6))

# %%
# A half-integer slope breaks the block orthogonality.
for alpha in (0.5, 1, 1.5, 2):
    print(f"alpha={alpha}: max |off-diagonal| / (Lt T) =",
          f"{orthogonality_defect(CorrectionBank(3, alpha), Ns=16):.2e}")
