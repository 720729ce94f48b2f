"""
Bit error rate versus antenna count
===================================

A small Monte Carlo sweep. More transmit antennas steepen the BER
curve in Rayleigh fading. The run is seeded, so repeating it gives the
same counts. Increase ``bursts`` for smoother curves.
"""
# %%
from stcpm import CorrectionBank, CpmConfig, ExperimentConfig, run_ber
from stcpm.harness import records_to_csv

grid = (5.0, 10.0, 15.0)
records = []
for Lt, Lb in ((1, 130), (2, 130), (3, 129)):
    config = ExperimentConfig(CpmConfig(Lb=Lb), CorrectionBank(Lt), grid, bursts=256,
                              master_seed=1, min_bit_errors=200)
    records += run_ber(config)

print(records_to_csv(records))

# %%
for rec in records:
    print(f"Lt={rec.lt} {rec.ebno_db:5.1f} dB  BER {rec.ber:.2e}  ({rec.bit_errors} errors)")
