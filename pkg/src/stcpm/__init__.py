"""L2-orthogonal space-time coded CPM with parallel codes.

One CPM modulator feeds a bank of linear-phase correction functions, one
per transmit antenna. The receiver undoes the corrections with a
dephaser bank and decodes a single CPM signal with the Viterbi algorithm.
"""
from .analysis import (DiversityReport, SignalMatrix, diversity_certify, orthogonality_defect,
                       signal_difference, signal_matrix, vandermonde_certificate)
from .channel import ChannelRealization, draw_channel, snr_to_noise_var, transmit
from .correction import CorrectionBank, apply_corrections, correction_phase, gram_matrix
from .cpm import (CpmConfig, IqBlock, PhaseState, PulseSpec, accumulated_phase,
                  map_bits_to_symbols, modulate_block, modulate_burst, phase_pulse,
                  startup_tail, symbols_to_bits)
from .harness import BerRecord, ConfigError, ExperimentConfig, load_config, run_ber
from .iqfile import export_iq, import_iq
from .receiver import (DecodeResult, TrellisSpec, block_correlations, branch_metric,
                       build_trellis, dephase_combine, joint_ml_decode, ml_block_distances,
                       separable_block_decode, viterbi_decode)

__version__ = "0.1.0"
