"""Link-level simulator and analysis toolkit for RS-coded optical OFDM with
puncturing-based subcarrier index modulation, plus coded DCO-OFDM and
classical coded OFDM-IM baselines."""

__version__ = "0.1.0"

from .analysis import (BoundInputs, decoder_error_rates, feasible_params,
                       p_bsim, p_correct_detection, p_correct_pair,
                       p_ser_qam, se_dco, se_rso, throughput, total_ber_bound)
from .channel import (NoiseSpec, dc_attenuation, equalize_zf, noise_variance,
                      sndr, transmit)
from .detector import (ReceiverChain, SubBlockDecision, estimate_puncture,
                       llr, receive_frame, receive_subblock)
from .galois import FieldTables, build_field
from .harness import (ConfigError, Engine, SimConfig, SweepRecord,
                      analyze_sweep, emit_bounds_table, load_config,
                      parse_config, records_to_csv, run_dimming_sweep,
                      run_sweep)
from .ofdm_phy import (FramePlan, assemble_frame, extract_subblocks,
                       ofdm_demodulate, ofdm_modulate, signal_std)
from .optical_frontend import (ClippingStats, LinkBudget, average_intensity,
                               budget_from_lambdas, clip_and_bias,
                               clipping_stats, dimming_to_bias)
from .qam_modem import Constellation, make_constellation, qam_demap_hard, qam_map
from .rs_code import (CodeParams, DecodeFailure, puncture, rs_decode,
                      rs_encode, rs_encode_batch, syndromes_batch)
from .sim_map import (PuncturingVector, bits_to_puncture, index_bits_capacity,
                      puncture_to_bits)
