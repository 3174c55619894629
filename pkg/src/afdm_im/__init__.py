"""Affine frequency division multiplexing with index modulation (AFDM-IM).

Bit-to-block encoding, the discrete affine Fourier transform, doubly
dispersive channels, ML and MMSE detection, power strategies, union-bound
error analysis and a seeded Monte Carlo link simulator.
"""

from .analysis import PairwiseSpectrum, abep_union, diversity_slope, spectral_efficiency
from .baselines import build_system, run_classic_afdm, run_ofdm_im
from .channel import ChannelProfile, effective_channel, get_profile, path_matrices, standard_profiles
from .codec import ConfigError, ImBlock, ModemConfig, PowerStrategy, encode_block, select_indices
from .daft import DaftOperator, build_daft, choose_c1, daft, idaft
from .detection import Codebook, ml_detect, mmse_detect
from .estimators import AfdmImModem, MLDetector, MMSEDetector
from .power import PowerPlan, allocate_power, snr_to_noise
from .records import BerRecord, emit_csv, read_csv
from .simulation import LinkSimulator

__version__ = "0.1.0"

__all__ = [
    "PairwiseSpectrum",
    "abep_union",
    "diversity_slope",
    "spectral_efficiency",
    "build_system",
    "run_classic_afdm",
    "run_ofdm_im",
    "ChannelProfile",
    "effective_channel",
    "get_profile",
    "path_matrices",
    "standard_profiles",
    "ConfigError",
    "ImBlock",
    "ModemConfig",
    "PowerStrategy",
    "encode_block",
    "select_indices",
    "DaftOperator",
    "build_daft",
    "choose_c1",
    "daft",
    "idaft",
    "Codebook",
    "ml_detect",
    "mmse_detect",
    "AfdmImModem",
    "MLDetector",
    "MMSEDetector",
    "PowerPlan",
    "allocate_power",
    "snr_to_noise",
    "BerRecord",
    "emit_csv",
    "read_csv",
    "LinkSimulator",
]
