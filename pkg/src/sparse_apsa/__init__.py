"""Robust sparse adaptive channel estimation under alpha-stable noise.

Sign-error VSS-APSA filters with zero-attracting (ZA), reweighted
zero-attracting (RZA) and reweighted-l1 (RL1) sparsity penalties, an
alpha-stable noise sampler, and a seeded Monte Carlo harness.
"""

__version__ = "0.1.0"

from .adaptive_filters import (
    FilterConfig,
    FilterState,
    NoPenalty,
    ReweightedL1,
    ReweightedZeroAttracting,
    ZeroAttracting,
    init,
    lms_update,
    penalty_curve,
    penalty_term,
    update,
    variable_step,
)
from .channel_model import SparseChannel, generate_channel, generate_input, observe, regressor
from .mc_harness import (
    ExperimentConfig,
    MseCurve,
    run_experiment,
    run_single,
    signal_power_from_snr,
    standard_algorithms,
    steady_state_mse,
)
from .stable_noise import StableParams, characteristic_fn, sample, sample_vector
