"""Average secrecy-rate analysis for short-packet satellite links."""

__version__ = "0.1.0"

from .specfun import (
    SeriesControl,
    SeriesConvergenceError,
    digamma,
    gamma_fn,
    hyp1f1,
    hyp2f1,
    hyp2f1_da,
    q_fn,
    q_inv,
)
from .srf_channel import (
    AVERAGE_SHADOWING,
    FREQUENT_HEAVY_SHADOWING,
    LIGHT_SHADOWING,
    ChannelSample,
    SrfParams,
    fourth_moment,
    log_moment_derivative,
    mgf_envelope_sq,
    moment,
    pdf_envelope,
    sample,
)
from .link_geometry import (
    AntennaPattern,
    Geometry,
    LinkBudget,
    arc_offset_angle,
    calibrate_to_mean_snr,
    free_space_loss,
    itu_pattern_gain_dbi,
    mean_snr,
)
from .secrecy_fbl import (
    FblConfig,
    LeakageResult,
    SnrPair,
    avg_secrecy_lower_bound,
    avg_secrecy_taylor_approx,
    capacity,
    dispersion,
    fbl_secrecy_rate,
    leakage_for_rate,
    secrecy_capacity,
    total_dispersion,
)
from .montecarlo import (
    CapacityGapEstimate,
    LeakageEstimate,
    McConfig,
    SecrecyEstimate,
    estimate_avg_capacity_gap,
    estimate_avg_secrecy,
    estimate_empirical_leakage,
    estimate_secrecy_and_capacity,
    sweep,
)
from .scenario import (
    ConfigError,
    LinkConfig,
    ScenarioConfig,
    SweepSpec,
    default_config,
    load_config,
    preset_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
