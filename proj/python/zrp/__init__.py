"""Zero-range process with size-dependent rates."""

from ._zrp import (
    BadInitial,
    DomainError,
    EmptyPhase,
    InsufficientData,
    RateModel,
    ResourceError,
    check_stationarity,
    critical_density,
    invert_phi,
    ks_exponential,
    lifetime_exponents,
    lifetime_sweep,
    lln_batches,
    log_partition,
    log_weight,
    log_z_R,
    p_fluid,
    phase_decomposition,
    phase_label,
    phi_inf,
    rate_function,
    rate_function_curve,
    relative_entropy,
    rho_inf,
    rho_meta,
    rho_R,
    rho_trans,
    s_can,
    s_fluid,
    s_gcan,
    sample_canonical,
    simulate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
