"""Distance-spectrum error bounds for lattices over the AWGN channel.

The package computes upper bounds on the maximum-likelihood decoding error
probability of specific lattices from their distance spectra (plus reference
curves and a random-coding exponent with a per-lattice rate correction), and
validates them against exact-decoder Monte Carlo for small lattices.
"""

from .alpha import (
    AlphaProfile,
    WaterFillAllocation,
    alpha_opt,
    alpha_rng,
    cumulative_check,
    lp_oracle,
    profile_max,
    waterfill_allocation,
    waterfill_levels,
    write_profile_csv,
)
from .bounds import (
    METHODS,
    BoundResult,
    IterationError,
    SpectrumHorizonError,
    dmhs_alpha,
    dmhs_bound,
    edmhs_bound,
    mhs_bound,
    pairwise_bound,
    sphere_lower_bound,
    sub_bound,
    sweep,
    union_bound,
    write_sweep_csv,
)
from .channel import (
    NoiseModel,
    gammainc_upper,
    log_gammainc_upper,
    norm_pdf,
    norm_pdf_log,
    norm_tail,
    norm_tail_log,
    unit_ball_volume,
    unit_ball_volume_log,
)
from .exponent import (
    ExponentPoint,
    FirstShellGap,
    critical_rates,
    gap_to_capacity_firstshell,
    nu_series,
    poltyrev_exponent,
    vnr,
    vnr_db,
    vnr_to_sigma,
    write_nu_csv,
)
from .geometry import lens_volume, shell_ball_volume
from .mcsim import SimResult, simulate, write_sim_csv
from .spectrum import (
    DistanceSpectrum,
    EnumerationOverflowError,
    LatticeBasis,
    NormalizedSpectrum,
    SpectrumFormatError,
    builtin_lattice,
    catalog_spectrum,
    enumerate_spectrum,
    load_spectrum,
    normalize,
    save_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaProfile",
    "BoundResult",
    "DistanceSpectrum",
    "EnumerationOverflowError",
    "ExponentPoint",
    "FirstShellGap",
    "IterationError",
    "LatticeBasis",
    "METHODS",
    "NoiseModel",
    "NormalizedSpectrum",
    "SimResult",
    "SpectrumFormatError",
    "SpectrumHorizonError",
    "WaterFillAllocation",
    "alpha_opt",
    "alpha_rng",
    "builtin_lattice",
    "catalog_spectrum",
    "critical_rates",
    "cumulative_check",
    "dmhs_alpha",
    "dmhs_bound",
    "edmhs_bound",
    "enumerate_spectrum",
    "gammainc_upper",
    "gap_to_capacity_firstshell",
    "lens_volume",
    "load_spectrum",
    "log_gammainc_upper",
    "lp_oracle",
    "mhs_bound",
    "norm_pdf",
    "norm_pdf_log",
    "norm_tail",
    "norm_tail_log",
    "normalize",
    "nu_series",
    "pairwise_bound",
    "poltyrev_exponent",
    "profile_max",
    "save_spectrum",
    "shell_ball_volume",
    "simulate",
    "sphere_lower_bound",
    "sub_bound",
    "sweep",
    "union_bound",
    "unit_ball_volume",
    "unit_ball_volume_log",
    "vnr",
    "vnr_db",
    "vnr_to_sigma",
    "waterfill_allocation",
    "waterfill_levels",
    "write_nu_csv",
    "write_profile_csv",
    "write_sim_csv",
    "write_sweep_csv",
]
