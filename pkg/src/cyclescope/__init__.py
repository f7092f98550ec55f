"""Identification of business-cycle frequencies in monthly series.

The mean of a monthly series is modelled as a trend plus an almost periodic
function; candidate cycle frequencies are tested with a subsampling
procedure and the cycle is extracted with an HP filter.
"""

__version__ = "0.1.0"

from .series import (  # noqa: E402
    InputError,
    LinearFilterSpec,
    MonthlySeries,
    apply_filter,
    compose,
    difference_filter,
    ma_2x12,
    read_csv,
    transfer,
    write_csv,
)
from .spectral import (  # noqa: E402
    CycleEstimate,
    FrequencyGrid,
    backout_coefficient,
    demeaned_coeff,
    fourier_coeff,
    period_of,
    refine_frequency,
    scan_statistic,
)
from .subsampling import (  # noqa: E402
    SignificanceScan,
    SubsampleDistribution,
    confidence_interval,
    critical_value,
    default_block_length,
    scan,
    subsample_distribution,
)
from .hp import HPDecomposition, cutoff_from_lambda, hp_decompose, lambda_from_cutoff  # noqa: E402
from .pipeline import PipelineConfig, PipelineReport, detect_intervals, run, turning_points  # noqa: E402
from .synth import SyntheticSpec, generate, monte_carlo  # noqa: E402
