"""PAC bounds on the mean of a distribution over a known finite set of values."""

from ._validation import InfeasibleError
from .binom import InversionQuery, binom_cdf, binom_sf, invert_lower, invert_upper
from .bounds import (
    BoundInterval,
    CategorizedSample,
    NestState,
    box_bounds,
    box_intervals,
    box_maximize,
    hoeffding_bounds,
    maurer_pontil_bounds,
    nest_bounds,
    nest_eval,
    nest_thresholds,
    normalize_sample,
    sample_stats,
)
from .estimator import DiscreteMeanBound
from .methods import METHOD_NAMES, MethodConfig, compute_bound
from .refine import (
    Clustering,
    NuCorrection,
    apply_merge,
    merge_plan,
    merged_nest_bounds,
    nearly_uniform_nest_bounds,
    nu_correction,
    nu_delta,
)

__version__ = "0.1.0"
