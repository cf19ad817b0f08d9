"""k-peaks and longest k-alternating subsequences of random permutations.

Values are 1-based throughout: a permutation of size ``n`` is a rearrangement
of ``1..n`` in one-line notation.
"""

from .errors import (
    DegenerateDenominator,
    DegenerateScale,
    DomainError,
    EmptyInput,
    EmptySequence,
    InvalidSelector,
    KPeaksError,
    NotABijection,
    Overflow,
    TooFewSamples,
    TooLarge,
    ValueOutOfRange,
)
from .exact import (
    ExactMoments,
    as_moment_formulas,
    e_peaks_formula,
    enumerate_moments,
    joint_peak_prob_formula,
    joint_peak_prob_oracle,
    var_peaks_formula,
)
from .kstats import (
    AltLengths,
    PeakProfile,
    alt_lengths,
    is_k_peak_ref,
    las_dp,
    las_fast,
    peak_count_fast,
    peak_profile_ref,
    valley_count,
    zigzag_length,
)
from .localstats import (
    LocalPeakProfile,
    choose_window,
    is_local_k_peak,
    local_profile,
    mismatch_indicator,
    tv_bound,
)
from .montecarlo import CltReport, MomentEstimate, empirical_kolmogorov, estimate
from ._rng import stream_seed
from .permutation import Permutation, SeedSpec, flip, inverse, parse, sample_uniform
from .xalt import UnitVector, coupling_check, las_x, sample_unit_vector

__version__ = "0.1.0"
