"""Numerical laboratory for multilinear weighted ergodic averages,
cube norms, and self-joining correlations on concrete systems."""

from .averaging import (
    SupBound,
    VdcReport,
    multilinear_average,
    sup_trig,
    van_der_corput_check,
    weighted_average_of_window,
)
from .dynsys import (
    Character,
    FinitePermutation,
    HeisenbergTranslation,
    HeisenbergVertical,
    Indicator,
    PolynomialIterate,
    SkewProduct,
    Table,
    TorusRotation,
    iterate,
    orbit_samples,
    polynomial_orbit_samples,
)
from .errors import BudgetError, ConfigError, ErgolabError, ExactRangeError, WindowError
from .joinings import (
    JoiningQuery,
    empirical_selfjoining,
    multivariable_estimate_report,
    selfjoining_correlation,
    sequence_correlation,
)
from .nilseq import (
    Conjugate,
    Constant,
    HeisenbergBasic,
    PolyPhase,
    Product,
    Shift,
    TrigPhase,
    weight_at,
    weight_window,
)
from .uniformity import (
    CorrelationTable,
    CubeSpec,
    assani_check,
    correlation_table,
    cubic_average,
    cubic_estimate_check,
    fourier_u2_power,
    gowers_norm_cyclic,
    hk_seminorm_estimate,
    hk_vdc_bound_report,
    local_correlation,
    local_seminorm,
)
from .windows import AverageSeries, SequenceWindow, dyadic_schedule, period_schedule

__version__ = "0.1.0"
