"""Legendre-Fenchel transforms of rate functions, their generalized
inverses, Hölder convolutions, and Cramér-Chernoff quantile bounds."""

from .errors import (
    FenchelError,
    InconsistentLimit,
    IndeterminateSum,
    InvalidParam,
    NeverFinite,
    NonConvergence,
)
from .extreal import INF, NINF, ext_add, ext_exp, ext_inf, ext_sum, ext_sup, format_ext
from .ratefn import (
    Bernoulli,
    Discrete,
    DistributionSpec,
    Exponential,
    Gaussian,
    PointMass,
    Poisson,
    RateFn,
    cgf,
    eval_cgf,
    make_ratefn,
    parse_spec,
    power,
    support_summary,
    tabulated,
)
from .transform import (
    ConjugateProfile,
    SolverConfig,
    conjugate,
    inverse_oracle,
    lower_inverse,
    profile,
    upper_inverse,
)
from .convolve import as_ratefn, holder_convolve, sum_ratefn
from .bounds import BoundReport, Strictness, chernoff_tail, strictness_check, sum_quantile_bound
from .verify import VerifyReport, sample, sample_sums, verify_bound

__version__ = "0.1.0"
