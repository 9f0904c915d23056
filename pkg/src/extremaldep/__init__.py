"""Bootstrap classification of extremal dependence between heavy-tailed series.

Each pair is placed in one of four classes (asymptotic independence, weak,
strong or full dependence) by a cascade of bootstrap tests on the angles
of its largest observations.
"""
from ._backend import BACKEND
from .bootstrap import (
    BootstrapConfig,
    InvalidRunError,
    bootstrap_draws,
    decide_strong,
    decide_variance,
    make_stream,
)
from .classifier import (
    ClassifierSettings,
    DependenceClass,
    DependenceVector,
    classify_once,
    classify_repeated,
)
from .core import (
    Cone,
    DegenerateTailError,
    OrderedTail,
    ParameterError,
    PolarSample,
    cone_distance,
    g_transform,
    hill_alpha,
    hill_estimate,
    hill_log_mean,
    order_tail,
    polar_transform,
    power_transform,
    to_polar,
)
from .special import chi2_quantile
from .statistics import ConeFit, d_stat, fit_cone, t_stat
from .synth import ClassSpec, gen_class_sample, gen_pareto
from .threshold import capped_k, ks_distance, min_distance_k, select_threshold

__version__ = "0.1.0"
