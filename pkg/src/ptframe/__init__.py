"""ptframe: statistical and logical probability, semantic information, and reasoning.

Statistical probabilities P (normalized over labels) and logical
probabilities T (prior-weighted averages of truth functions) are linked by
the semantic Bayes formula P(x|theta) = P(x) T(theta|x) / T(theta).
"""

__version__ = "0.1.0"

from .confirmation import (
    ConfusionCounts,
    b_star,
    c_star,
    channel_table,
    confirmation_report,
    correct_rate,
    f_measure,
    raven_sensitivity,
    symmetry_check,
)
from .errors import *
from .fuzzy import (
    CorrelationMode,
    compound_label_truth,
    compound_logical_probability,
    fuzzy_and,
    fuzzy_not,
    fuzzy_or,
)
from .learning import (
    FitResult,
    LabeledSample,
    ParametricFamily,
    classify,
    empirical_distributions,
    fit_parametric_truth,
    match_truth_functions,
    random_set_membership,
    truth_from_sampling,
)
from .prob import (
    Distribution,
    ShannonChannel,
    Universe,
    bayes_inverse,
    bayes_posterior,
    entropy,
    kl_divergence,
    shannon_mutual_info,
)
from .ratedist import (
    DistortionMatrix,
    RdPoint,
    dcf_minimum_info,
    r_theta_from_rd,
    rd_curve,
    rd_point,
)
from .reasoning import (
    implication_bound,
    reason,
    syllogism_channel,
    syllogism_prediction,
)
from .semantic import (
    BelievablePart,
    Crisp,
    Gaussian,
    Logistic,
    MVGaussian,
    SemanticChannel,
    Tabulated,
    TruthFunction,
    bayes_theorem_I,
    eval_truth,
    logical_probability,
    plausibility,
    semantic_bayes_predict,
    tautology,
    truth_from_json,
    truth_from_likelihood,
)
from .seminfo import (
    avg_semantic_info,
    effective_control_amount,
    gaussian_decomposition,
    semantic_info_point,
    semantic_mutual_info,
)
from .thermo import ThermoSystem, boltzmann, entropy_info_relation
