"""Membership-mapping deep models, fuzzy-rule classifiers and encrypted inference."""

from .kernel import GramMatrices, KernelParams, build_grams, g_vector, gram, kernel_eval
from .learner import (
    MembershipMappingModel,
    SvdSplit,
    TrainingInfo,
    VarianceFunction,
    compute_alpha,
    compute_tau,
    default_weights,
    fit,
    fixed_point_solve,
    learn,
    predict,
    robustness_bound,
    select_inducing_points,
    variance_function,
)
from .autoencoder import (
    CdmmaModel,
    WideCdmmaModel,
    cdmma_filter,
    learn_cdmma,
    learn_wide_cdmma,
    pca_projection,
    wide_filter,
)
from .classifier import (
    FuzzyAttribute,
    LocalScore,
    attribute_membership,
    global_classify_plain,
    local_classify,
)

__version__ = "0.1.0"

__all__ = [
    "GramMatrices",
    "KernelParams",
    "build_grams",
    "g_vector",
    "gram",
    "kernel_eval",
    "MembershipMappingModel",
    "SvdSplit",
    "TrainingInfo",
    "VarianceFunction",
    "compute_alpha",
    "compute_tau",
    "default_weights",
    "fit",
    "fixed_point_solve",
    "learn",
    "predict",
    "robustness_bound",
    "select_inducing_points",
    "variance_function",
    "CdmmaModel",
    "WideCdmmaModel",
    "cdmma_filter",
    "learn_cdmma",
    "learn_wide_cdmma",
    "pca_projection",
    "wide_filter",
    "FuzzyAttribute",
    "LocalScore",
    "attribute_membership",
    "global_classify_plain",
    "local_classify",
]
