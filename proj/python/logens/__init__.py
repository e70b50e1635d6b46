"""Logistic-regression ensembles with simplex-constrained weights."""

from ._core import (
    BaseModel,
    ConfigError,
    DataError,
    Dataset,
    Ensemble,
    Error,
    NumericalError,
    concordance,
    evaluate,
    fit_logit,
    generate_synthetic,
    ks_statistic,
    prepare,
    project_to_simplex,
    solve_weights,
    train_baseline,
    train_ensemble,
)

__all__ = [
    "BaseModel",
    "ConfigError",
    "DataError",
    "Dataset",
    "Ensemble",
    "Error",
    "NumericalError",
    "concordance",
    "evaluate",
    "fit_logit",
    "generate_synthetic",
    "ks_statistic",
    "prepare",
    "project_to_simplex",
    "solve_weights",
    "train_baseline",
    "train_ensemble",
]
