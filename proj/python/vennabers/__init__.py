"""Venn-Abers probability calibration (IVAP/CVAP) with Platt and isotonic baselines."""

from ._vennabers import (
    DataError,
    DegenerateError,
    DirectIsotonicModel,
    Error,
    IvapRule,
    PlattModel,
    UsageError,
    __version__,
    build_ivap,
    compute_f_vectors,
    evaluate,
    fit_direct_isotonic,
    fit_isotonic,
    fit_platt,
    generate_synthetic,
    merge,
    predict_cvap_scores,
    run_cli,
)

__all__ = [
    "DataError",
    "DegenerateError",
    "DirectIsotonicModel",
    "Error",
    "IvapRule",
    "PlattModel",
    "UsageError",
    "__version__",
    "build_ivap",
    "compute_f_vectors",
    "evaluate",
    "fit_direct_isotonic",
    "fit_isotonic",
    "fit_platt",
    "generate_synthetic",
    "merge",
    "predict_cvap_scores",
    "run_cli",
]
