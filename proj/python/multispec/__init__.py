"""Pressure, Gibbs measures and entropy spectra on topological Markov shifts."""

from ._core import (
    ConvergenceError,
    Error,
    ParseError,
    Potential,
    ResourceError,
    TransitionMatrix,
    ValidationError,
    admissible_words,
    alpha,
    alpha_range,
    beta,
    classify,
    empirical_local_entropy,
    entropy_rate,
    entropy_spectrum,
    g2_member,
    gibbs_constant_audit,
    gibbs_markov,
    load_model,
    model_json,
    normalize_potential,
    pressure,
    pressure_by_preimages,
    run_cli,
    sample_spectrum,
    spectra_equal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
