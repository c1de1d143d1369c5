"""Finite-model semantics: posets, Heyting algebras, soundness fuzzing."""
from .poset import (
    FinitePoset, MonotoneMap, NoAdjoint, compute_adjoint, diagonal_map,
    identity_map, random_monotone_map, random_poset,
)
from .heyting import (
    Counterexample, HeytingModel, catalogue, check_soundness, eval_statement,
    evaluate, load_model, parse_model,
)
from .fuzz import FuzzReport, fuzz

__all__ = [
    "FinitePoset",
    "MonotoneMap",
    "NoAdjoint",
    "compute_adjoint",
    "diagonal_map",
    "identity_map",
    "random_monotone_map",
    "random_poset",
    "Counterexample",
    "HeytingModel",
    "catalogue",
    "check_soundness",
    "eval_statement",
    "evaluate",
    "load_model",
    "parse_model",
    "FuzzReport",
    "fuzz",
]
