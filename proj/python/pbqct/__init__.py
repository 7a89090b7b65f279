"""Port-based quantum-correction teleportation toolkit."""

from ._core import (
    CapacityError,
    DomainError,
    OutcomeSet,
    UsageError,
    classify,
    closed_form_fidelity,
    ent_fidelity_bruteforce,
    evaluate,
    fit_asymptote,
    gen_pbqct2_fidelity,
    outcome_set,
    pbqct2_fidelity,
    pbqct3_fidelity,
    pbt_fidelity,
    run_cli,
    signal_distance,
    signal_distance_min,
    signal_sum,
    tel_fidelity,
    tel_fidelity_monte_carlo,
    teleport,
)

__all__ = [
    "CapacityError",
    "DomainError",
    "OutcomeSet",
    "UsageError",
    "classify",
    "closed_form_fidelity",
    "ent_fidelity_bruteforce",
    "evaluate",
    "fit_asymptote",
    "gen_pbqct2_fidelity",
    "outcome_set",
    "pbqct2_fidelity",
    "pbqct3_fidelity",
    "pbt_fidelity",
    "run_cli",
    "signal_distance",
    "signal_distance_min",
    "signal_sum",
    "tel_fidelity",
    "tel_fidelity_monte_carlo",
    "teleport",
]
