"""Quantum Monty Hall game engine and strategy laboratory.

The package referees the four-stage quantum protocol on a 3-dimensional
complex game space, ships the catalog of host and player strategies
(including the perfect-cheat reconstructions and the entangled quantum
notepad), and evaluates them by seeded Monte Carlo against analytic
oracles.
"""

from __future__ import annotations

from .errors import (
    CheatAmbiguous,
    CheatDegenerate,
    CheatSetupFailed,
    ConfigError,
    DegenerateInput,
    EffectRankTooHigh,
    HostViolation,
    IncompleteTriple,
    InvalidProjector,
    QmontyError,
    RestartLimitExceeded,
    RuleViolation,
    WrongStage,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "QmontyError",
    "ConfigError",
    "DegenerateInput",
    "InvalidProjector",
    "IncompleteTriple",
    "RuleViolation",
    "HostViolation",
    "WrongStage",
    "RestartLimitExceeded",
    "CheatSetupFailed",
    "CheatAmbiguous",
    "CheatDegenerate",
    "EffectRankTooHigh",
    "__version__",
]
