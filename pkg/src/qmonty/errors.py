"""Exception hierarchy shared across the engine, strategies and lab."""


class QmontyError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(QmontyError):
    """Host, rules or experiment configuration is inconsistent."""


class DegenerateInput(QmontyError):
    """Two directions coincide up to phase, so no unique complement exists."""


class InvalidProjector(QmontyError):
    """Submitted operator is not a rank-one orthogonal projector."""


class IncompleteTriple(QmontyError):
    """Triple of projectors does not resolve the identity."""


class RuleViolation(QmontyError):
    """A move breaks the orthogonality rules of the current variant."""


class HostViolation(RuleViolation):
    """The host's opened door hit the prize under rules that forbid it."""


class WrongStage(QmontyError):
    """Operation called outside its game stage."""


class RestartLimitExceeded(QmontyError):
    """Session restarted more often than the configured cap."""


class CheatSetupFailed(QmontyError):
    """Rejection sampling could not find a first choice clearing the catalog."""


class CheatAmbiguous(QmontyError):
    """Prize reconstruction found zero or several candidates."""


class CheatDegenerate(QmontyError):
    """Announced door carries no usable phase information."""


class EffectRankTooHigh(QmontyError):
    """A measurement effect has rank above one and cannot guarantee a safe door."""
