"""Shared exception types."""


class ScaleGuardError(ValueError):
    """A computation was requested beyond its hard size guard."""


class HypothesisError(ValueError):
    """Inputs violate the hypotheses a closed form or construction needs."""


class CoreMismatchError(ValueError):
    """A target partition is not the d-core of the source."""


class InfeasibleError(ValueError):
    """No object with the requested combinatorial constraints exists."""


class ConventionMismatchError(ValueError):
    """Two abacus states built under different origin conventions were compared."""


class TieError(ValueError):
    """Constituents could not be labeled because two candidates tie."""
