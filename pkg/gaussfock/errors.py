# errors.py - Exception types shared by the gaussfock modules


class DimensionMismatchError(ValueError):
    """Mode counts, FockSpecs or matrix shapes of two arguments do not agree."""


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested vector, operator or state."""


class NonNormalOperatorError(ValueError):
    """An operator required to be normal fails ||AA^dag - A^dag A||_max <= tolerance."""


class NonConvergenceError(RuntimeError):
    """A Yosida schedule or a difference stencil did not reach its tolerance."""


class InvalidParametersError(ValueError):
    """A physical or numerical parameter is out of its admissible range."""
