"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A model document or run parameter violates an invariant."""


class TruncationError(RuntimeError):
    """The Fock-space cutoff is too small for the requested computation.

    Carries the smallest cutoff the caller should retry with, when one
    can be suggested.
    """

    def __init__(self, message, suggested_n_max=None):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max
