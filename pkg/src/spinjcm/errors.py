"""Exception types raised by spinjcm."""


class InvalidParameterError(ValueError):
    """A parameter lies outside its allowed range."""


class DomainError(ValueError):
    """A formula was evaluated outside its mathematical domain."""


class TruncationError(ValueError):
    """A truncated sum would drop more probability mass than allowed."""


class UnsupportedSectorError(ValueError):
    """The state populates |0>|-> which lies outside the (a_n, b_n) ladder."""


class UndefinedObservableError(ValueError):
    """The observable has no value for this state (e.g. Mandel Q at <n> = 0)."""


class IntegratorError(RuntimeError):
    """The adaptive ODE integrator failed."""
