"""Exception hierarchy shared by every module."""


class KappaSolenoidError(Exception):
    pass


class InvalidParameter(KappaSolenoidError, ValueError):
    """Bad deformation parameter, polynomial or numeric argument."""


class ReducibleError(InvalidParameter):
    """Raised when a polynomial has a nontrivial factorisation.

    ``witness`` holds the two factors as ascending coefficient tuples.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class ContextMismatch(KappaSolenoidError, ValueError):
    """Elements built over different parameters were combined."""


class GuardExceeded(KappaSolenoidError, RuntimeError):
    """A tractability guard refused an exponentially large computation."""


class ConvergenceError(KappaSolenoidError, RuntimeError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
