"""Exception hierarchy shared by all modules."""


class FenchelError(Exception):
    """Base class for every error raised by this package."""


class InvalidParam(FenchelError, ValueError):
    """A parameter or specification is outside its admissible range."""


class NeverFinite(InvalidParam):
    """A rate function takes the value +inf at every probed point."""


class IndeterminateSum(FenchelError, ArithmeticError):
    """An extended-real operation has no defined value, e.g. inf + (-inf)."""


class NonConvergence(FenchelError, RuntimeError):
    """A one-dimensional search exhausted its budget without a verdict."""


class InconsistentLimit(NonConvergence):
    """A left-limit sequence failed to stabilize."""
