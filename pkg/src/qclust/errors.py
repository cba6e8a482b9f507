"""Exception types shared across the package."""


class GuardError(ValueError):
    """Requested problem size exceeds a configured safety guard."""


class NumericError(RuntimeError):
    """A numerical routine failed to reach its accuracy target."""


class StructureError(RuntimeError):
    """An input violates a symmetry or multiplicity structure the
    calculation relies on (e.g. a non-covariant cost function)."""
