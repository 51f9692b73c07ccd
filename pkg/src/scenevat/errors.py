"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid user-supplied data: malformed files, bad labels, shape mismatches."""


class NumericError(RuntimeError):
    """A numeric computation could not be completed."""


class DegenerateImageError(NumericError):
    """Image whose intensity histogram admits no threshold (single level)."""
