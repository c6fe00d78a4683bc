"""Shared exception types.

Size guards are hard errors by design: every search in this package is an
exhaustive ground-truth instrument, so exceeding a guard must abort loudly
rather than silently subsample.
"""


class UsageError(ValueError):
    """Malformed input: bad flavor, bad JSON shape, out-of-range argument."""


class SizeGuardError(ValueError):
    """A brute-force cost guard was exceeded."""
