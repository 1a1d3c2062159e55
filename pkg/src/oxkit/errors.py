"""Exception taxonomy shared across the toolkit.

The CLI maps these onto exit codes: config errors -> 2, input errors -> 3,
internal invariant violations -> 4.
"""


class OxkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(OxkitError):
    """Bad configuration: unknown schedule, invalid parameter, missing key."""


class InputError(OxkitError):
    """Bad input data: malformed export, missing file, schema mismatch."""


class InternalError(OxkitError):
    """A state the toolkit promises can never happen."""
