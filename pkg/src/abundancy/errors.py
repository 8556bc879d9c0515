"""Exception types shared across modules."""


class BudgetError(Exception):
    """Raised when a request exceeds a configured work or memory budget."""


class VerificationFailure(Exception):
    """Raised when an identity or tolerance check does not hold."""


class TableLoadError(Exception):
    """Base class for failures while loading a stored value table."""


class ChecksumMismatch(TableLoadError):
    pass


class VersionMismatch(TableLoadError):
    pass


class MetadataMismatch(TableLoadError):
    pass


class MalformedTable(TableLoadError):
    pass
