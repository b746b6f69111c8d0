"""Exception hierarchy shared by all lesionaudit modules."""


class AuditError(Exception):
    """Base class for all errors raised by this package."""


class ManifestError(AuditError):
    """Manifest file is malformed: bad schema, duplicate ids, missing fields."""


class DataError(AuditError):
    """A record's files cannot be used: missing, undecodable, or misaligned."""


class EmptySampleError(AuditError):
    """An operation that needs at least one pixel value received none."""


class InsufficientDataError(AuditError):
    """Too few paired observations for a statistic (n < 3)."""


class ConstantSeriesError(AuditError):
    """Rank correlation is undefined because one series is constant."""
