"""Exception types shared across the package."""


class MailclassError(Exception):
    """Base class for package errors."""


class ConfigError(MailclassError):
    """Bad usage or configuration (CLI exit code 1)."""


class DataError(MailclassError):
    """Invalid or inconsistent input data (CLI exit code 2)."""
