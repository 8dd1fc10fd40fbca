"""Exception types shared across fsoplan."""


class FsoPlanError(Exception):
    """Base class for every error raised by fsoplan."""


class DomainError(FsoPlanError, ValueError):
    """An input lies outside the domain of a model operation."""


class StatisticalFloorError(DomainError):
    """A Monte Carlo target is too deep in the tail for the sample budget."""


class ScenarioFileError(FsoPlanError, ValueError):
    """A scenario file is malformed or carries an unknown key."""


class UsageError(FsoPlanError):
    """A command-line argument combination is invalid."""
