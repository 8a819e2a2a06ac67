"""Exception hierarchy shared by every subpackage.

All errors derive from :class:`AssemblageError`, itself a ``ValueError``, so
callers that only care about bad input can catch ``ValueError``.
"""


class AssemblageError(ValueError):
    """Base class for all library errors."""


# molecule ingestion
class UnparsableSmiles(AssemblageError):
    pass


class UnsupportedFeature(AssemblageError):
    pass


class KekulizationFailure(AssemblageError):
    pass


class UnknownElement(AssemblageError):
    pass


class EmptyGraph(AssemblageError):
    """Raised when a score needs at least one bond."""


class InvalidSubstitution(AssemblageError):
    pass


# spectra
class MalformedRecord(AssemblageError):
    pass


class EmptyPeakList(AssemblageError):
    pass


class AllPeaksOutOfRange(AssemblageError):
    pass


class NonPositiveMass(AssemblageError):
    pass


# learning
class LengthMismatch(AssemblageError):
    pass


class ZeroTarget(AssemblageError):
    pass


class EmptyDataset(AssemblageError):
    pass


class DegenerateDesign(AssemblageError):
    pass


class NonPositiveFeature(AssemblageError):
    pass


class TooFewRows(AssemblageError):
    pass


class InvalidHyperparameter(AssemblageError):
    pass


class DimensionMismatch(AssemblageError):
    pass


class GridEmpty(AssemblageError):
    pass


# analysis
class NonPositiveValue(AssemblageError):
    pass


class TooFewPoints(AssemblageError):
    pass


class DegenerateSplit(AssemblageError):
    pass


class ConfigError(AssemblageError):
    pass
