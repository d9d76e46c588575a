"""Exception types raised across the package.

Every error derives from :class:`ComplexClipError`, itself a ``ValueError``,
so callers can catch the whole family or a single failure mode.
"""


class ComplexClipError(ValueError):
    """Base class for all data and argument errors in this package."""


# audio ingestion
class MalformedWav(ComplexClipError):
    pass


class UnsupportedEncoding(ComplexClipError):
    pass


class SilentSignal(ComplexClipError):
    pass


class TooShort(ComplexClipError):
    pass


# transform
class InvalidLength(ComplexClipError):
    pass


class SignalTooShort(ComplexClipError):
    pass


# detectors
class NonFiniteAngle(ComplexClipError):
    pass


class InvalidFloor(ComplexClipError):
    pass


class EmptyMatrix(ComplexClipError):
    pass


# analysis
class NonFiniteEntry(ComplexClipError):
    pass


class ShapeMismatch(ComplexClipError):
    pass


# harness
class InvalidConfig(ComplexClipError):
    pass


class InconsistentSignals(ComplexClipError):
    pass


class DegenerateInput(ComplexClipError):
    pass


class SingleClass(ComplexClipError):
    pass


class TooFewSamples(ComplexClipError):
    pass
