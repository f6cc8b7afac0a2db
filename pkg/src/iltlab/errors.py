"""Exception hierarchy shared by all iltlab modules."""

from __future__ import annotations


class IltLabError(Exception):
    """Base class for every error raised by iltlab."""


class InvalidConfiguration(IltLabError, ValueError):
    pass


class InvalidArgument(IltLabError, ValueError):
    pass


class InvalidBandwidth(InvalidArgument):
    pass


class InsufficientData(IltLabError, ValueError):
    pass


class UnsupportedMode(IltLabError):
    pass


class UnsupportedSize(IltLabError, ValueError):
    pass


class FitWindowError(IltLabError, ValueError):
    pass


class DegenerateConfiguration(IltLabError):
    """Every point of a requested curve sits below the estimator floor."""


class CalibrationFailure(IltLabError):
    """No grid threshold satisfies the calibration target.

    The measured curve is attached as ``curve`` (and the zero atom as
    ``atom``) so callers can report what was actually observed.
    """

    def __init__(self, message: str, curve=None, atom: float | None = None):
        super().__init__(message)
        self.curve = curve
        self.atom = atom
