"""Exception hierarchy shared by every chaoscipher module."""

from __future__ import annotations


class ChaosCipherError(Exception):
    """Base class; the CLI reports ``type(err).__name__`` on failure."""


class OrbitDiverged(ChaosCipherError):
    def __init__(self, iteration: int, state: tuple[float, ...], message: str | None = None):
        self.iteration = iteration
        self.state = state
        super().__init__(message or f"orbit diverged at iteration {iteration}: state={state}")


class DegenerateTangent(ChaosCipherError):
    pass


class InsufficientOrbit(ChaosCipherError):
    pass


class KeystreamMismatch(ChaosCipherError):
    pass


class EntropyUnavailable(ChaosCipherError):
    pass


class UnsupportedFormat(ChaosCipherError):
    pass


class MalformedHeader(ChaosCipherError):
    pass


class TruncatedPixelData(ChaosCipherError):
    pass


class IoFailure(ChaosCipherError):
    pass


class DegenerateVariance(ChaosCipherError):
    pass


class ShapeMismatch(ChaosCipherError):
    pass


class TooSmall(ChaosCipherError):
    pass
