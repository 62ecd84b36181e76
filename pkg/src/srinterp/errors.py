"""Exception hierarchy shared across the toolkit."""


class SrinterpError(Exception):
    """Base class for all toolkit errors."""


class InjectedStreamExhausted(SrinterpError):
    """More random draws were requested than the injected sequence supplies."""


class MalformedHeader(SrinterpError):
    """PGM header is not a binary P5 header."""


class UnsupportedMaxval(SrinterpError):
    """PGM maxval is not 255."""


class TruncatedPayload(SrinterpError):
    """Pixel payload is shorter than the header declares."""


class BadMagic(SrinterpError):
    """Frame container does not start with the SRIF magic."""


class ZeroFrames(SrinterpError):
    """Frame container declares zero frames."""


class DimensionMismatch(SrinterpError):
    """Two images that must share dimensions do not."""


class ImageTooSmall(SrinterpError):
    """Image is below the minimum size a metric requires."""


class InvalidGeometry(SrinterpError):
    """Sector geometry violates its invariants."""


class PairingError(SrinterpError):
    """Benchmark input/reference directories do not pair up."""
