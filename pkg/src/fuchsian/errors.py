"""Exception and warning types shared across the package."""


class FuchsianError(Exception):
    """Base class for all errors raised by this package."""


class NonFinite(FuchsianError):
    """A matrix entry or point coordinate is NaN or infinite."""


class NoIsometricCircle(FuchsianError):
    """Rotations about the origin (b = 0) have no isometric circle."""


class DegenerateGeodesic(FuchsianError):
    """The two defining points of a geodesic coincide."""


class InvalidSignature(FuchsianError):
    """Signature violates t >= 1, m_i >= 2, or the area condition."""


class NotElliptic(FuchsianError):
    """Operation requires an elliptic (interior) vertex."""


class CustomPointOutOfRange(FuchsianError):
    """A custom partition point lies outside its admissible open arc."""

    def __init__(self, vertex_index: int, message: str = ""):
        self.vertex_index = vertex_index
        super().__init__(message or f"partition point at vertex {vertex_index} out of range")


class DiagonalPoint(FuchsianError):
    """The two coordinates of a planar point coincide on the circle."""


class PartitionOutOfGuaranteeRange(UserWarning):
    """Some elliptic partition point lies outside its [P, Q] arc.

    The attractor is still built (the bijectivity statement does not need
    the [P, Q] restriction), but the global-attraction guarantee does.
    """
