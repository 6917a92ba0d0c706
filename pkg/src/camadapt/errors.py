"""Exception types shared across the package."""


class CamAdaptError(Exception):
    """Base class for package-specific errors."""


class FrameTooSmall(CamAdaptError):
    """An operation needs a larger frame (gradient measures need 3x3)."""


class OutOfRange(CamAdaptError):
    """A camera parameter value is not an integer in [0, 100]."""


class TransportError(CamAdaptError):
    """A remote endpoint (camera or estimator) timed out, refused the
    connection, answered non-200, or returned an unusable body."""


class DecodeError(CamAdaptError):
    """An HTTP capture body could not be decoded as a PNG/JPEG image."""


class ProtocolError(CamAdaptError):
    """An external estimator answered 200 but the body violates the wire
    protocol (not JSON, missing score, non-finite score)."""


class ParseError(CamAdaptError):
    """A file (scene manifest, Q-table) is structurally malformed."""


class ValidationError(CamAdaptError):
    """A parsed document violates a domain invariant."""


class VersionMismatch(CamAdaptError):
    """A persisted Q-table declares an unsupported format version."""


class BoxOutOfBounds(CamAdaptError):
    """A target box does not fit inside the frame it is evaluated on."""


class ConfigError(CamAdaptError):
    """An experiment configuration is inconsistent or incomplete."""
