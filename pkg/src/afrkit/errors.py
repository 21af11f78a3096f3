"""Exception types shared across the package.

Plain I/O failures (missing files, unwritable paths) raise the builtin
OSError family; everything domain-specific gets a named class here so
callers can catch precisely.
"""


class ParseError(ValueError):
    """Input bytes/text do not match the expected format."""


class ValidationError(ValueError):
    """A structurally well-formed object violates a domain invariant."""


class InvalidProfile(ValueError):
    """Unknown QoE profile name or non-finite profile constants."""


class LevelOutOfRange(ValueError):
    """A frame-rate level index is outside [1, m]."""


class ActionOutOfRange(LevelOutOfRange):
    """An action handed to the simulator is outside [1, m]."""


class LengthMismatch(ValueError):
    """Two per-chunk sequences that must align have different lengths."""


class DimensionMismatch(ValueError):
    """Frame pair with differing width/height."""


class IndexOutOfRange(IndexError):
    """A chunk index is outside the trace."""


class EpisodeFinished(RuntimeError):
    """step() called on a simulator whose episode already ended."""


class EmptyDataset(ValueError):
    """An operation needs at least one trace/chunk and got none."""


class InvalidTopology(ValueError):
    """Network topology violates a constraint (e.g. zero hidden layers)."""


class ShapeMismatch(ValueError):
    """Parameters, gradients, or observations do not match the topology."""


class NonFiniteGradient(ArithmeticError):
    """A gradient block contains NaN or infinity; parameters were not touched."""


class VersionMismatch(ValueError):
    """Checkpoint format version not supported by this code."""


class CorruptFile(ValueError):
    """Checkpoint bytes fail magic/CRC/structure checks."""


class InvalidRange(ValueError):
    """A requested range (levels, thresholds, fractions) is out of bounds."""


class BadThresholds(ValueError):
    """Baseline thresholds are not finite and non-decreasing."""


class BadRequest(ValueError):
    """A service request body is malformed or fails validation."""


class CheckpointMissing(FileNotFoundError):
    """Service started against a checkpoint path that does not exist."""


class BindError(OSError):
    """Service could not bind the requested address."""
