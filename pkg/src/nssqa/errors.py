"""Exception hierarchy shared by all nssqa modules."""


class NssqaError(Exception):
    """Base class for all library errors."""


class UnsupportedFormat(NssqaError):
    """File is not an 8-bit raster format we can decode."""


class CorruptImage(NssqaError):
    """File exists but fails to decode."""


class ImageTooSmall(NssqaError):
    """Image too small for the requested crop or decomposition."""


class SiftingDiverged(NssqaError):
    """BEMD envelope interpolation produced non-finite values."""


class DegenerateInput(NssqaError):
    """Sample has (near-)zero variance where a model fit needs spread."""


class TooFewSamples(NssqaError):
    """Sample smaller than the minimum a fit requires."""


class SubbandTooSmall(NssqaError):
    """Subband smaller than one block."""


class InvalidParams(NssqaError):
    """Model parameters outside their valid domain."""


class BlockCountMismatch(NssqaError):
    """Entropy sets have differing block counts or block sizes."""


class ConfigMismatch(NssqaError):
    """Reference features and scoring config disagree."""


class DegenerateScores(NssqaError):
    """Objective scores have zero variance; regression is undefined."""


class FitDidNotImprove(NssqaError):
    """Optimizer failed to beat its best initialization (non-fatal, carries params)."""

    def __init__(self, message, params=None):
        super().__init__(message)
        self.params = params


class MissingMosFile(NssqaError):
    """Dataset root has no recognizable MOS file."""


class MissingReference(NssqaError):
    """A distorted image's reference is absent."""


class DivisionByZero(NssqaError):
    """Improvement percentage undefined for zero grayscale correlation."""
