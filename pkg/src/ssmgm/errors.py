"""Exception hierarchy shared by the toolkit."""


class StereoError(Exception):
    """Base class for every error raised by ssmgm."""


class FormatError(StereoError, ValueError):
    """A file does not follow the expected binary layout."""


class SizeMismatchError(FormatError):
    """Declared dimensions and payload length disagree."""


class UnsupportedDepthError(FormatError):
    """PGM maxval above 255."""


class ParameterError(StereoError, ValueError):
    """A run parameter is outside its supported range."""


class DimensionError(StereoError, ValueError):
    """Inputs have incompatible shapes."""


class RangeError(StereoError, ValueError):
    """A value does not fit the 8-bit output encoding."""


class DegenerateInputError(StereoError, ValueError):
    """Nothing to evaluate (e.g. no jointly valid pixels)."""
