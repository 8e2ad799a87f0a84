class DmrError(Exception):
    """Base class for every error raised by the dmr package."""
    pass


class DataError(DmrError, ValueError):
    """Raised for invalid input data: empty inputs, ragged or non-finite vectors, bad CSV rows."""
    pass


class DegenerateScaleError(DmrError, ValueError):
    """Raised when the Cauchy kernel is evaluated with a nonpositive scale."""
    pass


class ModelError(DmrError):
    """Raised when a model is empty, incomplete, or stored in an unsupported format."""
    pass
