class AbsorbedError(RuntimeError):
    """Raised when the total event rate is zero and no jump can occur."""
