class InputError(ValueError):
    """Raised for malformed inputs: basis mismatches, bad bidegrees, bad files."""
