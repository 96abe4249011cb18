"""Shared pieces for the constructions."""


class ConstructionError(RuntimeError):
    """A construction could not be carried out, or its precondition failed."""
