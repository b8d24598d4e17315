"""Error taxonomy shared by the spec parser, schema checks, and renderers."""

from __future__ import annotations


class FigureError(Exception):
    """Base class for every user-facing failure in this package."""


class SpecError(FigureError):
    """A figure-spec document is malformed.

    Carries the full list of problems so a user can fix them in one pass.
    """

    def __init__(self, errors: list[str]) -> None:
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


class SchemaError(FigureError):
    """An input CSV does not conform to the chain or slice schema."""
