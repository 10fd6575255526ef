"""Exception types shared across the toolkit.

The CLI maps these onto stable exit codes (see ``spdclab.cli``), so new
error conditions should reuse one of the classes below rather than raising
bare exceptions.
"""


class SpdclabError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(SpdclabError, ValueError):
    """A data file or record violates its schema."""


class InsufficientDataError(SpdclabError, ValueError):
    """A statistical operation received too few counts to be meaningful."""


class NumericalConsistencyError(SpdclabError, RuntimeError):
    """A numerical self-check failed (e.g. non-negligible imaginary residue)."""


class TopologyError(SpdclabError, ValueError):
    """A fusion network does not have the required connectivity."""
