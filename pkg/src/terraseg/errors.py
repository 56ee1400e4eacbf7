"""Exception types and the diagnostic record shared across the toolkit.

Errors abort an operation; Diagnostics describe semantic findings (out-of-range
values, degenerate columns, imputed cells) without failing the caller.
"""

from __future__ import annotations

from dataclasses import dataclass


class TerrasegError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(TerrasegError):
    """Invalid pipeline or CLI configuration (exit code 1)."""


class DataError(TerrasegError):
    """Input data violates a structural contract (exit code 2)."""


class ComputationError(TerrasegError):
    """A computation stage received inconsistent inputs (exit code 3)."""


# -- ingest ------------------------------------------------------------------

class MissingColumn(DataError):
    def __init__(self, code: str):
        super().__init__(f"required column {code!r} is missing from the header")
        self.code = code


class NonNumericCell(DataError):
    def __init__(self, row: int, column: str, cell: str):
        super().__init__(f"cell at row {row}, column {column!r} is not numeric: {cell!r}")
        self.row = row
        self.column = column
        self.cell = cell


class DuplicateId(DataError):
    def __init__(self, entity_id: int):
        super().__init__(f"duplicate entity id {entity_id}")
        self.entity_id = entity_id


class TooFewRows(DataError):
    def __init__(self, count: int):
        super().__init__(f"need at least 2 data rows, got {count}")
        self.count = count


# -- normalize ---------------------------------------------------------------

class EmptyDataset(DataError):
    pass


class AlreadyComplemented(ComputationError):
    pass


# -- cluster engine ----------------------------------------------------------

class TooFewEntities(DataError):
    pass


class InvalidLinkage(ConfigError):
    def __init__(self, linkage: str):
        super().__init__(f"unknown linkage {linkage!r}")
        self.linkage = linkage


# -- cuts, taxonomy, indicator -----------------------------------------------

class InvalidK(ComputationError):
    pass


class NegativeThreshold(ComputationError):
    pass


class UnmappedGroup(ComputationError):
    def __init__(self, group_id: int):
        super().__init__(f"no label mapped for group {group_id}")
        self.group_id = group_id


class UnknownEntity(ComputationError):
    pass


class UnknownLabel(ComputationError):
    pass


class WeightsNotNormalized(ComputationError):
    pass


# -- reports -----------------------------------------------------------------

class EmptyInput(ComputationError):
    pass


class UnknownPolicy(ComputationError):
    pass


class InconsistentInput(ComputationError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    """One semantic finding: which entity/attribute, which rule, and a message."""

    rule: str
    message: str
    entity_id: int | None = None
    attribute: str | None = None

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "message": self.message,
            "entity_id": self.entity_id,
            "attribute": self.attribute,
        }
