"""Exception hierarchy shared across the engine."""


class QgenError(Exception):
    """Base class for all engine errors."""


# --- ingestion -------------------------------------------------------------

class IngestError(QgenError):
    pass


class EmptyInput(IngestError):
    pass


class RaggedRows(IngestError):
    pass


class DuplicateColumnName(IngestError):
    pass


# --- column measures -------------------------------------------------------

class MeasureError(QgenError):
    pass


class AllNull(MeasureError):
    pass


class ZeroMean(MeasureError):
    pass


class ZeroVariance(MeasureError):
    pass


class InsufficientRows(MeasureError):
    pass


class DegenerateTable(MeasureError):
    pass


class NoEligibleColumns(QgenError):
    pass


# --- slicing ---------------------------------------------------------------

class NoViableSlices(QgenError):
    pass


class InsufficientData(QgenError):
    pass


# --- question generation ---------------------------------------------------

class IncompatibleOperator(QgenError):
    pass


class MissingMeasure(QgenError):
    pass


class ArityMismatch(QgenError):
    pass


class EmptySlice(QgenError):
    pass


# --- ranking / sessions ----------------------------------------------------

class UnknownQuestion(QgenError):
    pass


class VersionMismatch(QgenError):
    pass


class DatasetMismatch(QgenError):
    pass


class CorruptSnapshot(QgenError):
    pass


class IoFailure(QgenError):
    pass
