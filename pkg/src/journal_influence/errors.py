"""Exception hierarchy shared by every stage of the toolkit."""


class DsrsError(Exception):
    """Base class for all toolkit errors."""


class ContractError(DsrsError, ValueError):
    """Caller violated a documented precondition."""


class ParseError(DsrsError):
    """Input table could not be parsed.

    ``row`` is 1-based with the header as row 1; ``column`` is the header
    label of the offending cell when known.
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class InsufficientObservations(DsrsError):
    """Fewer than ``k + 2`` complete observations for ``k`` predictors."""


class ConstantColumnError(DsrsError):
    def __init__(self, column=None):
        self.column = column
        label = f" {column!r}" if column is not None else ""
        super().__init__(f"constant column{label}: zero variance")


class CollinearityError(DsrsError):
    """Normal equations are numerically singular."""

    def __init__(self, index, columns=None):
        self.index = index
        self.columns = list(columns) if columns is not None else []
        if self.columns:
            names = ", ".join(repr(c) for c in self.columns)
            msg = f"collinear predictors: column {index} is a linear combination of others ({names})"
        else:
            msg = f"collinear predictors: singular pivot at column index {index}"
        super().__init__(msg)


class NoSignificantFeatures(DsrsError):
    pass


class DegenerateInput(DsrsError):
    pass


class PipelineError(DsrsError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
