"""Exception hierarchy shared by all embedgauge modules."""


class EmbedGaugeError(Exception):
    """Base class for every error raised by this package."""


# --- vector / pair evaluation ---------------------------------------------

class DimensionError(EmbedGaugeError):
    """Operands have incompatible dimensions or lengths."""


class DegenerateVectorError(EmbedGaugeError):
    """A zero-norm vector was passed where a direction is required."""


class MissingEmbeddingError(EmbedGaugeError):
    """A sentence pair references an embedding id that is not present."""

    def __init__(self, pair_id: str):
        self.pair_id = pair_id
        super().__init__(f"no embedding pair for id {pair_id!r}")


class MissingCategoryError(EmbedGaugeError):
    """A required pair category is absent from the stats map."""

    def __init__(self, category):
        self.category = category
        super().__init__(f"missing category {category!r}")


# --- statistics ------------------------------------------------------------

class DomainError(EmbedGaugeError):
    """An argument lies outside the mathematical domain of the function."""


class DegenerateVarianceError(EmbedGaugeError):
    """Both groups (or a required series) have zero variance."""


# --- trade-off analytics ---------------------------------------------------

class MedianUndefinedError(EmbedGaugeError):
    """Median requested over an empty subset (e.g. no improved models)."""


class IncompleteGridError(EmbedGaugeError):
    """Ablation grid is missing cells."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"incomplete ablation grid, missing cells: {self.missing}")


class RankError(EmbedGaugeError):
    """Adapter rank exceeds what an adapted matrix admits."""


# --- benchmark harness -----------------------------------------------------

class ProviderDiedError(EmbedGaugeError):
    """The provider process exited or closed its pipe mid-run."""


class ProtocolError(EmbedGaugeError):
    """The provider sent a malformed or inconsistent response."""


class EmptySampleError(EmbedGaugeError):
    """A latency sample list was empty."""


# --- file formats / reporting ----------------------------------------------

class ParseError(EmbedGaugeError):
    """A text input file failed to parse."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateIdError(EmbedGaugeError):
    """Two records in one file share an id."""


class FormatError(EmbedGaugeError):
    """A binary input violates its declared structure."""


class DataError(EmbedGaugeError):
    """A value inside an otherwise well-formed file is invalid (e.g. NaN)."""


class IoError(EmbedGaugeError):
    """An output location could not be written."""
