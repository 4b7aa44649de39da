"""Exception hierarchy shared across the package."""


class GradematchError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(GradematchError):
    """A corpus file or record violates the record contract."""


class EmbeddingError(GradematchError):
    """An embedding table is malformed or misses a required entry."""


class SchemaError(GradematchError):
    """A serialized artifact does not carry the expected schema."""
