"""Exception hierarchy. Each class carries a stable machine-readable code."""


class PomlabError(Exception):
    """Base class for all pomlab errors."""

    code = "error"


class InvalidArgument(PomlabError):
    code = "invalid-argument"


class InvalidBlochVector(PomlabError):
    code = "invalid-bloch-vector"


class InvalidDensity(PomlabError):
    code = "invalid-density"


class InvalidMeasurement(PomlabError):
    code = "invalid-measurement"


class UnsupportedN(PomlabError):
    code = "unsupported-n"


class MalformedProtocol(PomlabError):
    code = "malformed-protocol"


class InvalidMask(PomlabError):
    code = "invalid-mask"


class InvalidEncoding(PomlabError):
    code = "invalid-encoding"


class NotParityOblivious(PomlabError):
    code = "not-parity-oblivious"


class InvalidDecoder(PomlabError):
    code = "invalid-decoder"


class OracleTooLarge(PomlabError):
    code = "oracle-too-large"


class InvalidModel(PomlabError):
    code = "invalid-model"


class InvalidEquivalenceClaim(PomlabError):
    code = "invalid-equivalence-claim"


class IncompleteRecord(PomlabError):
    code = "incomplete-record"


class InsufficientData(PomlabError):
    code = "insufficient-data"
