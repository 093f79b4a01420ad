"""Exception types raised by the package.

Every error carries a short machine-readable ``code`` used by the CLI when it
reports a domain error as JSON.
"""


class QModeError(Exception):
    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class InsufficientTruncation(QModeError):
    code = "insufficient_truncation"


class NonUnitLeading(QModeError):
    code = "non_unit_leading"


class NonHolomorphic(QModeError):
    """A quotient would carry a negative power of q."""

    code = "non_holomorphic"


class NotQuasimodular(QModeError):
    code = "not_quasimodular"


class UndeterminedOrder(QModeError):
    code = "undetermined_order"


class Resonance(QModeError):
    code = "resonance"


class NotARoot(QModeError):
    code = "not_a_root"


class UnsupportedExponents(QModeError):
    code = "unsupported_exponents"


class Obstruction(QModeError):
    code = "obstruction"


class InvalidExponents(QModeError):
    code = "invalid_exponents"


class OutOfRange(QModeError):
    code = "out_of_range"


class ValuationMismatch(QModeError):
    """An operator did not produce the vanishing order it is built for."""

    code = "valuation_mismatch"


class DataIntegrityError(QModeError):
    code = "data_integrity"


class SchemaError(QModeError):
    code = "schema"
