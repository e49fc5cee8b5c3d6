"""Exception types raised across the package."""


class QSRError(Exception):
    """Base class for all library errors."""


class InvalidArity(QSRError, ValueError):
    """A count (qubits, parties, secrets, shots) is outside its allowed range."""


class ArityError(QSRError, ValueError):
    """A gate was applied with the wrong number of qubits."""


class DimensionError(QSRError, ValueError):
    """Two objects that must have matching sizes do not."""


class ImpossibleOutcome(QSRError):
    """A forced measurement outcome has (numerically) zero probability."""


class BadModulus(QSRError, ValueError):
    """The share modulus is not a prime greater than 2 (or exceeds 2**61)."""


class BadRandomizer(QSRError, ValueError):
    """The session randomizer s is outside {1, ..., q-1}."""


class NotConsistent(QSRError):
    """Encoded angles do not sum to an integer multiple of 2*pi."""


class DegenerateInterpolation(QSRError, ValueError):
    """Lagrange weights requested for repeated or zero abscissae."""


class ProtocolViolation(QSRError):
    """A party broke the announcement ordering or message contract."""


class ChannelError(QSRError):
    """Decoy checking detected tampering on a quantum channel."""
