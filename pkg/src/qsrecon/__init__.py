"""Simulator for cluster-state quantum secret reconstruction with share reuse."""

from .errors import (
    ArityError,
    BadModulus,
    BadRandomizer,
    ChannelError,
    DegenerateInterpolation,
    DimensionError,
    ImpossibleOutcome,
    InvalidArity,
    NotConsistent,
    ProtocolViolation,
    QSRError,
)
from .shares import ShareConfig, encode_angle, split_secret
from .statevec import Basis, Forced, Gate, Sample, Statevector
from .protocol import Transcript, run_multi_secret, run_protocol

__version__ = "0.1.0"

__all__ = [
    "ArityError", "BadModulus", "BadRandomizer", "ChannelError", "DegenerateInterpolation",
    "DimensionError", "ImpossibleOutcome", "InvalidArity", "NotConsistent", "ProtocolViolation",
    "QSRError", "ShareConfig", "encode_angle", "split_secret", "Basis", "Forced", "Gate",
    "Sample", "Statevector", "Transcript", "run_multi_secret", "run_protocol", "__version__",
]
