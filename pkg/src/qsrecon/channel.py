"""Quantum channel with BB84 decoy checking and an intercept-resend eavesdropper."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import statevec as sv
from .errors import ProtocolViolation
from .statevec import Basis, Sample, Statevector

DEFAULT_DECOYS = 16
DEFAULT_THRESHOLD = 0.0

_BB84 = {(b, m): sv.outcome_ket(b, m) for b in Basis for m in (0, 1)}


@dataclass(frozen=True)
class Slot:
    kind: str  # "payload" or "decoy"
    state: Statevector


@dataclass(frozen=True)
class Preparation:
    """What the sender remembers about one decoy."""

    basis: Basis
    bit: int


@dataclass(frozen=True)
class Transmission:
    """Qubits in flight.  Carries no record of how the decoys were prepared."""

    slots: tuple
    seed: Optional[int] = None

    def payload(self) -> Statevector:
        for slot in self.slots:
            if slot.kind == "payload":
                return slot.state
        raise ProtocolViolation("transmission carries no payload")

    def __len__(self):
        return len(self.slots)


# None marks the payload position
PreparationRecord = Sequence[Optional[Preparation]]


@dataclass(frozen=True)
class ChannelReport:
    decoys_checked: int
    errors: int
    error_rate: float
    verdict: str  # "Clean" or "Abort"
    threshold: float = DEFAULT_THRESHOLD

    @property
    def aborted(self) -> bool:
        return self.verdict == "Abort"

    def to_dict(self) -> dict:
        return {
            "decoys_checked": self.decoys_checked,
            "errors": self.errors,
            "error_rate": self.error_rate,
            "verdict": self.verdict,
            "threshold": self.threshold,
        }


def send_with_decoys(
    payload: Statevector, decoy_count: int = DEFAULT_DECOYS, seed=None
) -> tuple[Transmission, list]:
    """Interleave ``payload`` with uniformly drawn BB84 decoys.

    Returns the transmission and the sender's private preparation record.
    """
    if decoy_count < 0:
        raise ValueError("decoy_count must be non-negative")
    rng = np.random.default_rng(seed)
    bases = rng.integers(0, 2, size=decoy_count)
    bits = rng.integers(0, 2, size=decoy_count)
    pos = int(rng.integers(0, decoy_count + 1))
    slots, record = [], []
    for j in range(decoy_count):
        prep = Preparation(Basis.Z if bases[j] == 0 else Basis.X, int(bits[j]))
        slots.append(Slot("decoy", _BB84[prep.basis, prep.bit]))
        record.append(prep)
    slots.insert(pos, Slot("payload", payload))
    record.insert(pos, None)
    return Transmission(tuple(slots), seed if isinstance(seed, int) else None), record


def eavesdrop_intercept_resend(t: Transmission, seed=None) -> Transmission:
    """Measure every slot in a random Z/X basis and resend the collapsed state."""
    rng = np.random.default_rng(seed)
    policy = Sample(rng)
    out = []
    for slot in t.slots:
        basis = Basis.Z if rng.random() < 0.5 else Basis.X
        _, collapsed = sv.measure(slot.state, 0, basis, policy)
        out.append(Slot(slot.kind, collapsed))
    return Transmission(tuple(out), t.seed)


def detect(
    t: Transmission,
    record: PreparationRecord,
    threshold: float = DEFAULT_THRESHOLD,
    seed=None,
) -> ChannelReport:
    """Measure each decoy in its preparation basis and count mismatches.

    The payload slot is never touched.
    """
    if len(record) != len(t.slots):
        raise ProtocolViolation("preparation record does not match the transmission")
    policy = Sample(np.random.default_rng(seed))
    checked = errors = 0
    for slot, prep in zip(t.slots, record):
        if prep is None:
            if slot.kind != "payload":
                raise ProtocolViolation("record marks a decoy slot as payload")
            continue
        if slot.kind != "decoy":
            raise ProtocolViolation("record marks the payload slot as a decoy")
        m, _ = sv.measure(slot.state, 0, prep.basis, policy)
        checked += 1
        errors += int(m != prep.bit)
    rate = errors / checked if checked else 0.0
    verdict = "Abort" if rate > threshold else "Clean"
    return ChannelReport(checked, errors, rate, verdict, threshold)


Eavesdropper = Callable[[Transmission, np.random.Generator], Transmission]


def intercept_resend(t: Transmission, rng: np.random.Generator) -> Transmission:
    return eavesdrop_intercept_resend(t, rng)


def transmit(
    payload: Statevector,
    rng: np.random.Generator,
    decoys: int = DEFAULT_DECOYS,
    threshold: float = DEFAULT_THRESHOLD,
    eavesdropper: Optional[Eavesdropper] = None,
) -> tuple[Statevector, ChannelReport]:
    """Send, optionally attack, and check one payload.  Returns what arrived."""
    t, record = send_with_decoys(payload, decoys, rng)
    if eavesdropper is not None:
        t = eavesdropper(t, rng)
    # bases are disclosed only after the qubits have arrived
    report = detect(t, record, threshold, rng)
    return t.payload(), report


def intercept_resend_abort_rate(decoys: int, trials: int, seed=None, threshold: float = DEFAULT_THRESHOLD) -> float:
    """Fraction of attacked transmissions that end in Abort."""
    rng = np.random.default_rng(seed)
    aborts = 0
    for _ in range(trials):
        _, report = transmit(sv.ket("0"), rng, decoys, threshold, intercept_resend)
        aborts += report.aborted
    return aborts / trials
