"""The three-party worked example as a fixture, with its expected state trace.

Dealer Alice, shareholders Bob1 and Bob2, combiner Charlie, q = 3.  The
example's angles are ``k*pi/q`` rather than ``2*pi*k/q``, so the replay
feeds them in literally instead of going through :func:`encode_angle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import statevec as sv
from .cluster import mask_state
from .protocol import TraceRow, replay_trace
from .shares import split_secret
from .statevec import Statevector

PI = math.pi
SQ3 = math.sqrt(3.0)

SECRET = sv.qubit(0.5, SQ3 / 2)
PHI_A = 2 * PI / 3
PHIS = (PI / 3, 2 * PI / 3)
PHI_C = PI / 3
MASKS = (PI / 6, PI)
OUTCOMES = (0, 1)
THETAS = (PI / 6, 5 * PI / 3)

# integer shares behind the example: 2 + 1 + 2 + 1 = 6 = 0 mod 3
CONFIG = split_secret(2, 3, 3, shares=[1, 2])


def _minus(omega: float) -> Statevector:
    return sv.apply_1q(sv.ket("-"), sv.RZ(omega), 0)


def _combine(*terms) -> Statevector:
    amps = sum(c * st.amps for c, st in terms)
    return Statevector.from_amplitudes(amps, normalize=False)


def expected_rows() -> list[Statevector]:
    """The seven states of the worked example, transcribed amplitude by amplitude.

    Row 5 is the register right after particle 1 is measured, before the
    X compensation on particle 2.
    """
    a = (1 - 3j) / 4
    b = (SQ3 - SQ3 * 1j) / 4
    p6, pp, mp = mask_state(PI / 6), mask_state(PI), _minus(PI)
    z, o = sv.ket("0"), sv.ket("1")
    plus, minus = sv.ket("+"), sv.ket("-")
    em, ep = np.exp(-1j * PI / 12), np.exp(1j * PI / 12)
    r = 1 / math.sqrt(2)
    rot = np.exp(-1j * PI / 2)

    row1 = sv.tensor(sv.qubit(a, b), p6, pp)
    row2 = _combine(
        (r * a * em, sv.tensor(z, z, pp)),
        (r * a * ep, sv.tensor(z, o, mp)),
        (r * b * em, sv.tensor(o, z, pp)),
        (-r * b * ep, sv.tensor(o, o, mp)),
    )
    pair3 = _combine(
        (r * (a + b) * em, sv.tensor(z, pp)),
        (r * (a - b) * ep, sv.tensor(o, mp)),
    )
    row3 = sv.tensor(plus, pair3)
    row4 = sv.tensor(plus, _combine((rot * SQ3 / 2, sv.tensor(z, pp)), (rot / 2, sv.tensor(o, mp))))
    row5 = sv.tensor(plus, minus, _combine((rot * SQ3 / 2, pp), (-rot / 2, mp)))
    row6 = sv.tensor(plus, minus, sv.qubit((-SQ3 - SQ3 * 1j) / 4, (-3 - 1j) / 4))
    row7 = sv.tensor(plus, minus, sv.qubit(np.exp(-1j * PI) / 2, np.exp(-1j * PI) * SQ3 / 2))
    return [row1, row2, row3, row4, row5, row6, row7]


@dataclass
class RowCheck:
    label: str
    literal_error: float
    phase_error: float


def _phase_aligned_error(got: np.ndarray, want: np.ndarray) -> float:
    overlap = np.vdot(got, want)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(got * phase - want)))


def replay() -> tuple[list[TraceRow], list[RowCheck], list[float]]:
    """Run the worked example and compare every row with the transcription."""
    rows, thetas = replay_trace(SECRET, PHI_A, PHIS, PHI_C, MASKS, OUTCOMES)
    checks = [
        RowCheck(
            row.label,
            float(np.max(np.abs(row.state.amps - want.amps))),
            _phase_aligned_error(row.state.amps, want.amps),
        )
        for row, want in zip(rows, expected_rows())
    ]
    return rows, checks, thetas
