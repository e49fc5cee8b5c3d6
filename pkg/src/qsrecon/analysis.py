"""Cost accounting, the three-qubit hardware circuit in simulation, and the swap test."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import statevec as sv
from .errors import InvalidArity
from .statevec import Basis, Forced, OutcomePolicy, Sample, Statevector

PI = math.pi


# ---------------------------------------------------------------------------
# cost model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CostModel:
    """``n`` parties sharing ``m`` states with ``share_bits``-bit shares.

    ``T_a`` and ``T_m`` are the unit costs of one addition and one
    multiplication; they only scale :meth:`ComputationCost.weighted`.
    """

    n: int
    m: int
    share_bits: int
    T_a: float = 1.0
    T_m: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise InvalidArity("need at least two parties")
        if self.m < 1:
            raise InvalidArity("need at least one shared state")
        if self.share_bits < 2:
            raise ValueError("a share needs at least two bits")

    @classmethod
    def for_modulus(cls, n: int, q: int, m: int, **units) -> "CostModel":
        return cls(n, m, int(q).bit_length(), **units)


@dataclass(frozen=True)
class ComputationCost:
    additions_per_state: Fraction
    multiplications_per_angle: Fraction
    total_additions: int
    total_multiplications: int

    def weighted(self, T_a: float = 1.0, T_m: float = 1.0) -> float:
        return float(self.additions_per_state) * T_a + float(self.multiplications_per_angle) * T_m


def distribution_cost(model: CostModel) -> Fraction:
    """Share bits distributed per shared state, ``n*|q|/m``."""
    return Fraction(model.n * model.share_bits, model.m)


def computation_cost(model: CostModel) -> ComputationCost:
    """Exact operation counts for ``m`` sessions over one share distribution.

    Each of the ``n + 1`` angle-encoding parties (dealer and all
    shareholders) pays two multiplications once and one per session; each
    of the ``n - 1`` non-combiner shareholders pays one addition per session.
    """
    n, m = model.n, model.m
    return ComputationCost(
        additions_per_state=Fraction((n - 1) * m, m),
        multiplications_per_angle=Fraction(2 + m, m),
        total_additions=(n - 1) * m,
        total_multiplications=(n + 1) * (2 + m),
    )


@dataclass(frozen=True)
class CostRow:
    scheme: str
    distribution_class: str
    computation_class: str
    share_reuse: bool
    distribution_bits: Optional[Fraction] = None
    additions: Optional[int] = None
    multiplications: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "distribution_class": self.distribution_class,
            "computation_class": self.computation_class,
            "share_reuse": self.share_reuse,
            "distribution_bits": None if self.distribution_bits is None else float(self.distribution_bits),
            "additions": self.additions,
            "multiplications": self.multiplications,
        }


# classical comparison schemes: only their asymptotic classes are known
_CLASSICAL_ROWS = (
    ("unrestricted scheme", "O(|q|n^2)", "O(n)T_a+O(n^3)T_m"),
    ("basic SSR scheme", "O(|q|n)", "O(n)T_a+O(n^3)T_m"),
    ("bivariate scheme", "O(|q|n^2)", "O(n)T_a+O(n^4)T_m"),
)


def comparison_table(model: CostModel) -> list[CostRow]:
    cc = computation_cost(model)
    rows = [
        CostRow(
            "proposed protocol",
            "O(1)",
            "O(n)T_a+O(1)T_m",
            True,
            distribution_cost(model),
            cc.total_additions,
            cc.total_multiplications,
        )
    ]
    rows.extend(CostRow(name, dc, comp, False) for name, dc, comp in _CLASSICAL_ROWS)
    return rows


def format_table(rows: list[CostRow]) -> str:
    head = ("scheme", "distribution", "computation", "reuse", "bits/state", "adds", "mults")
    body = [
        (
            r.scheme,
            r.distribution_class,
            r.computation_class,
            "Yes" if r.share_reuse else "No",
            "-" if r.distribution_bits is None else str(r.distribution_bits),
            "-" if r.additions is None else str(r.additions),
            "-" if r.multiplications is None else str(r.multiplications),
        )
        for r in rows
    ]
    widths = [max(len(row[i]) for row in (head, *body)) for i in range(len(head))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in (head, *body)]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# hardware circuit
# ---------------------------------------------------------------------------

# (compensate, theta) per classical bit, for the two feed-forward stages
_STAGE1 = {1: (True, PI / 2), 0: (False, PI / 6)}
_STAGE2 = {1: (True, 5 * PI / 3), 0: (False, -PI / 3)}


def _prepare_circuit() -> Statevector:
    state = sv.new_state(3)
    for gate in (sv.H, sv.RZ(PI / 3), sv.RY(PI / 2), sv.RX(2 * PI / 3)):
        state = sv.apply_1q(state, gate, 0)
    for gate in (sv.H, sv.RZ(PI / 6)):
        state = sv.apply_1q(state, gate, 1)
    for gate in (sv.H, sv.RZ(PI)):
        state = sv.apply_1q(state, gate, 2)
    return state


def _feed_forward(state: Statevector, bit: int, target: int, table: dict) -> Statevector:
    compensate, theta = table[bit]
    if compensate:
        state = sv.apply_1q(state, sv.X, target)
    state = sv.apply_1q(state, sv.H, target)
    return sv.apply_1q(state, sv.RX(theta), target)


def _measure_h(state: Statevector, target: int, policy: OutcomePolicy) -> tuple[int, Statevector]:
    # H then a computational-basis readout, as on hardware
    state = sv.apply_1q(state, sv.H, target)
    return sv.measure(state, target, Basis.Z, policy)


def experiment_state(p0: OutcomePolicy, p1: OutcomePolicy) -> tuple[int, int, Statevector]:
    """Run the circuit up to (not including) the final readout of qubit 2."""
    state = _prepare_circuit()
    state = sv.apply_cz(state, 0, 1)
    c0, state = _measure_h(state, 0, p0)
    state = _feed_forward(state, c0, 1, _STAGE1)
    state = sv.apply_cz(state, 1, 2)
    c1, state = _measure_h(state, 1, p1)
    state = _feed_forward(state, c1, 2, _STAGE2)
    for gate in (sv.RX(PI / 3), sv.RY(-PI / 2), sv.RZ(-PI / 3), sv.H):
        state = sv.apply_1q(state, gate, 2)
    return c0, c1, state


def run_experiment(shots: int = 5000, seed=None) -> dict[str, int]:
    """Histogram of ``"c2c1c0"`` over ``shots`` independent executions."""
    if shots < 1:
        raise ValueError("shots must be positive")
    policy = Sample(np.random.default_rng(seed))
    counts: Counter = Counter()
    for _ in range(shots):
        c0, c1, state = experiment_state(policy, policy)
        c2, _ = sv.measure(state, 2, Basis.Z, policy)
        counts[f"{c2}{c1}{c0}"] += 1
    return dict(sorted(counts.items()))


@dataclass(frozen=True)
class Branch:
    c0: int
    c1: int
    probability: float
    c2_one_amplitude: float


def experiment_branches() -> list[Branch]:
    """Exact probability of each (c0, c1) branch and its largest ``c2 = 1`` amplitude."""
    base = _prepare_circuit()
    base = sv.apply_cz(base, 0, 1)
    h0 = sv.apply_1q(base, sv.H, 0)
    out = []
    for c0 in (0, 1):
        p_c0 = sv.outcome_probability(h0, 0, Basis.Z, c0)
        for c1 in (0, 1):
            _, _, state = experiment_state(Forced(c0), Forced(c1))
            mid = _feed_forward(sv.measure(h0, 0, Basis.Z, Forced(c0))[1], c0, 1, _STAGE1)
            mid = sv.apply_1q(sv.apply_cz(mid, 1, 2), sv.H, 1)
            p_c1 = sv.outcome_probability(mid, 1, Basis.Z, c1)
            ones = (np.arange(8) >> 2) & 1
            amp = float(np.max(np.abs(state.amps[ones == 1])))
            out.append(Branch(c0, c1, p_c0 * p_c1, amp))
    return out


def max_c2_one_amplitude() -> float:
    return max(b.c2_one_amplitude for b in experiment_branches())


def format_histogram(counts: dict[str, int]) -> str:
    total = sum(counts.values())
    return "\n".join(f"{key}  {n:6d}  {n / total:.4f}" for key, n in sorted(counts.items()))


# ---------------------------------------------------------------------------
# swap test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SwapTestResult:
    p0: float
    p0_estimate: float
    fidelity_estimate: float
    shots: int


def swap_test(a: Statevector, b: Statevector, shots: int, seed=None) -> SwapTestResult:
    """Ancilla on qubit 0, ``a`` on 1, ``b`` on 2.

    The shots are drawn as one binomial sample from the exact ancilla
    probability, which has the same distribution as repeating the circuit.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    if a.num_qubits != 1 or b.num_qubits != 1:
        raise InvalidArity("swap test compares two single-qubit states")
    state = sv.tensor(sv.ket("0"), a, b)
    state = sv.apply_1q(state, sv.H, 0)
    state = sv.apply_cswap(state, 0, 1, 2)
    state = sv.apply_1q(state, sv.H, 0)
    p0 = sv.outcome_probability(state, 0, Basis.Z, 0)
    hits = int(np.random.default_rng(seed).binomial(shots, min(1.0, p0)))
    p_hat = hits / shots
    return SwapTestResult(p0, p_hat, min(1.0, max(0.0, 2 * p_hat - 1)), shots)


def swap_test_verify(a: Statevector, b: Statevector, shots: int = 10_000, seed=None) -> float:
    """Estimated ``|<a|b>|^2``."""
    return swap_test(a, b, shots, seed).fidelity_estimate
