"""Dense statevector engine.

Basis index convention: qubit ``k`` is bit ``k`` of the basis index, so qubit 0
is the least-significant bit.  ``tensor(a, b)`` therefore places ``a`` on
qubit 0 and ``b`` on qubit 1, i.e. its amplitude vector is ``kron(b, a)``.

No global-phase normalisation is ever applied.  Rotations use the symmetric
``exp(-+i theta/2)`` form, so amplitudes can be compared literally against
hand-derived expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import ArityError, DimensionError, ImpossibleOutcome, InvalidArity

TWO_PI = 2.0 * math.pi

#: tolerance for algebraic identities (unitarity, norms)
ALGEBRA_TOL = 1e-12
#: tolerance for end-to-end state comparisons
STATE_TOL = 1e-9
#: forced branches below this probability are rejected
IMPOSSIBLE_TOL = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def canonical_angle(theta: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


# ---------------------------------------------------------------------------
# gates
# ---------------------------------------------------------------------------

_FIXED = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}
_ROTATIONS = ("RX", "RY", "RZ")


@dataclass(frozen=True)
class Gate:
    """One of I, X, Z, H, RX, RY, RZ, CZ.

    Rotation angles are canonicalised to ``[0, 2*pi)`` on construction.  Note
    that this can flip the global sign of a rotation (``R(a + 2*pi) = -R(a)``);
    every comparison in the package is phase-invariant or uses canonical angles
    on both sides.
    """

    kind: str
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in _FIXED and self.kind not in _ROTATIONS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in _ROTATIONS:
            object.__setattr__(self, "angle", canonical_angle(self.angle))
        elif self.angle != 0.0:
            raise ValueError(f"gate {self.kind} takes no angle")

    @property
    def num_qubits(self) -> int:
        return 2 if self.kind == "CZ" else 1

    @property
    def matrix(self) -> np.ndarray:
        if self.kind in _FIXED:
            return _FIXED[self.kind].copy()
        c = math.cos(self.angle / 2)
        s = math.sin(self.angle / 2)
        if self.kind == "RX":
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if self.kind == "RY":
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array(
            [[complex(c, -s), 0], [0, complex(c, s)]], dtype=complex
        )

    def __repr__(self):
        if self.kind in _ROTATIONS:
            return f"{self.kind}({self.angle:.6g})"
        return self.kind


I = Gate("I")
X = Gate("X")
Z = Gate("Z")
H = Gate("H")
CZ = Gate("CZ")


def RX(theta: float) -> Gate:
    return Gate("RX", theta)


def RY(theta: float) -> Gate:
    return Gate("RY", theta)


def RZ(theta: float) -> Gate:
    return Gate("RZ", theta)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass
class Statevector:
    """Amplitudes of an ``num_qubits``-qubit pure state."""

    num_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.amps.shape[0] != 1 << self.num_qubits:
            raise DimensionError(
                f"{self.amps.shape[0]} amplitudes do not describe {self.num_qubits} qubits"
            )

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex], normalize: bool = False) -> "Statevector":
        vec = np.asarray(amps, dtype=complex).reshape(-1)
        n = vec.shape[0].bit_length() - 1
        if n < 1 or vec.shape[0] != 1 << n:
            raise DimensionError(f"length {vec.shape[0]} is not a power of two >= 2")
        if normalize:
            nrm = np.linalg.norm(vec)
            if nrm == 0:
                raise ValueError("cannot normalise the zero vector")
            vec = vec / nrm
        return cls(n, vec)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]], normalize: bool = False) -> "Statevector":
        """Inverse of :meth:`to_pairs`."""
        return cls.from_amplitudes([complex(re, im) for re, im in pairs], normalize)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def to_pairs(self) -> list[list[float]]:
        """Amplitudes as ``[[re, im], ...]`` for JSON output."""
        return [[float(a.real), float(a.imag)] for a in self.amps]

    def copy(self) -> "Statevector":
        return Statevector(self.num_qubits, self.amps.copy())

    def __len__(self):
        return self.amps.shape[0]


def new_state(num_qubits: int) -> Statevector:
    """Return ``|0...0>`` on ``num_qubits`` qubits."""
    if num_qubits < 1:
        raise InvalidArity("a state needs at least one qubit")
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return Statevector(num_qubits, amps)


def qubit(alpha: complex, beta: complex) -> Statevector:
    """Single-qubit state ``alpha|0> + beta|1>`` (must already be normalised)."""
    return Statevector(1, np.array([alpha, beta], dtype=complex))


def ket(label: str) -> Statevector:
    """Product state from a label such as ``"0+1"``; character ``k`` is qubit ``k``."""
    table = {
        "0": (1.0, 0.0),
        "1": (0.0, 1.0),
        "+": (_SQRT_HALF, _SQRT_HALF),
        "-": (_SQRT_HALF, -_SQRT_HALF),
    }
    try:
        return tensor(*(qubit(*table[ch]) for ch in label))
    except KeyError as exc:
        raise ValueError(f"unknown ket label {label!r}") from exc


def tensor(*states: Statevector) -> Statevector:
    """Tensor product; the first argument occupies the lowest qubit indices."""
    if not states:
        raise InvalidArity("tensor() needs at least one state")
    amps = np.array([1.0 + 0j])
    n = 0
    for st in states:
        amps = np.kron(st.amps, amps)
        n += st.num_qubits
    return Statevector(n, amps)


# ---------------------------------------------------------------------------
# gate application
# ---------------------------------------------------------------------------


def _check_target(state: Statevector, target: int) -> None:
    if not 0 <= target < state.num_qubits:
        raise IndexError(f"qubit {target} out of range for {state.num_qubits} qubits")


def _apply_matrix(amps: np.ndarray, mat: np.ndarray, target: int) -> np.ndarray:
    view = amps.reshape(-1, 2, 1 << target)
    return np.einsum("ij,ajb->aib", mat, view).reshape(-1)


def apply_1q(state: Statevector, gate: Gate, target: int) -> Statevector:
    """Apply a single-qubit gate to ``target``."""
    if gate.num_qubits != 1:
        raise ArityError(f"{gate!r} is not a single-qubit gate")
    _check_target(state, target)
    return Statevector(state.num_qubits, _apply_matrix(state.amps, gate.matrix, target))


def apply_matrix(state: Statevector, mat: np.ndarray, target: int) -> Statevector:
    """Apply an arbitrary 2x2 matrix (caller is responsible for unitarity)."""
    _check_target(state, target)
    return Statevector(state.num_qubits, _apply_matrix(state.amps, np.asarray(mat, complex), target))


def _cz_mask(num_qubits: int, a: int, b: int) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    return ((idx >> a) & 1).astype(bool) & ((idx >> b) & 1).astype(bool)


def apply_cz(state: Statevector, a: int, b: int) -> Statevector:
    """Controlled-phase between qubits ``a`` and ``b`` (symmetric)."""
    _check_target(state, a)
    _check_target(state, b)
    if a == b:
        raise IndexError("CZ needs two distinct qubits")
    amps = state.amps.copy()
    amps[_cz_mask(state.num_qubits, a, b)] *= -1
    return Statevector(state.num_qubits, amps)


def apply_cswap(state: Statevector, control: int, a: int, b: int) -> Statevector:
    """Swap qubits ``a`` and ``b`` on the branch where ``control`` is 1."""
    for t in (control, a, b):
        _check_target(state, t)
    if len({control, a, b}) != 3:
        raise IndexError("controlled-SWAP needs three distinct qubits")
    idx = np.arange(1 << state.num_qubits)
    ctl = (idx >> control) & 1
    ba = (idx >> a) & 1
    bb = (idx >> b) & 1
    src = np.where((ctl == 1) & (ba != bb), idx ^ ((1 << a) | (1 << b)), idx)
    return Statevector(state.num_qubits, state.amps[src])


def apply_gate(state: Statevector, gate: Gate, *targets: int) -> Statevector:
    """Dispatch on gate arity."""
    if gate.num_qubits == 2:
        if len(targets) != 2:
            raise ArityError("CZ needs two targets")
        return apply_cz(state, *targets)
    if len(targets) != 1:
        raise ArityError(f"{gate!r} needs one target")
    return apply_1q(state, gate, targets[0])


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------


class Basis(Enum):
    Z = "Z"
    X = "X"


@dataclass(frozen=True)
class Sample:
    """Draw the outcome from the Born distribution.

    ``rng`` may be an integer seed, ``None`` (fresh entropy) or an existing
    :class:`numpy.random.Generator`, which is then advanced in place.
    """

    rng: Union[int, np.random.Generator, None] = None

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(self.rng)


@dataclass(frozen=True)
class Forced:
    """Post-select a fixed outcome."""

    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise ValueError("forced outcome must be 0 or 1")


OutcomePolicy = Union[Sample, Forced]


def _branch_probs(amps: np.ndarray, target: int) -> tuple[float, float]:
    view = amps.reshape(-1, 2, 1 << target)
    p0 = float(np.sum(np.abs(view[:, 0, :]) ** 2))
    p1 = float(np.sum(np.abs(view[:, 1, :]) ** 2))
    return p0, p1


def outcome_probability(state: Statevector, target: int, basis: Basis, bit: int) -> float:
    """Born probability of ``bit`` when measuring ``target`` in ``basis``."""
    _check_target(state, target)
    amps = state.amps
    if basis is Basis.X:
        amps = _apply_matrix(amps, _FIXED["H"], target)
    return _branch_probs(amps, target)[bit]


def measure(
    state: Statevector, target: int, basis: Basis, policy: OutcomePolicy
) -> tuple[int, Statevector]:
    """Projectively measure one qubit.

    In the X basis outcome 0 is ``|+>`` and outcome 1 is ``|->``.  The measured
    qubit stays in the register, collapsed onto the outcome state.
    """
    _check_target(state, target)
    amps = state.amps
    if basis is Basis.X:
        amps = _apply_matrix(amps, _FIXED["H"], target)
    p = _branch_probs(amps, target)

    if isinstance(policy, Forced):
        m = policy.bit
        if p[m] < IMPOSSIBLE_TOL:
            raise ImpossibleOutcome(f"outcome {m} on qubit {target} has probability {p[m]:.3g}")
    else:
        m = int(policy.generator().random() * (p[0] + p[1]) >= p[0])

    view = amps.reshape(-1, 2, 1 << target)
    out = np.zeros_like(view)
    out[:, m, :] = view[:, m, :] / math.sqrt(p[m])
    out = out.reshape(-1)
    if basis is Basis.X:
        out = _apply_matrix(out, _FIXED["H"], target)
    return m, Statevector(state.num_qubits, out)


def drop_qubit(state: Statevector, target: int, onto: Statevector) -> Statevector:
    """Remove a qubit that is known to be in the product state ``onto``.

    The remaining amplitudes are obtained by contracting with ``<onto|``; no
    phase is introduced.  Raises ``ValueError`` if the qubit is entangled or
    in a different state.
    """
    _check_target(state, target)
    if state.num_qubits == 1:
        raise InvalidArity("cannot drop the only qubit")
    if onto.num_qubits != 1:
        raise DimensionError("onto must be a single-qubit state")
    view = state.amps.reshape(-1, 2, 1 << target)
    rest = np.einsum("i,aib->ab", onto.amps.conj(), view).reshape(-1)
    nrm = float(np.linalg.norm(rest))
    if abs(nrm - 1.0) > STATE_TOL:
        raise ValueError(f"qubit {target} is not in the given product state (overlap {nrm:.3g})")
    return Statevector(state.num_qubits - 1, rest)


def outcome_ket(basis: Basis, bit: int) -> Statevector:
    """The post-measurement single-qubit state for ``bit`` in ``basis``."""
    return ket(("01" if basis is Basis.Z else "+-")[bit])


def fidelity_up_to_phase(a: Statevector, b: Statevector) -> float:
    """``|<a|b>|**2``, clipped to ``[0, 1]``."""
    if a.num_qubits != b.num_qubits:
        raise DimensionError(f"cannot compare {a.num_qubits}- and {b.num_qubits}-qubit states")
    f = abs(np.vdot(a.amps, b.amps)) ** 2
    return float(min(1.0, max(0.0, f)))
