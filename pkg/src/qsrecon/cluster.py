"""Graph states, stabilizer checks and the two-qubit (lazy) MBQC step.

Measurement in the rotated basis ``{|+_t>, |-_t>}`` with ``|+-_t> = RZ(t)|+->``
is realised as ``RZ(-t)`` followed by an X-basis measurement.  With that
convention one lazy step maps an input ``|v>`` to

    RZ(w) X^m H RZ(-t) |v>

on the fresh qubit (up to global phase), which is the sign that makes the
eager and lazy pipelines agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

import numpy as np

from . import statevec as sv
from .errors import DimensionError
from .statevec import Basis, Forced, OutcomePolicy, Statevector


@dataclass(frozen=True)
class ClusterGraph:
    """Undirected simple graph; vertex ``k`` of ``vertices`` maps to qubit ``k``."""

    vertices: tuple
    edges: tuple = field(default=())

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex identifiers")
        seen = set()
        edges = []
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in verts or b not in verts:
                raise ValueError(f"edge ({a!r}, {b!r}) uses an unknown vertex")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate edge ({a!r}, {b!r})")
            seen.add(key)
            edges.append((a, b))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def path(cls, n: int, labels: Optional[Sequence[Hashable]] = None) -> "ClusterGraph":
        """The linear chain ``0 - 1 - ... - (n-1)``."""
        verts = tuple(labels) if labels is not None else tuple(range(n))
        if len(verts) != n:
            raise DimensionError("label count does not match n")
        return cls(verts, tuple(zip(verts[:-1], verts[1:])))

    def index(self, v: Hashable) -> int:
        return self.vertices.index(v)

    def neighbors(self, a: Hashable) -> list:
        out = []
        for u, v in self.edges:
            if u == a:
                out.append(v)
            elif v == a:
                out.append(u)
        return out


def build_cluster(graph: ClusterGraph, node_states: Sequence[Statevector]) -> Statevector:
    """Tensor the node states in vertex order, then apply one CZ per edge."""
    if len(node_states) != len(graph.vertices):
        raise DimensionError(
            f"{len(node_states)} node states for {len(graph.vertices)} vertices"
        )
    for st in node_states:
        if st.num_qubits != 1:
            raise DimensionError("node states must be single-qubit")
    state = sv.tensor(*node_states)
    for a, b in graph.edges:
        state = sv.apply_cz(state, graph.index(a), graph.index(b))
    return state


def canonical_cluster(graph: ClusterGraph) -> Statevector:
    return build_cluster(graph, [sv.ket("+")] * len(graph.vertices))


@dataclass(frozen=True)
class StabilizerOp:
    """``K_a = X_a  prod_{b in N(a)} Z_b``."""

    graph: ClusterGraph
    anchor: Hashable

    def paulis(self) -> list[str]:
        ops = ["I"] * len(self.graph.vertices)
        ops[self.graph.index(self.anchor)] = "X"
        for b in self.graph.neighbors(self.anchor):
            ops[self.graph.index(b)] = "Z"
        return ops

    def label(self) -> str:
        return "".join(f"{p}{k}" for k, p in enumerate(self.paulis()))

    def apply(self, state: Statevector) -> Statevector:
        for k, p in enumerate(self.paulis()):
            if p != "I":
                state = sv.apply_1q(state, sv.Gate(p), k)
        return state

    def matrix(self) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        for p in self.paulis():
            out = np.kron(sv.Gate(p).matrix, out)
        return out


def verify_stabilizers(graph: ClusterGraph, state: Statevector) -> dict:
    """Residual ``||K_a|C> - |C>||`` for every anchor ``a``."""
    return {
        a: float(np.linalg.norm(StabilizerOp(graph, a).apply(state).amps - state.amps))
        for a in graph.vertices
    }


def mask_state(omega: float) -> Statevector:
    """``|+_w> = RZ(w)|+>``."""
    return sv.apply_1q(sv.ket("+"), sv.RZ(omega), 0)


def lazy_step(
    psi: Statevector, omega: float, theta: float, policy: OutcomePolicy
) -> tuple[int, Statevector]:
    """Entangle ``psi`` with ``|+_omega>``, measure ``psi`` at angle ``theta``.

    Returns the outcome and the (dropped-down) single-qubit output.
    """
    if psi.num_qubits != 1:
        raise DimensionError("lazy_step works on a single-qubit input")
    pair = sv.apply_cz(sv.tensor(psi, mask_state(omega)), 0, 1)
    pair = sv.apply_1q(pair, sv.RZ(-theta), 0)
    m, pair = sv.measure(pair, 0, Basis.X, policy)
    return m, sv.drop_qubit(pair, 0, sv.outcome_ket(Basis.X, m))


def lazy_step_formula(psi: Statevector, omega: float, theta: float, m: int) -> Statevector:
    """Closed form ``RZ(w) X^m H RZ(-t) |psi>`` (unnormalised phase)."""
    out = sv.apply_1q(psi, sv.RZ(-theta), 0)
    out = sv.apply_1q(out, sv.H, 0)
    if m:
        out = sv.apply_1q(out, sv.X, 0)
    return sv.apply_1q(out, sv.RZ(omega), 0)


# ---------------------------------------------------------------------------
# eager versus lazy
# ---------------------------------------------------------------------------


def correction_matrix(m: int, theta: Optional[float]) -> np.ndarray:
    """The per-round correction ``RX(theta) H X^m`` (just ``X^m`` if theta is None)."""
    mat = sv.X.matrix if m else np.eye(2, dtype=complex)
    if theta is not None:
        mat = sv.RX(theta).matrix @ sv.H.matrix @ mat
    return mat


def apply_deferred(state: Statevector, mat: np.ndarray, target: int, partner: Optional[int]) -> Statevector:
    """Apply ``mat`` to ``target`` as if the CZ to ``partner`` had not happened yet.

    Realised as ``CZ . U . CZ``.  When ``partner`` is None (the last qubit of
    the chain) this is plain application.
    """
    if partner is None:
        return sv.apply_matrix(state, mat, target)
    state = sv.apply_cz(state, target, partner)
    state = sv.apply_matrix(state, mat, target)
    return sv.apply_cz(state, target, partner)


@dataclass
class PipelineComparison:
    fidelity: float
    lazy_probability: float
    eager_probability: float
    lazy_output: Statevector
    eager_output: Statevector

    def equivalent(self, fid_tol: float = sv.STATE_TOL, prob_tol: float = 1e-12) -> bool:
        return (
            abs(1.0 - self.fidelity) <= fid_tol
            and abs(self.lazy_probability - self.eager_probability) <= prob_tol
        )


def _check_lengths(masks, outcomes, corrections, measure_angles):
    k = len(masks)
    if len(outcomes) != k:
        raise DimensionError(f"{len(outcomes)} outcomes for {k} measured nodes")
    if corrections is not None and len(corrections) != k:
        raise DimensionError("one correction angle per round is required")
    if measure_angles is not None and len(measure_angles) != k:
        raise DimensionError("one measurement angle per round is required")


def lazy_pipeline(psi, masks, outcomes, corrections=None, measure_angles=None):
    """Repeated :func:`lazy_step`, each followed by the round's correction."""
    _check_lengths(masks, outcomes, corrections, measure_angles)
    prob = 1.0
    state = psi
    for j, (omega, m) in enumerate(zip(masks, outcomes)):
        alpha = 0.0 if measure_angles is None else measure_angles[j]
        probe = sv.apply_1q(
            sv.apply_cz(sv.tensor(state, mask_state(omega)), 0, 1), sv.RZ(-alpha), 0
        )
        prob *= sv.outcome_probability(probe, 0, Basis.X, m)
        _, state = lazy_step(state, omega, alpha, Forced(m))
        theta = None if corrections is None else corrections[j]
        state = sv.apply_matrix(state, correction_matrix(m, theta), 0)
    return state, prob


def eager_pipeline(psi, masks, outcomes, corrections=None, measure_angles=None):
    """Build the whole chain first, then measure left to right.

    Corrections on a qubit whose right-hand CZ is already in place are applied
    in the deferred frame (see :func:`apply_deferred`).
    """
    _check_lengths(masks, outcomes, corrections, measure_angles)
    n = len(masks) + 1
    state = build_cluster(ClusterGraph.path(n), [psi] + [mask_state(w) for w in masks])
    prob = 1.0
    for j, m in enumerate(outcomes):
        if measure_angles is not None:
            state = sv.apply_1q(state, sv.RZ(-measure_angles[j]), j)
        prob *= sv.outcome_probability(state, j, Basis.X, m)
        _, state = sv.measure(state, j, Basis.X, Forced(m))
        theta = None if corrections is None else corrections[j]
        partner = j + 2 if j + 2 < n else None
        state = apply_deferred(state, correction_matrix(m, theta), j + 1, partner)
    for m in outcomes:
        state = sv.drop_qubit(state, 0, sv.outcome_ket(Basis.X, m))
    return state, prob


def compare_pipelines(psi, masks, outcomes, corrections=None, measure_angles=None) -> PipelineComparison:
    lazy_out, lazy_p = lazy_pipeline(psi, masks, outcomes, corrections, measure_angles)
    eager_out, eager_p = eager_pipeline(psi, masks, outcomes, corrections, measure_angles)
    return PipelineComparison(
        fidelity=sv.fidelity_up_to_phase(lazy_out, eager_out),
        lazy_probability=lazy_p,
        eager_probability=eager_p,
        lazy_output=lazy_out,
        eager_output=eager_out,
    )


def eager_equals_lazy(psi, masks, outcomes, corrections=None, measure_angles=None) -> bool:
    """True iff the eager and lazy pipelines agree on output and branch probability.

    ``psi`` is the data input, ``masks`` the angles of the remaining chain nodes
    and ``outcomes`` one forced bit per measured node.  ``corrections`` are the
    per-round ``RX(theta) H`` angles applied after the ``X^m`` compensation;
    ``measure_angles`` rotate the measurement basis.
    """
    return compare_pipelines(psi, masks, outcomes, corrections, measure_angles).equivalent()


def random_graph(num_vertices: int, rng: np.random.Generator, p: float = 0.5) -> ClusterGraph:
    """Erdos-Renyi graph on ``range(num_vertices)``."""
    edges = [
        (a, b)
        for a in range(num_vertices)
        for b in range(a + 1, num_vertices)
        if rng.random() < p
    ]
    return ClusterGraph(tuple(range(num_vertices)), tuple(edges))

