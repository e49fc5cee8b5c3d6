import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsrecon import statevec as sv
from qsrecon.errors import ArityError, DimensionError, ImpossibleOutcome, InvalidArity
from qsrecon.statevec import Basis, Forced, Sample

from conftest import HAD, PAULI_X, PAULI_Y, PAULI_Z, cz_matrix, embed, rot

angles = st.floats(-20.0, 20.0, allow_nan=False)
SQ3 = math.sqrt(3)


def test_new_state():
    assert np.array_equal(sv.new_state(1).amps, [1, 0])
    assert np.array_equal(sv.new_state(2).amps, [1, 0, 0, 0])
    with pytest.raises(InvalidArity):
        sv.new_state(0)


def test_hadamard_on_zero():
    out = sv.apply_1q(sv.ket("0"), sv.H, 0)
    assert np.allclose(out.amps, [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_dealer_rotation_example():
    psi = sv.qubit(0.5, SQ3 / 2)
    out = sv.apply_1q(psi, sv.RX(2 * math.pi / 3), 0)
    assert np.allclose(out.amps, [(1 - 3j) / 4, (SQ3 - SQ3 * 1j) / 4], atol=1e-12)


def test_rz_on_plus():
    out = sv.apply_1q(sv.ket("+"), sv.RZ(math.pi / 6), 0)
    want = np.array([np.exp(-1j * math.pi / 12), np.exp(1j * math.pi / 12)]) / math.sqrt(2)
    assert np.allclose(out.amps, want, atol=1e-12)


def test_apply_1q_errors():
    with pytest.raises(IndexError):
        sv.apply_1q(sv.ket("0"), sv.X, 1)
    with pytest.raises(ArityError):
        sv.apply_1q(sv.ket("00"), sv.CZ, 0)


def test_cz_three_path_matches_closed_form():
    state = sv.tensor(sv.ket("+"), sv.ket("+"), sv.ket("+"))
    state = sv.apply_cz(sv.apply_cz(state, 0, 1), 1, 2)
    p, m = sv.ket("+"), sv.ket("-")
    want = (sv.tensor(p, sv.ket("0"), p).amps + sv.tensor(m, sv.ket("1"), m).amps) / math.sqrt(2)
    assert np.allclose(state.amps, want, atol=1e-12)


def test_cz_basics():
    assert np.array_equal(sv.apply_cz(sv.ket("00"), 0, 1).amps, sv.ket("00").amps)
    assert np.array_equal(sv.apply_cz(sv.ket("11"), 0, 1).amps, -sv.ket("11").amps)
    with pytest.raises(IndexError):
        sv.apply_cz(sv.ket("00"), 1, 1)


def test_measure_examples():
    m, out = sv.measure(sv.ket("+"), 0, Basis.X, Sample(99))
    assert m == 0 and np.allclose(out.amps, sv.ket("+").amps)
    with pytest.raises(ImpossibleOutcome):
        sv.measure(sv.ket("0"), 0, Basis.Z, Forced(1))


def test_fidelity_examples():
    psi = sv.qubit(0.5, SQ3 / 2)
    flipped = sv.Statevector(1, np.exp(-1j * math.pi) * psi.amps)
    assert sv.fidelity_up_to_phase(psi, flipped) == pytest.approx(1.0, abs=1e-12)
    assert sv.fidelity_up_to_phase(sv.ket("0"), sv.ket("1")) == 0.0
    other = rot(PAULI_X, -math.pi / 3) @ np.array([1, 0])
    assert sv.fidelity_up_to_phase(sv.ket("0"), sv.Statevector(1, other)) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(DimensionError):
        sv.fidelity_up_to_phase(sv.ket("0"), sv.ket("00"))


def test_ket_ordering_is_lsb_first():
    # qubit 0 is the first character and the least significant bit
    assert np.argmax(np.abs(sv.ket("10").amps)) == 1
    assert np.argmax(np.abs(sv.ket("01").amps)) == 2


@given(angles)
def test_rotations_match_matrix_exponential(a):
    for gate, axis in ((sv.RX(a), PAULI_X), (sv.RY(a), PAULI_Y), (sv.RZ(a), PAULI_Z)):
        want = rot(axis, a)
        got = gate.matrix
        # canonicalising to [0, 2pi) may flip the sign
        assert np.allclose(got, want, atol=1e-12) or np.allclose(got, -want, atol=1e-12)


@given(angles)
def test_gates_unitary(a):
    for gate in (sv.I, sv.X, sv.Z, sv.H, sv.CZ, sv.RX(a), sv.RY(a), sv.RZ(a)):
        u = gate.matrix
        assert np.max(np.abs(u.conj().T @ u - np.eye(len(u)))) < 1e-12


@given(angles)
def test_h_rz_h_is_rx(a):
    assert np.allclose(sv.H.matrix @ sv.RZ(a).matrix @ sv.H.matrix, sv.RX(a).matrix, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_random_circuits_preserve_norm_and_match_dense(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    state = sv.Statevector.from_amplitudes(amps, normalize=True)
    dense = state.amps.copy()
    for _ in range(20):
        kind = rng.integers(0, 5)
        t = int(rng.integers(0, n))
        if kind == 4 and n > 1:
            u = int((t + 1 + rng.integers(0, n - 1)) % n)
            state = sv.apply_cz(state, t, u)
            dense = cz_matrix(t, u, n) @ dense
            continue
        a = float(rng.uniform(-7, 7))
        gate, op = [(sv.H, HAD), (sv.RX(a), rot(PAULI_X, a)), (sv.RY(a), rot(PAULI_Y, a)), (sv.RZ(a), rot(PAULI_Z, a)), (sv.X, PAULI_X)][kind]
        state = sv.apply_1q(state, gate, t)
        dense = embed(op, t, n) @ dense
    assert abs(state.norm() ** 2 - 1) < 1e-10
    assert abs(abs(np.vdot(state.amps, dense)) - 1) < 1e-9


@given(angles, st.complex_numbers(min_magnitude=0.5, max_magnitude=2))
def test_fidelity_phase_invariant(a, c):
    psi = sv.apply_1q(sv.ket("+"), sv.RY(a), 0)
    c = c / abs(c)
    assert sv.fidelity_up_to_phase(psi, sv.Statevector(1, c * psi.amps)) == pytest.approx(1.0, abs=1e-12)


def test_born_frequencies_x_basis():
    theta = 1.1
    state = sv.apply_1q(sv.ket("+"), sv.RZ(theta), 0)
    p0 = math.cos(theta / 2) ** 2  # oracle: |<+|+_theta>|^2
    assert sv.outcome_probability(state, 0, Basis.X, 0) == pytest.approx(p0, abs=1e-12)
    gen = np.random.default_rng(5)
    shots = 10_000
    zeros = sum(sv.measure(state, 0, Basis.X, Sample(gen))[0] == 0 for _ in range(shots))
    sigma = math.sqrt(shots * p0 * (1 - p0))
    assert abs(zeros - shots * p0) < 3 * sigma


def test_measure_leaves_qubit_in_outcome_state():
    state = sv.apply_cz(sv.tensor(sv.ket("+"), sv.ket("+")), 0, 1)
    m, out = sv.measure(state, 0, Basis.X, Forced(1))
    rest = sv.drop_qubit(out, 0, sv.ket("-"))
    assert rest.num_qubits == 1
    with pytest.raises(ValueError):
        sv.drop_qubit(state, 0, sv.ket("-"))


def test_cswap():
    out = sv.apply_cswap(sv.ket("110"), 0, 1, 2)
    assert np.array_equal(out.amps, sv.ket("101").amps)
    assert np.array_equal(sv.apply_cswap(sv.ket("010"), 0, 1, 2).amps, sv.ket("010").amps)


def test_canonical_angle():
    assert sv.canonical_angle(-0.5) == pytest.approx(2 * math.pi - 0.5)
    assert sv.canonical_angle(2 * math.pi) == 0.0
    assert sv.RX(7.0).angle == pytest.approx(7.0 - 2 * math.pi)
