import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsrecon import attacks, cluster, example, shares
from qsrecon import statevec as sv
from qsrecon.errors import DimensionError

from conftest import PAULI_X, rot

PI = math.pi


def helstrom_oracle_sq(a, b):
    # pure states: TD^2 = 1 - |<a|b>|^2 (squared to avoid sqrt cancellation near F = 1)
    f = abs(np.vdot(cluster.mask_state(a).amps, cluster.mask_state(b).amps)) ** 2
    return 1 - f


def test_strip_example():
    st1 = attacks.strip_mask(PI / 6, PI / 3, 1)
    assert sv.fidelity_up_to_phase(st1, cluster.mask_state(PI / 3)) == pytest.approx(1.0, abs=1e-12)
    assert sv.fidelity_up_to_phase(attacks.strip_mask(1.2, 0.0, 0), sv.ket("+")) == pytest.approx(1.0, abs=1e-12)


def test_combiner_fake_attack_report():
    stripped, rep = attacks.combiner_fake_attack(example.CONFIG, [1, 0], masks=list(example.MASKS), seed=3)
    assert len(stripped) == 2
    for st_, k in zip(stripped, example.CONFIG.shares):
        phi = shares.encode_angle(1, k, 3)
        assert sv.fidelity_up_to_phase(st_, cluster.mask_state(phi)) == pytest.approx(1.0, abs=1e-12)
    assert rep.z_probabilities == pytest.approx([0.5, 0.5], abs=1e-12)
    assert all(abs(f - 0.5) <= 0.02 for f in rep.z_frequencies)
    for td, p in zip(rep.trace_distances, rep.guess_probabilities):
        assert 0 <= td <= 1 and p == pytest.approx((1 + td) / 2)
    with pytest.raises(DimensionError):
        attacks.combiner_fake_attack(example.CONFIG, [1])


@given(st.floats(0, 2 * PI), st.floats(0, 2 * PI), st.integers(0, 1))
def test_stripped_identity(omega, phi, m):
    st_ = attacks.strip_mask(omega, phi, m)
    assert sv.fidelity_up_to_phase(st_, cluster.mask_state(phi)) == pytest.approx(1.0, abs=1e-12)
    assert sv.outcome_probability(st_, 0, sv.Basis.Z, 0) == pytest.approx(0.5, abs=1e-12)


def test_helstrom_examples():
    td, p = attacks.helstrom_distinguishability(PI / 3, 2 * PI / 3)
    assert td == pytest.approx(0.5, abs=1e-12) and p == pytest.approx(0.75, abs=1e-12)
    assert attacks.helstrom_distinguishability(1.0, 1.0) == pytest.approx((0.0, 0.5), abs=1e-12)
    assert attacks.helstrom_distinguishability(0.0, PI) == pytest.approx((1.0, 1.0), abs=1e-12)


@given(st.floats(0, 2 * PI), st.floats(0, 2 * PI))
def test_helstrom_matches_pure_state_formula(a, b):
    td, p = attacks.helstrom_distinguishability(a, b)
    assert td == pytest.approx(abs(math.sin((a - b) / 2)), abs=1e-9)
    assert td**2 == pytest.approx(helstrom_oracle_sq(a, b), abs=1e-12)
    assert p == pytest.approx((1 + td) / 2)


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_guess_below_one_unless_antipodal(q):
    for s in range(1, q):
        for k in range(q):
            for k2 in range(k + 1, q):
                a, b = shares.encode_angle(s, k, q), shares.encode_angle(s, k2, q)
                _, p = attacks.helstrom_distinguishability(a, b)
                antipodal = abs(abs(a - b) - PI) < 1e-12
                assert antipodal or p < 1 - 1e-9
    # odd q never produces an angle difference of exactly pi
    assert attacks.max_pairwise_guess(q, 1) < 1


def test_collusion_one_examples():
    cfg = shares.split_secret(0, 2, 3, shares=[2])  # k_C = 1 -> phi_C = 2pi/3
    rep = attacks.collusion_one(cfg, sv.ket("0"))
    assert rep.fidelity == pytest.approx(math.cos(PI / 3) ** 2, abs=1e-12)
    zero = shares.split_secret(1, 2, 5, shares=[4])
    assert attacks.collusion_one(zero, sv.ket("0")).fidelity == pytest.approx(1.0, abs=1e-12)
    rep = attacks.collusion_one(example.CONFIG, example.SECRET)
    phi_c = shares.encode_angle(1, example.CONFIG.k_C, 3)
    want = abs(np.vdot(example.SECRET.amps, rot(PAULI_X, -phi_c) @ example.SECRET.amps)) ** 2
    assert rep.fidelity == pytest.approx(want, abs=1e-12) and rep.fidelity < 1


def test_collusion_one_x_eigenstate_exception():
    # |+> is invariant under every RX, so colluders hold it exactly whatever phi_C is
    rep = attacks.collusion_one(example.CONFIG, sv.ket("+"))
    assert rep.fidelity == pytest.approx(1.0, abs=1e-12)


def test_collusion_two_equals_single_target_attack():
    rep2 = attacks.collusion_two(example.CONFIG, 1, masks=list(example.MASKS), seed=4)
    _, rep = attacks.combiner_fake_attack(example.CONFIG, [1, 1], masks=list(example.MASKS), seed=4)
    assert rep2.trace_distances == [rep.trace_distances[0]]
    assert rep2.z_probabilities == [rep.z_probabilities[0]]
    assert rep2.z_frequencies == [rep.z_frequencies[0]]
    assert rep2.identity_fidelities == [rep.identity_fidelities[0]]
    assert rep2.extra["max_pairwise_guess"] == pytest.approx((1 + math.sin(PI / 3)) / 2, abs=1e-12)
    with pytest.raises(IndexError):
        attacks.collusion_two(example.CONFIG, 3)
    with pytest.raises(IndexError):
        attacks.collusion_two(example.CONFIG, 0)


def test_external_attack():
    rep = attacks.run_scenario(attacks.ExternalInterceptResend(64, 1000), example.CONFIG, example.SECRET, seed=2)
    assert rep.detection["abort_rate"] == 1.0
    assert rep.detection["abort_probability_lower_bound"] > 1 - 1e-7


def test_reports_serialize():
    import json

    for sc in attacks.default_scenarios(example.CONFIG):
        if isinstance(sc, attacks.ExternalInterceptResend):
            sc = attacks.ExternalInterceptResend(8, 10)
        json.dumps(attacks.run_scenario(sc, example.CONFIG, example.SECRET).to_dict())
