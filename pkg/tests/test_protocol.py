import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsrecon import example, protocol, shares
from qsrecon import statevec as sv
from qsrecon.errors import InvalidArity, ProtocolViolation
from qsrecon.protocol import PublicBoard

from conftest import PAULI_X, rot

SQ3 = math.sqrt(3)
PI = math.pi


def test_dealer_encrypt_examples():
    out = protocol.dealer_encrypt(example.SECRET, 2 * PI / 3)
    assert np.allclose(out.amps, [(1 - 3j) / 4, (SQ3 - SQ3 * 1j) / 4], atol=1e-12)
    assert np.allclose(protocol.dealer_encrypt(example.SECRET, 0.0).amps, example.SECRET.amps)
    assert np.allclose(protocol.dealer_encrypt(sv.ket("0"), PI).amps, rot(PAULI_X, PI) @ [1, 0], atol=1e-12)


def test_shareholder_prepare_examples():
    want = np.array([np.exp(-1j * PI / 12), np.exp(1j * PI / 12)]) / math.sqrt(2)
    assert np.allclose(protocol.shareholder_prepare(PI / 6).amps, want, atol=1e-12)
    assert np.allclose(protocol.shareholder_prepare(0.0).amps, sv.ket("+").amps, atol=1e-12)
    assert np.allclose(protocol.shareholder_prepare(PI).amps, np.array([-1j, 1j]) / math.sqrt(2), atol=1e-12)


def test_shareholder_respond_examples():
    assert protocol.shareholder_respond(0, PI / 6, PI / 3) == pytest.approx(PI / 6)
    assert protocol.shareholder_respond(1, PI, 2 * PI / 3) == pytest.approx(5 * PI / 3)
    assert protocol.shareholder_respond(0, 0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        protocol.shareholder_respond(2, 0.0, 0.0)


def test_combiner_round_matches_worked_rounds():
    data = protocol.dealer_encrypt(example.SECRET, example.PHI_A)
    r1 = protocol.combiner_round(
        data, protocol.shareholder_prepare(PI / 6),
        lambda m: protocol.shareholder_respond(m, PI / 6, PI / 3), sv.Forced(0),
    )
    assert r1.m == 0 and r1.theta == pytest.approx(PI / 6)
    r2 = protocol.combiner_round(
        r1.state, protocol.shareholder_prepare(PI),
        lambda m: protocol.shareholder_respond(m, PI, 2 * PI / 3), sv.Forced(1),
    )
    want = np.array([(-SQ3 - SQ3 * 1j) / 4, (-3 - 1j) / 4])
    assert sv.fidelity_up_to_phase(r2.state, sv.Statevector(1, want)) == pytest.approx(1.0, abs=1e-12)


def test_combiner_round_identity():
    psi = sv.apply_1q(sv.ket("0"), sv.RY(0.7), 0)
    r = protocol.combiner_round(psi, protocol.shareholder_prepare(0.0), lambda m: 0.0, sv.Forced(0))
    assert sv.fidelity_up_to_phase(r.state, psi) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(0, 2 * PI), st.floats(0, 2 * PI), st.integers(0, 1))
def test_combiner_round_applies_hidden_angle(omega, phi, m):
    psi = sv.apply_1q(sv.apply_1q(sv.ket("0"), sv.RY(1.3), 0), sv.RZ(0.4), 0)
    r = protocol.combiner_round(
        psi, protocol.shareholder_prepare(omega),
        lambda b: protocol.shareholder_respond(b, omega, phi), sv.Forced(m),
    )
    want = rot(PAULI_X, phi) @ psi.amps
    assert sv.fidelity_up_to_phase(r.state, sv.Statevector(1, want)) == pytest.approx(1.0, abs=1e-9)


def test_worked_run_recovers_with_final_phase():
    t = protocol.run_protocol(example.CONFIG, example.SECRET, masks=list(example.MASKS), outcomes=[0, 1])
    assert t.verdict == "Recovered"
    assert t.fidelity == pytest.approx(1.0, abs=1e-9)
    assert t.outcomes() == [0, 1]


def test_trivial_run():
    cfg = shares.split_secret(0, 2, 3, shares=[0])
    t = protocol.run_protocol(cfg, sv.ket("0"), seed=1)
    assert t.ok and t.fidelity == pytest.approx(1.0, abs=1e-12)
    assert t.announcements[0].value == 1


def _direct_oracle(cfg, psi):
    total = shares.encode_angle(cfg.s, cfg.k_A, cfg.q) + sum(shares.encode_angle(cfg.s, k, cfg.q) for k in cfg.holder_shares())
    return rot(PAULI_X, total) @ psi.amps


def test_seeded_runs_against_direct_rotation():
    gen = np.random.default_rng(9)
    for run in range(100):
        q = int(gen.choice([3, 5, 7, 11]))
        cfg = shares.split_secret(int(gen.integers(0, q)), int(gen.integers(2, 11)), q, gen, s=int(gen.integers(1, q)))
        psi = protocol.random_secret(gen)
        t = protocol.run_protocol(cfg, psi, seed=run)
        assert t.ok
        assert sv.fidelity_up_to_phase(t.recovered, sv.Statevector(1, _direct_oracle(cfg, psi))) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", range(2, 7))
def test_all_outcome_patterns_agree(n):
    gen = np.random.default_rng(n)
    cfg = shares.split_secret(int(gen.integers(0, 7)), n, 7, gen, s=3)
    psi = protocol.random_secret(gen)
    masks = list(gen.uniform(0, 2 * PI, n - 1))
    recovered = [
        protocol.run_protocol(cfg, psi, seed=0, outcomes=list(bits), masks=masks).recovered
        for bits in itertools.product((0, 1), repeat=n - 1)
    ]
    for a, b in itertools.combinations(recovered, 2):
        assert sv.fidelity_up_to_phase(a, b) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_eager_engine_agrees(n):
    gen = np.random.default_rng(n + 100)
    cfg = shares.split_secret(1, n, 5, gen, s=2)
    psi = protocol.random_secret(gen)
    lazy = protocol.run_protocol(cfg, psi, seed=5)
    eager = protocol.run_protocol(cfg, psi, seed=5, engine="eager")
    assert eager.ok and len(eager.trace) == 2 + 2 * (n - 1) + 1
    assert sv.fidelity_up_to_phase(lazy.recovered, eager.recovered) == pytest.approx(1.0, abs=1e-9)
    assert lazy.thetas() == pytest.approx(eager.thetas())


def test_eager_limit():
    cfg = shares.split_secret(0, 13, 13, shares=[0] * 12)
    with pytest.raises(InvalidArity):
        protocol.run_protocol(cfg, sv.ket("0"), engine="eager", decoys=0)


def test_large_n_lazy():
    gen = np.random.default_rng(0)
    cfg = shares.split_secret(3, 300, 101, gen, s=7)
    t = protocol.run_protocol(cfg, sv.ket("+"), seed=2, decoys=1)
    assert t.ok and t.fidelity == pytest.approx(1.0, abs=1e-9)


def test_announcement_privacy():
    gen = np.random.default_rng(4)
    cfg = shares.split_secret(2, 5, 11, gen, s=4)
    masks = list(gen.uniform(0, 2 * PI, 4))
    t = protocol.run_protocol(cfg, sv.ket("0"), seed=3, masks=masks)
    kinds = [a.kind for a in t.announcements]
    assert kinds == ["s"] + ["m", "theta"] * 4
    values = [a.value for a in t.announcements]
    for omega, k, m, theta in zip(masks, cfg.shares, t.outcomes(), t.thetas()):
        phi = shares.encode_angle(cfg.s, k, cfg.q)
        assert not any(abs(v - omega) < 1e-12 for v in values[1:])
        expected = sv.canonical_angle((1 if m else -1) * omega + phi)
        assert theta == pytest.approx(expected, abs=1e-12)


def test_board_order_enforced():
    board = PublicBoard(2)
    board.post("s", "Alice", 1)
    with pytest.raises(ProtocolViolation):
        board.post("theta", "Bob1", 0.1, 1)
    board.post("m", "Charlie", 0, 1)
    with pytest.raises(ProtocolViolation):
        board.post("m", "Charlie", 0, 2)
    board.post("theta", "Bob1", 0.1, 1)
    board.post("m", "Charlie", 1, 2)
    board.post("theta", "Bob2", 0.2, 2)
    with pytest.raises(ProtocolViolation):
        board.post("m", "Charlie", 1, 3)


def test_channel_abort_verdict():
    t = protocol.run_protocol(example.CONFIG, example.SECRET, seed=1, decoys=64, eavesdropper="intercept-resend")
    assert t.verdict == "Aborted(ChannelError)"
    assert t.fidelity is None and t.recovered is None


def test_misbehaving_party_aborts():
    def evil(t, gen):
        return t

    class Rogue(protocol.Shareholder):
        def respond(self, board, round):
            board.post("m", self.name, 0, round)  # out of turn

    dealer = protocol.Dealer(2, 3)
    gen = np.random.default_rng(0)
    holders = [Rogue(1, 1, 3, gen), protocol.Shareholder(2, 2, 3, gen), protocol.Shareholder(3, 1, 3, gen)]
    out = protocol._session(
        dealer, holders, 3, example.SECRET, 1, np.random.SeedSequence(0),
        decoys=2, threshold=0.0, eavesdropper=evil, engine="lazy", echo={},
    )
    assert out.verdict == "Aborted(ProtocolViolation)"
    assert out.fidelity is None


def test_transcript_json_schema_and_determinism():
    a = protocol.run_protocol(example.CONFIG, example.SECRET, seed=11).to_json()
    b = protocol.run_protocol(example.CONFIG, example.SECRET, seed=11).to_json()
    assert a == b
    doc = json.loads(a)
    assert list(doc) == ["config", "announcements", "channel_reports", "counters", "recovered", "fidelity", "verdict"]
    assert list(doc["announcements"][0]) == ["seq", "kind", "party", "value"]
    assert len(doc["recovered"]) == 2 and len(doc["recovered"][0]) == 2
    assert {"n", "q", "seed", "decoys"} <= set(doc["config"])


def test_single_run_counters():
    t = protocol.run_protocol(example.CONFIG, example.SECRET, seed=0)
    # n + 1 = 4 encoding parties, 3 multiplications each; n - 1 = 2 additions
    assert t.counters == {"add": 2, "mul": 12}


def test_multi_secret_examples():
    runs = protocol.run_multi_secret(example.CONFIG, [example.SECRET, sv.ket("+")], [1, 2], seed=3)
    assert all(t.ok and t.fidelity == pytest.approx(1.0, abs=1e-9) for t in runs)
    assert [t.config["combiner"] for t in runs] == ["Bob1", "Bob2"]
    with pytest.raises(InvalidArity):
        protocol.run_multi_secret(example.CONFIG, [example.SECRET], [1])


def test_replay_inequality_across_randomizers():
    a = protocol.run_protocol(example.CONFIG.with_randomizer(1), example.SECRET, seed=8)
    b = protocol.run_protocol(example.CONFIG.with_randomizer(2), example.SECRET, seed=8)
    assert a.outcomes() == b.outcomes()
    assert a.thetas() != pytest.approx(b.thetas())


@given(st.integers(2, 10), st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_multi_secret_counters(n, w, seed):
    gen = np.random.default_rng(seed)
    cfg = shares.split_secret(int(gen.integers(0, 7)), n, 7, gen)
    runs = protocol.run_multi_secret(
        cfg, [protocol.random_secret(gen) for _ in range(w)],
        [int(s) for s in gen.integers(1, 7, w)], seed=seed, decoys=0,
    )
    per_party = {}
    for t in runs:
        for name, c in t.party_counters.items():
            per_party[name] = per_party.get(name, 0) + c["mul"]
    assert set(per_party.values()) == {2 + w}
    assert sum(t.counters["add"] for t in runs) == (n - 1) * w
