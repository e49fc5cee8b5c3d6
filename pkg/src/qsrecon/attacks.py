"""Executable adversary scenarios with quantitative leakage figures.

Leakage is measured by single-copy trace distance and the matching Helstrom
guessing probability ``(1 + TD) / 2``.  A guess probability above 1/2 means the
states are partially distinguishable from one copy; Z-basis measurement alone
reveals nothing (``P(0) = 1/2`` for every ``RZ(phi)|+>``).
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import channel as ch
from . import statevec as sv
from .cluster import mask_state
from .errors import DimensionError
from .protocol import dealer_encrypt, shareholder_respond
from .shares import ShareConfig, encode_angle
from .statevec import Basis, Statevector


@dataclass(frozen=True)
class ExternalInterceptResend:
    decoys: int = 64
    trials: int = 1000


@dataclass(frozen=True)
class CombinerFakeResults:
    fake_bits: tuple


@dataclass(frozen=True)
class CollusionI:
    pass


@dataclass(frozen=True)
class CollusionII:
    honest: int = 1


AttackScenario = Union[ExternalInterceptResend, CombinerFakeResults, CollusionI, CollusionII]


@dataclass
class LeakageReport:
    """Outcome of one attack simulation.

    ``trace_distances[j]`` is the largest single-copy trace distance between
    target ``j``'s state and the state any *other* share value would produce;
    ``guess_probabilities`` are the matching Helstrom probabilities.
    ``fidelity`` compares the adversary's best state with what it wants.
    """

    scenario: str
    targets: list = field(default_factory=list)
    trace_distances: list = field(default_factory=list)
    guess_probabilities: list = field(default_factory=list)
    fidelity: Optional[float] = None
    z_probabilities: list = field(default_factory=list)
    z_frequencies: list = field(default_factory=list)
    identity_fidelities: list = field(default_factory=list)
    detection: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def helstrom_distinguishability(phi: float, phi_prime: float) -> tuple[float, float]:
    """Trace distance and guess probability for ``|+_phi>`` versus ``|+_phi'>``.

    Computed from the eigenvalues of the density-matrix difference.
    """
    a = mask_state(phi).amps
    b = mask_state(phi_prime).amps
    diff = np.outer(a, a.conj()) - np.outer(b, b.conj())
    td = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    td = min(1.0, td)
    return td, 0.5 * (1.0 + td)


def max_pairwise_guess(q: int, s: int) -> float:
    """Best single-copy guess probability over all pairs of distinct shares."""
    angles = [encode_angle(s, k, q) for k in range(q)]
    return max(
        helstrom_distinguishability(a, b)[1] for a, b in itertools.combinations(angles, 2)
    )


def strip_mask(omega: float, phi: float, fake_bit: int) -> Statevector:
    """``RZ(theta') X^m' |+_omega>`` where ``theta'`` is the honest reply to ``m'``."""
    theta = shareholder_respond(fake_bit, omega, phi)
    st = mask_state(omega)
    if fake_bit:
        st = sv.apply_1q(st, sv.X, 0)
    return sv.apply_1q(st, sv.RZ(theta), 0)


def _rng(seed, label: int, stream: int) -> np.random.Generator:
    # per-shareholder streams, stable under changes in how many targets there are
    entropy = np.random.SeedSequence(seed).entropy
    return np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=(label, stream)))


def combiner_fake_attack(
    config: ShareConfig,
    fake_bits: Sequence[int],
    *,
    masks: Optional[Sequence[float]] = None,
    labels: Optional[Sequence[int]] = None,
    seed: int = 0,
    shots: int = 10_000,
) -> tuple[list[Statevector], LeakageReport]:
    """The combiner announces fake outcomes and strips each mask off.

    Returns the stripped states ``RZ(theta') X^m' RZ(omega)|+>`` and a report
    showing they equal ``RZ(phi_i)|+>`` and how well they could be told apart.
    """
    k = len(config.shares)
    if len(fake_bits) != k:
        raise DimensionError(f"{len(fake_bits)} fake bits for {k} shareholders")
    if masks is not None and len(masks) != k:
        raise DimensionError(f"{len(masks)} masks for {k} shareholders")
    labels = list(labels) if labels is not None else list(range(1, k + 1))
    q, s = config.q, config.s
    stripped = []
    report = LeakageReport("combiner-fake-results", targets=[f"Bob{i}" for i in labels])
    for j, (ki, mbit, label) in enumerate(zip(config.shares, fake_bits, labels)):
        phi = encode_angle(s, ki, q)
        omega = masks[j] if masks is not None else float(_rng(seed, label, 0).uniform(0, sv.TWO_PI))
        st = strip_mask(omega, phi, mbit)
        stripped.append(st)

        report.identity_fidelities.append(sv.fidelity_up_to_phase(st, mask_state(phi)))
        p0 = sv.outcome_probability(st, 0, Basis.Z, 0)
        report.z_probabilities.append(p0)
        report.z_frequencies.append(float(_rng(seed, label, 1).binomial(shots, p0)) / shots)
        td = max(
            (helstrom_distinguishability(phi, encode_angle(s, other, q))[0] for other in range(q) if other != ki),
            default=0.0,
        )
        report.trace_distances.append(td)
        report.guess_probabilities.append(0.5 * (1 + td))
    report.fidelity = min(report.identity_fidelities) if report.identity_fidelities else None
    return stripped, report


def collusion_one(config: ShareConfig, psi: Statevector) -> LeakageReport:
    """All non-combiner shareholders pool their angles on the dealer's qubit."""
    q, s = config.q, config.s
    state = dealer_encrypt(psi, encode_angle(s, config.k_A, q))
    for ki in config.shares:
        state = sv.apply_1q(state, sv.RX(encode_angle(s, ki, q)), 0)
    fid = sv.fidelity_up_to_phase(state, psi)
    td = float(np.sqrt(max(0.0, 1.0 - fid)))
    return LeakageReport(
        "collusion-I",
        targets=["psi"],
        trace_distances=[td],
        guess_probabilities=[0.5 * (1 + td)],
        fidelity=fid,
        extra={"phi_C": encode_angle(s, config.k_C, q), "colluders_state": state.to_pairs()},
    )


def collapse_to_three_party(config: ShareConfig, honest: int) -> ShareConfig:
    """Fold every dishonest shareholder's share into the combiner's."""
    k = len(config.shares)
    if not 1 <= honest <= k:
        raise IndexError(f"honest index {honest} out of range 1..{k}")
    pooled = (config.k_C + sum(v for i, v in enumerate(config.shares, 1) if i != honest)) % config.q
    return ShareConfig(config.q, config.k_A, (config.shares[honest - 1],), pooled, config.s)


def collusion_two(
    config: ShareConfig,
    honest: int,
    *,
    fake_bit: int = 1,
    masks: Optional[Sequence[float]] = None,
    seed: int = 0,
    shots: int = 10_000,
) -> LeakageReport:
    """Only shareholder ``honest`` is honest; the rest side with the combiner."""
    reduced = collapse_to_three_party(config, honest)
    own_mask = None if masks is None else [masks[honest - 1]]
    _, report = combiner_fake_attack(
        reduced, [fake_bit], masks=own_mask, labels=[honest], seed=seed, shots=shots
    )
    report.scenario = "collusion-II"
    report.extra["max_pairwise_guess"] = max_pairwise_guess(config.q, config.s)
    report.extra["pooled_k_C"] = reduced.k_C
    return report


def external_attack(
    config: ShareConfig,
    psi: Statevector,
    decoys: int = 64,
    trials: int = 1000,
    seed: int = 0,
) -> LeakageReport:
    """Intercept-resend on every transmission; reports the abort rate."""
    rate = ch.intercept_resend_abort_rate(decoys, trials, seed)
    held = dealer_encrypt(psi, encode_angle(config.s, config.k_A, config.q))
    return LeakageReport(
        "external-intercept-resend",
        targets=["psi"],
        fidelity=sv.fidelity_up_to_phase(held, psi),
        detection={
            "decoys": decoys,
            "trials": trials,
            "abort_rate": rate,
            "abort_probability_lower_bound": 1.0 - 0.75 ** decoys,
        },
    )


def run_scenario(scenario: AttackScenario, config: ShareConfig, psi: Statevector, seed: int = 0) -> LeakageReport:
    if isinstance(scenario, ExternalInterceptResend):
        return external_attack(config, psi, scenario.decoys, scenario.trials, seed)
    if isinstance(scenario, CombinerFakeResults):
        return combiner_fake_attack(config, scenario.fake_bits, seed=seed)[1]
    if isinstance(scenario, CollusionI):
        return collusion_one(config, psi)
    if isinstance(scenario, CollusionII):
        return collusion_two(config, scenario.honest, seed=seed)
    raise TypeError(f"unknown scenario {scenario!r}")


def default_scenarios(config: ShareConfig) -> list:
    """One instance of each scenario for a given configuration."""
    k = len(config.shares)
    return [
        ExternalInterceptResend(),
        CombinerFakeResults(tuple([1] * k)),
        CollusionI(),
        CollusionII(1),
    ]
