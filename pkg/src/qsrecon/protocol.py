"""The reconstruction protocol: dealer, shareholders, combiner and transcript.

Two engines are available.  ``"lazy"`` (default) keeps only the current data
qubit and the next mask qubit alive, so the number of parties is not limited
by memory.  ``"eager"`` holds the whole chain in one register, builds every CZ
up front and applies each correction in the deferred-CZ frame; it exists for
cross-validation and for printing full-register traces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from . import channel as ch
from . import statevec as sv
from .cluster import ClusterGraph, apply_deferred, build_cluster, correction_matrix, mask_state
from .errors import ChannelError, InvalidArity, ProtocolViolation
from .shares import ShareConfig, check_randomizer, encode_angle
from .statevec import Basis, Forced, OutcomePolicy, Sample, Statevector

MAX_EAGER_QUBITS = 12


# ---------------------------------------------------------------------------
# single-step operations
# ---------------------------------------------------------------------------


def dealer_encrypt(psi: Statevector, phi_A: float) -> Statevector:
    return sv.apply_1q(psi, sv.RX(phi_A), 0)


def shareholder_prepare(omega: float) -> Statevector:
    return mask_state(omega)


def shareholder_respond(m: int, omega: float, phi: float) -> float:
    """``theta = (-1)**(m+1) * omega + phi`` reduced to ``[0, 2*pi)``."""
    if m not in (0, 1):
        raise ValueError("measurement result must be 0 or 1")
    sign = 1.0 if m == 1 else -1.0
    return sv.canonical_angle(sign * omega + phi)


@dataclass(frozen=True)
class RoundResult:
    m: int
    theta: float
    state: Statevector


def combiner_round(
    state: Statevector,
    mask_qubit: Statevector,
    announce: Callable[[int], float],
    policy: OutcomePolicy,
) -> RoundResult:
    """One lazy round: entangle, X-measure the data qubit, compensate, correct.

    ``announce`` publishes the outcome and returns the shareholder's angle.
    The new data qubit equals ``RX(phi_i) state`` up to global phase.
    """
    pair = sv.apply_cz(sv.tensor(state, mask_qubit), 0, 1)
    m, pair = sv.measure(pair, 0, Basis.X, policy)
    out = sv.drop_qubit(pair, 0, sv.outcome_ket(Basis.X, m))
    if m:
        out = sv.apply_1q(out, sv.X, 0)
    theta = announce(m)
    out = sv.apply_1q(out, sv.H, 0)
    out = sv.apply_1q(out, sv.RX(theta), 0)
    return RoundResult(m, theta, out)


# ---------------------------------------------------------------------------
# public board
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Announcement:
    seq: int
    kind: str  # "s", "m" or "theta"
    party: str
    value: float
    round: Optional[int] = None

    def to_dict(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, "party": self.party, "value": self.value}


class PublicBoard:
    """Append-only classical channel enforcing ``s, m1, theta1, m2, theta2, ...``."""

    def __init__(self, rounds: int):
        self.rounds = rounds
        self.entries: list[Announcement] = []

    def _expected(self) -> tuple[str, Optional[int]]:
        k = len(self.entries)
        if k == 0:
            return "s", None
        k -= 1
        if k >= 2 * self.rounds:
            return "end", None
        return ("m" if k % 2 == 0 else "theta"), k // 2 + 1

    def post(self, kind: str, party: str, value, round: Optional[int] = None) -> Announcement:
        want, want_round = self._expected()
        if kind != want or round != want_round:
            raise ProtocolViolation(
                f"{party} posted {kind}(round={round}) but the board expects {want}(round={want_round})"
            )
        ann = Announcement(len(self.entries), kind, party, value, round)
        self.entries.append(ann)
        return ann

    def last(self, kind: str, round: int) -> Announcement:
        for ann in reversed(self.entries):
            if ann.kind == kind and ann.round == round:
                return ann
        raise ProtocolViolation(f"no {kind} announced for round {round}")


# ---------------------------------------------------------------------------
# parties
# ---------------------------------------------------------------------------


@dataclass
class OpCounter:
    add: int = 0
    mul: int = 0


class _EncodedShare:
    """A party's share with the cost-model bookkeeping for angle encoding.

    ``k/q*2*pi`` is prepared once (two multiplications); every session then
    costs one more multiplication by ``s``.  The returned angle itself is
    computed exactly.
    """

    def __init__(self, k: int, q: int, counter: OpCounter):
        self._k = k
        self._q = q
        self._counter = counter
        self._base: Optional[Fraction] = None

    def angle(self, s: int) -> float:
        if self._base is None:
            self._base = Fraction(self._k, self._q)
            self._counter.mul += 2
        self._counter.mul += 1
        return encode_angle(s, self._k, self._q)


class Dealer:
    name = "Alice"

    def __init__(self, k_A: int, q: int):
        self.counter = OpCounter()
        self._share = _EncodedShare(k_A, q, self.counter)
        self._q = q

    def choose_randomizer(self, rng: np.random.Generator) -> int:
        return int(rng.integers(1, self._q))

    def encrypt(self, psi: Statevector, s: int) -> Statevector:
        return dealer_encrypt(psi, self._share.angle(s))


class Shareholder:
    """Holds ``k_i``; acts as ``Bob_i`` in a round or as the combiner."""

    def __init__(self, index: int, k: int, q: int, rng: np.random.Generator,
                 masks: Optional[Sequence[float]] = None):
        self.index = index
        self.name = f"Bob{index}"
        self.counter = OpCounter()
        self._share = _EncodedShare(k, q, self.counter)
        self._rng = rng
        self._masks: Optional[Iterator[float]] = iter(masks) if masks is not None else None
        self._omega: Optional[float] = None
        self._phi: Optional[float] = None

    def prepare(self, s: int) -> Statevector:
        """Draw a fresh mask, encode the share under ``s``, emit ``|+_omega>``."""
        self._phi = self._share.angle(s)
        if self._masks is not None:
            self._omega = float(next(self._masks))
        else:
            self._omega = float(self._rng.uniform(0.0, sv.TWO_PI))
        return shareholder_prepare(self._omega)

    def encode(self, s: int) -> float:
        """Encode the share for this session (the combiner's only step before the rounds)."""
        self._phi = self._share.angle(s)
        return self._phi

    def respond(self, board: PublicBoard, round: int) -> float:
        m = board.last("m", round).value
        theta = shareholder_respond(m, self._omega, self._phi)
        self.counter.add += 1
        board.post("theta", self.name, theta, round)
        return theta

    def recover(self, state: Statevector, target: int) -> Statevector:
        """Final ``RX(phi_C)`` when acting as combiner."""
        return sv.apply_1q(state, sv.RX(self._phi), target)


# ---------------------------------------------------------------------------
# transcript
# ---------------------------------------------------------------------------


@dataclass
class TraceRow:
    label: str
    state: Statevector


@dataclass
class Transcript:
    config: dict
    announcements: list = field(default_factory=list)
    channel_reports: list = field(default_factory=list)
    counters: dict = field(default_factory=lambda: {"add": 0, "mul": 0})
    recovered: Optional[Statevector] = None
    fidelity: Optional[float] = None
    verdict: str = "Recovered"
    attack_report: Optional[dict] = None
    trace: list = field(default_factory=list, repr=False)
    # per-party deltas keyed by party name; not part of the JSON document
    party_counters: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.verdict == "Recovered"

    def thetas(self) -> list[float]:
        return [a.value for a in self.announcements if a.kind == "theta"]

    def outcomes(self) -> list[int]:
        return [a.value for a in self.announcements if a.kind == "m"]

    def to_dict(self) -> dict:
        out = {
            "config": self.config,
            "announcements": [a.to_dict() for a in self.announcements],
            "channel_reports": [r.to_dict() for r in self.channel_reports],
            "counters": {"add": self.counters["add"], "mul": self.counters["mul"]},
            "recovered": self.recovered.to_pairs() if self.recovered is not None else None,
            "fidelity": self.fidelity,
            "verdict": self.verdict,
        }
        if self.attack_report is not None:
            out["attack_report"] = self.attack_report
        return out

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        return json.dumps(self.to_dict(), ensure_ascii=False, **kw)


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------


def _lazy_engine(data, masks, announcers, policies, finish):
    state = data
    for mask, announce, policy in zip(masks, announcers, policies):
        state = combiner_round(state, mask, announce, policy).state
    return finish(state, 0), []


def _eager_engine(data, masks, announcers, policies, finish):
    n = len(masks) + 1
    if n > MAX_EAGER_QUBITS:
        raise InvalidArity(f"eager engine is limited to {MAX_EAGER_QUBITS} qubits")
    trace = []
    state = sv.tensor(data, *masks)
    trace.append(TraceRow("particles received", state))
    state = build_cluster(ClusterGraph.path(n), [data, *masks])
    trace.append(TraceRow("chain entangled", state))
    outcomes = []
    for j, (announce, policy) in enumerate(zip(announcers, policies)):
        m, state = sv.measure(state, j, Basis.X, policy)
        outcomes.append(m)
        trace.append(TraceRow(f"particle {j} measured, m={m}", state))
        theta = announce(m)
        partner = j + 2 if j + 2 < n else None
        state = apply_deferred(state, correction_matrix(m, theta), j + 1, partner)
        trace.append(TraceRow(f"X^{m} then RX({theta:.6g})H on particle {j + 1}", state))
    state = finish(state, n - 1)
    trace.append(TraceRow("final RX(phi_C)", state))
    for m in outcomes:
        state = sv.drop_qubit(state, 0, sv.outcome_ket(Basis.X, m))
    return state, trace


_ENGINES = {"lazy": _lazy_engine, "eager": _eager_engine}


def _policies(outcomes, rounds, rng) -> list:
    if outcomes is None:
        return [Sample(rng)] * rounds
    if len(outcomes) != rounds:
        raise InvalidArity(f"{len(outcomes)} forced outcomes for {rounds} rounds")
    return [Forced(int(b)) for b in outcomes]


def _resolve_eavesdropper(eve):
    if eve is None or callable(eve):
        return eve
    if eve in ("intercept-resend", "external"):
        return ch.intercept_resend
    raise ValueError(f"unknown eavesdropper {eve!r}")


def _session(
    dealer: Dealer,
    holders: Sequence[Shareholder],
    combiner: int,
    psi: Statevector,
    s: int,
    seeds: np.random.SeedSequence,
    *,
    outcomes=None,
    decoys: int,
    threshold: float,
    eavesdropper,
    engine: str,
    echo: dict,
) -> Transcript:
    if engine not in _ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    chan_rng, outcome_rng = (np.random.default_rng(c) for c in seeds.spawn(2))
    eve = _resolve_eavesdropper(eavesdropper)
    comb = next(h for h in holders if h.index == combiner)
    bobs = [h for h in holders if h.index != combiner]
    parties = [dealer, *holders]
    before = [(p.counter.add, p.counter.mul) for p in parties]
    board = PublicBoard(len(bobs))
    transcript = Transcript(config=dict(echo, combiner=comb.name))

    def close(verdict):
        transcript.announcements = list(board.entries)
        transcript.party_counters = {
            p.name: {"add": p.counter.add - b[0], "mul": p.counter.mul - b[1]}
            for p, b in zip(parties, before)
        }
        transcript.counters = {
            key: sum(c[key] for c in transcript.party_counters.values()) for key in ("add", "mul")
        }
        transcript.verdict = verdict
        return transcript

    try:
        # S1: randomizer and dealer encryption
        board.post("s", dealer.name, s)
        data = dealer.encrypt(psi, s)
        comb.encode(s)

        # S2/S3: quantum transmissions with decoy checks
        received, report = ch.transmit(data, chan_rng, decoys, threshold, eve)
        transcript.channel_reports.append(report)
        if report.aborted:
            raise ChannelError(f"decoy check failed on {dealer.name}'s transmission")
        masks = []
        for bob in bobs:
            got, report = ch.transmit(bob.prepare(s), chan_rng, decoys, threshold, eve)
            transcript.channel_reports.append(report)
            if report.aborted:
                raise ChannelError(f"decoy check failed on {bob.name}'s transmission")
            masks.append(got)

        # S4 onwards: measurement rounds
        def announcer(r, bob):
            def announce(m):
                board.post("m", comb.name, m, r)
                bob.respond(board, r)
                return board.last("theta", r).value
            return announce

        announcers = [announcer(r, bob) for r, bob in enumerate(bobs, start=1)]
        policies = _policies(outcomes, len(bobs), outcome_rng)

        def finish(state, target):
            return comb.recover(state, target)

        recovered, trace = _ENGINES[engine](received, masks, announcers, policies, finish)
    except ChannelError:
        return close("Aborted(ChannelError)")
    except ProtocolViolation:
        return close("Aborted(ProtocolViolation)")

    if len(board.entries) != 1 + 2 * len(bobs):
        return close("Aborted(ProtocolViolation)")
    transcript.recovered = recovered
    transcript.fidelity = sv.fidelity_up_to_phase(recovered, psi)
    transcript.trace = trace
    return close("Recovered")


def _make_parties(config: ShareConfig, seeds: np.random.SeedSequence, masks=None):
    """Dealer plus shareholders ``Bob1..Bobn``; config's combiner is ``Bobn``."""
    allk = config.holder_shares()
    holder_seeds = seeds.spawn(len(allk))
    holders = []
    for i, (k, hs) in enumerate(zip(allk, holder_seeds), start=1):
        own = None
        if masks is not None and i <= len(masks):
            own = [masks[i - 1]]
        holders.append(Shareholder(i, k, config.q, np.random.default_rng(hs), own))
    return Dealer(config.k_A, config.q), holders


def _echo(config: ShareConfig, s: int, seed, decoys, threshold, engine) -> dict:
    return {
        "n": config.n,
        "q": config.q,
        "s": s,
        "seed": seed,
        "decoys": decoys,
        "threshold": threshold,
        "engine": engine,
    }


def run_protocol(
    config: ShareConfig,
    psi: Statevector,
    *,
    seed: int = 0,
    outcomes: Optional[Sequence[int]] = None,
    masks: Optional[Sequence[float]] = None,
    decoys: int = ch.DEFAULT_DECOYS,
    threshold: float = ch.DEFAULT_THRESHOLD,
    eavesdropper=None,
    engine: str = "lazy",
) -> Transcript:
    """Run one reconstruction of ``psi`` under ``config``.

    ``outcomes`` forces the measurement results (one per non-combiner
    shareholder); by default they are sampled.  ``masks`` fixes the
    shareholders' secret angles for replay; by default each draws its own.
    The randomizer is ``config.s``.
    """
    if psi.num_qubits != 1:
        raise InvalidArity("the private state is a single qubit")
    if masks is not None and len(masks) != config.n - 1:
        raise InvalidArity(f"{len(masks)} masks for {config.n - 1} shareholders")
    master = np.random.SeedSequence(seed)
    party_seeds, session_seeds = master.spawn(2)
    dealer, holders = _make_parties(config, party_seeds, masks)
    echo = _echo(config, config.s, seed, decoys, threshold, engine)
    return _session(
        dealer, holders, config.n, psi, config.s, session_seeds,
        outcomes=outcomes, decoys=decoys, threshold=threshold,
        eavesdropper=eavesdropper, engine=engine, echo=echo,
    )


def run_multi_secret(
    config: ShareConfig,
    secrets: Sequence[Statevector],
    randomizers: Sequence[int],
    *,
    seed: int = 0,
    combiners: Optional[Sequence[int]] = None,
    decoys: int = ch.DEFAULT_DECOYS,
    threshold: float = ch.DEFAULT_THRESHOLD,
    engine: str = "lazy",
) -> list[Transcript]:
    """Reconstruct several secrets with one fixed set of shares.

    Each run uses its own randomizer and fresh masks.  ``combiners`` picks the
    shareholder (1-based) who combines in each run; by default the role rotates
    through ``Bob1, Bob2, ...``.
    """
    w = len(secrets)
    if w < 2:
        raise InvalidArity("multi-secret sharing needs at least two secrets")
    if len(randomizers) != w:
        raise InvalidArity("one randomizer per secret is required")
    for s in randomizers:
        check_randomizer(s, config.q)
    if combiners is None:
        combiners = [(r % config.n) + 1 for r in range(w)]
    elif len(combiners) != w:
        raise InvalidArity("one combiner per secret is required")

    master = np.random.SeedSequence(seed)
    party_seeds, *run_seeds = master.spawn(w + 1)
    dealer, holders = _make_parties(config, party_seeds)
    out = []
    for r, (psi, s, c) in enumerate(zip(secrets, randomizers, combiners)):
        echo = _echo(config, s, seed, decoys, threshold, engine)
        echo["run"] = r
        out.append(_session(
            dealer, holders, c, psi, s, run_seeds[r],
            decoys=decoys, threshold=threshold, eavesdropper=None,
            engine=engine, echo=echo,
        ))
    return out


def replay_trace(
    psi: Statevector,
    phi_A: float,
    phis: Sequence[float],
    phi_C: float,
    masks: Sequence[float],
    outcomes: Sequence[int],
) -> tuple[list[TraceRow], list[float]]:
    """Full-register trace for literal angles (bypassing share encoding).

    Returns the trace rows and the announced angles.
    """
    if not (len(phis) == len(masks) == len(outcomes)):
        raise InvalidArity("phis, masks and outcomes must have equal length")
    thetas = []

    def announcer(phi, omega):
        def announce(m):
            thetas.append(shareholder_respond(m, omega, phi))
            return thetas[-1]
        return announce

    data = dealer_encrypt(psi, phi_A)
    _, trace = _eager_engine(
        data,
        [shareholder_prepare(w) for w in masks],
        [announcer(p, w) for p, w in zip(phis, masks)],
        [Forced(m) for m in outcomes],
        lambda st, t: sv.apply_1q(st, sv.RX(phi_C), t),
    )
    return trace, thetas


def random_secret(rng: np.random.Generator) -> Statevector:
    """Haar-random single-qubit state."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return Statevector.from_amplitudes(v, normalize=True)

