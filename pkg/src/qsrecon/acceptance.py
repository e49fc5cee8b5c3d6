"""The twelve end-to-end acceptance checks, runnable from tests and ``qsrecon selftest``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from . import analysis, attacks, cluster, example, protocol, shares
from . import channel as ch
from . import statevec as sv
from .statevec import Basis

PRIMES = (3, 5, 7, 11)
SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _random_config(rng: np.random.Generator, n: int, q: int) -> shares.ShareConfig:
    return shares.split_secret(
        int(rng.integers(0, q)), n, q, rng, s=int(rng.integers(1, q))
    )


def _rx_overlap(psi: sv.Statevector, angle: float) -> float:
    # independent 2x2 oracle: cos(a/2) I - i sin(a/2) X
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    mat = np.array([[c, -1j * s], [-1j * s, c]])
    return abs(np.vdot(psi.amps, mat @ psi.amps)) ** 2


def table_replay() -> tuple[bool, str]:
    _, checks, thetas = example.replay()
    worst = max(c.literal_error for c in checks)
    ok = len(checks) == 7 and worst <= 1e-9 and np.allclose(thetas, example.THETAS, atol=1e-12)
    return ok, f"7 rows, worst literal component error {worst:.2e}"


def end_to_end(runs: int = 400) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    failures = 0
    for run in range(runs):
        n = int(rng.integers(2, 11))
        q = int(rng.choice(PRIMES))
        config = _random_config(rng, n, q)
        psi = protocol.random_secret(rng)
        t = protocol.run_protocol(config, psi, seed=int(rng.integers(1 << 32)))
        if not t.ok:
            failures += 1
            continue
        worst = max(worst, 1.0 - t.fidelity)
    ok = failures == 0 and worst <= 1e-9
    return ok, f"{runs} runs, {failures} aborted, worst 1-F {worst:.2e}"


def outcome_exhaustion(max_n: int = 6) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    patterns = 0
    for n in range(2, max_n + 1):
        config = _random_config(rng, n, int(rng.choice(PRIMES)))
        psi = protocol.random_secret(rng)
        masks = list(rng.uniform(0, sv.TWO_PI, size=n - 1))
        outs = []
        for bits in product((0, 1), repeat=n - 1):
            t = protocol.run_protocol(config, psi, seed=n, outcomes=list(bits), masks=masks)
            outs.append(t.recovered)
            patterns += 1
        for a in outs:
            worst = max(worst, 1.0 - sv.fidelity_up_to_phase(a, outs[0]), 1.0 - sv.fidelity_up_to_phase(a, psi))
    return worst <= 1e-9, f"{patterns} forced patterns, worst 1-F {worst:.2e}"


def stabilizers(graphs: int = 100) -> tuple[bool, str]:
    path = cluster.ClusterGraph.path(3)
    res = cluster.verify_stabilizers(path, cluster.canonical_cluster(path))
    worst_path = max(res.values())
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(graphs):
        g = cluster.random_graph(int(rng.integers(1, 7)), rng)
        worst = max(worst, *cluster.verify_stabilizers(g, cluster.canonical_cluster(g)).values())
    ok = len(res) == 3 and worst_path < 1e-12 and worst < 1e-12
    return ok, f"3-path worst residual {worst_path:.1e}, {graphs} random graphs worst {worst:.1e}"


def lazy_eager(instances: int = 500) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 3)
    worst_f = worst_p = 0.0
    for _ in range(instances):
        n = int(rng.integers(2, 9))
        k = n - 1
        cmp = cluster.compare_pipelines(
            protocol.random_secret(rng),
            list(rng.uniform(0, sv.TWO_PI, k)),
            [int(b) for b in rng.integers(0, 2, k)],
            list(rng.uniform(0, sv.TWO_PI, k)),
            list(rng.uniform(0, sv.TWO_PI, k)),
        )
        worst_f = max(worst_f, 1.0 - cmp.fidelity)
        worst_p = max(worst_p, abs(cmp.lazy_probability - cmp.eager_probability))
    ok = worst_f <= 1e-9 and worst_p <= 1e-12
    return ok, f"{instances} paths, worst 1-F {worst_f:.1e}, worst dP {worst_p:.1e}"


def experiment(shots: int = 5000) -> tuple[bool, str]:
    counts = analysis.run_experiment(shots, SEED)
    ones = sum(v for key, v in counts.items() if key[0] == "1")
    amp = analysis.max_c2_one_amplitude()
    ok = ones == 0 and sum(counts.values()) == shots and amp < 1e-9
    return ok, f"{shots} shots, c2=1 in {ones}, max c2=1 amplitude {amp:.1e}, {counts}"


def decoy_detection() -> tuple[bool, str]:
    payload = sv.ket("0")
    t, record = ch.send_with_decoys(payload, 10_000, SEED)
    rate = ch.detect(ch.eavesdrop_intercept_resend(t, SEED + 1), record, seed=SEED + 2).error_rate
    clean = ch.detect(t, record, seed=SEED + 3).error_rate
    abort = ch.intercept_resend_abort_rate(64, 1000, SEED + 4)
    ok = abs(rate - 0.25) <= 0.02 and clean == 0.0 and abort == 1.0
    return ok, f"per-decoy detection {rate:.4f}, clean error rate {clean}, 64-decoy abort rate {abort}"


def combiner_attack(samples: int = 1000) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 5)
    worst = worst_z = 0.0
    for _ in range(samples):
        omega, phi = rng.uniform(0, sv.TWO_PI, 2)
        st = attacks.strip_mask(omega, phi, int(rng.integers(0, 2)))
        worst = max(worst, 1.0 - sv.fidelity_up_to_phase(st, cluster.mask_state(phi)))
        worst_z = max(worst_z, abs(sv.outcome_probability(st, 0, Basis.Z, 0) - 0.5))
    ok = worst <= 1e-12 and worst_z <= 1e-12
    return ok, f"{samples} samples, worst 1-F {worst:.1e}, worst |P(0)-1/2| {worst_z:.1e}"


def collusion(samples: int = 200) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    iff = True
    for _ in range(samples):
        q = int(rng.choice(PRIMES))
        config = _random_config(rng, int(rng.integers(2, 8)), q)
        psi = protocol.random_secret(rng)
        rep = attacks.collusion_one(config, psi)
        phi_c = shares.encode_angle(config.s, config.k_C, q)
        worst = max(worst, abs(rep.fidelity - _rx_overlap(psi, -phi_c)))
        iff &= (abs(rep.fidelity - 1.0) <= 1e-9) == (config.k_C == 0)
    ok = worst <= 1e-9 and iff
    return ok, f"{samples} configs, worst oracle gap {worst:.1e}, F=1 iff phi_C=0: {iff}"


def cost_accounting(configs: int = 50) -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 7)
    mismatches = 0
    for _ in range(configs):
        n = int(rng.integers(2, 11))
        w = int(rng.integers(2, 9))
        q = int(rng.choice(PRIMES))
        config = _random_config(rng, n, q)
        secrets = [protocol.random_secret(rng) for _ in range(w)]
        runs = protocol.run_multi_secret(
            config, secrets, [int(s) for s in rng.integers(1, q, w)], seed=int(rng.integers(1 << 32))
        )
        per_party: dict = {}
        for t in runs:
            for name, c in t.party_counters.items():
                per_party[name] = per_party.get(name, 0) + c["mul"]
        adds = sum(t.counters["add"] for t in runs)
        muls = sum(t.counters["mul"] for t in runs)
        cc = analysis.computation_cost(analysis.CostModel.for_modulus(n, q, w))
        good = (
            len(per_party) == n + 1
            and all(v == 2 + w for v in per_party.values())
            and adds == (n - 1) * w == cc.total_additions
            and muls == cc.total_multiplications
        )
        mismatches += not good
    rows = analysis.comparison_table(analysis.CostModel(3, 1, 2))
    classes = [(r.distribution_class, r.computation_class, r.share_reuse) for r in rows]
    table_ok = classes == [
        ("O(1)", "O(n)T_a+O(1)T_m", True),
        ("O(|q|n^2)", "O(n)T_a+O(n^3)T_m", False),
        ("O(|q|n)", "O(n)T_a+O(n^3)T_m", False),
        ("O(|q|n^2)", "O(n)T_a+O(n^4)T_m", False),
    ]
    return mismatches == 0 and table_ok, f"{configs} configs, {mismatches} counter mismatches, table classes ok: {table_ok}"


def share_reuse() -> tuple[bool, str]:
    rng = np.random.default_rng(SEED + 8)
    config = example.CONFIG
    secrets = [protocol.random_secret(rng) for _ in range(4)]
    runs = protocol.run_multi_secret(config, secrets, [1, 2, 1, 2], seed=SEED)
    worst = max(1.0 - t.fidelity for t in runs if t.ok) if all(t.ok for t in runs) else 1.0
    a = protocol.run_protocol(config.with_randomizer(1), secrets[0], seed=SEED)
    b = protocol.run_protocol(config.with_randomizer(2), secrets[0], seed=SEED)
    differ = not np.allclose(a.thetas(), b.thetas(), atol=1e-12)
    ok = worst <= 1e-9 and differ
    return ok, f"w=4 worst 1-F {worst:.1e}, theta streams differ across s: {differ}"


def swap_estimator(shots: int = 10_000) -> tuple[bool, str]:
    zero = sv.ket("0")
    pairs = {
        0.0: (zero, sv.ket("1")),
        0.5: (zero, sv.ket("+")),
        0.75: (zero, sv.apply_1q(zero, sv.RY(math.pi / 3), 0)),
        1.0: (example.SECRET, example.SECRET),
    }
    worst = 0.0
    for j, (f, (a, b)) in enumerate(pairs.items()):
        res = analysis.swap_test(a, b, shots, SEED + j)
        worst = max(worst, abs(res.p0_estimate - (1 + f) / 2))
    return worst <= 0.02, f"F in {{0, 1/2, 3/4, 1}} at {shots} shots, worst |P0-(1+F)/2| {worst:.4f}"


# (number, name, check, time budget in seconds or None)
CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "worked-example trace replay", table_replay, 1.0),
    (2, "end-to-end correctness", end_to_end, 30.0),
    (3, "outcome exhaustion", outcome_exhaustion, None),
    (4, "stabilizer fixpoints", stabilizers, None),
    (5, "lazy equals eager", lazy_eager, None),
    (6, "experiment reproduction", experiment, 10.0),
    (7, "decoy detection", decoy_detection, None),
    (8, "combiner attack algebra", combiner_attack, None),
    (9, "collusion I fidelity", collusion, None),
    (10, "cost accounting", cost_accounting, None),
    (11, "share reuse", share_reuse, None),
    (12, "swap-test estimator", swap_estimator, None),
]


def run_criterion(number: int) -> CriterionResult:
    _, name, check, budget = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed >= budget:
        ok = False
        detail += f"; over the {budget:g}s budget"
    return CriterionResult(number, name, ok, detail, elapsed)


def run_all(echo: Callable[[str], None] = print) -> list[CriterionResult]:
    results = []
    for number, *_ in CRITERIA:
        res = run_criterion(number)
        echo(res.line())
        results.append(res)
    return results
