"""``qsrecon`` command line.

Exit codes: 0 success, 1 bad input or usage, 2 the protocol aborted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import acceptance, analysis, attacks, example, protocol, shares
from . import statevec as sv
from .errors import QSRError

EXIT_OK, EXIT_USAGE, EXIT_ABORT = 0, 1, 2
REPORT_KINDS = ("example", "experiment", "cost", "attacks")
ATTACKS = ("external", "combiner-fake", "collusion-1", "collusion-2")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int
    q: int
    k_A: Any = "random"
    shares: Optional[list] = None
    s: int = 1
    secret: Any = "paper-example"
    seed: int = 0
    decoys: int = 16
    threshold: float = 0.0
    outcomes: Any = "sample"
    masks: Optional[list] = None
    engine: str = "lazy"
    attack: Any = None
    qmss: Optional[dict] = None
    raw: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__) - {"raw"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("n", "q"):
            if key not in raw:
                raise ConfigError(f"missing required key {key!r}")
        cfg = cls(**raw, raw=raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        shares.check_modulus(self.q)
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError("n must be an integer >= 2")
        if self.outcomes != "sample":
            if not isinstance(self.outcomes, list) or any(b not in (0, 1) for b in self.outcomes):
                raise ConfigError('outcomes must be "sample" or a list of bits')
            if len(self.outcomes) != self.n - 1:
                raise ConfigError(f"outcomes needs {self.n - 1} bits, got {len(self.outcomes)}")
        if self.attack is not None and self.attack_name() not in ATTACKS:
            raise ConfigError(f"unknown attack {self.attack_name()!r}; expected one of {ATTACKS}")

    def attack_name(self) -> Optional[str]:
        if self.attack is None:
            return None
        return self.attack if isinstance(self.attack, str) else self.attack.get("name")

    def attack_params(self) -> dict:
        if isinstance(self.attack, dict):
            return {k: v for k, v in self.attack.items() if k != "name"}
        return {}

    def share_config(self) -> shares.ShareConfig:
        rng = np.random.default_rng(np.random.SeedSequence(self.seed).spawn(1)[0])
        k_A = int(rng.integers(0, self.q)) if self.k_A == "random" else self.k_A
        return shares.split_secret(k_A, self.n, self.q, rng, shares=self.shares, s=self.s)

    def secret_state(self) -> sv.Statevector:
        return parse_secret(self.secret)


def parse_secret(value) -> sv.Statevector:
    if value == "paper-example":
        return example.SECRET
    if isinstance(value, list) and len(value) == 2:
        amps = [complex(*a) if isinstance(a, list) else complex(a) for a in value]
        return sv.Statevector.from_amplitudes(np.array(amps), normalize=True)
    raise ConfigError('secret must be "paper-example" or two amplitudes')


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return RunConfig.from_dict(json.load(fh))


def _dump(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt_fidelity(f: Optional[float]) -> str:
    return "n/a" if f is None else f"{f:.12f}"


def _attack_report(cfg: RunConfig, config: shares.ShareConfig, psi) -> Optional[dict]:
    name, params = cfg.attack_name(), cfg.attack_params()
    if name in (None, "external"):
        return None
    if name == "combiner-fake":
        bits = params.get("fake_bits", [1] * (config.n - 1))
        _, rep = attacks.combiner_fake_attack(config, bits, seed=cfg.seed)
    elif name == "collusion-1":
        rep = attacks.collusion_one(config, psi)
    else:
        rep = attacks.collusion_two(config, params.get("honest", 1), seed=cfg.seed)
    return rep.to_dict()


def cmd_run(config_path: str, out: Optional[str]) -> int:
    cfg = load_config(config_path)
    config = cfg.share_config()
    psi = cfg.secret_state()

    if cfg.qmss is not None:
        w = cfg.qmss.get("w", 2)
        randomizers = cfg.qmss.get("randomizers") or [(r % (cfg.q - 1)) + 1 for r in range(w)]
        rng = np.random.default_rng(cfg.seed)
        secrets = [psi] + [protocol.random_secret(rng) for _ in range(w - 1)]
        runs = protocol.run_multi_secret(
            config, secrets, randomizers, seed=cfg.seed,
            decoys=cfg.decoys, threshold=cfg.threshold, engine=cfg.engine,
        )
        doc = {"config": cfg.raw, "runs": []}
        for t in runs:
            d = t.to_dict()
            d["config"] = dict(t.config)
            doc["runs"].append(d)
            print(f"run {t.config['run']}: verdict {t.verdict}, fidelity {_fmt_fidelity(t.fidelity)}")
        _dump(doc, out)
        return EXIT_OK if all(t.ok for t in runs) else EXIT_ABORT

    decoys = cfg.decoys
    eve = None
    if cfg.attack_name() == "external":
        eve = "external"
        decoys = cfg.attack_params().get("decoys", decoys)
    t = protocol.run_protocol(
        config, psi,
        seed=cfg.seed,
        outcomes=None if cfg.outcomes == "sample" else cfg.outcomes,
        masks=cfg.masks,
        decoys=decoys,
        threshold=cfg.threshold,
        eavesdropper=eve,
        engine=cfg.engine,
    )
    t.attack_report = _attack_report(cfg, config, psi)
    doc = t.to_dict()
    doc["config"] = dict(cfg.raw, resolved=t.config)
    _dump(doc, out)
    print(f"verdict: {t.verdict}")
    print(f"fidelity: {_fmt_fidelity(t.fidelity)}")
    return EXIT_OK if t.ok else EXIT_ABORT


def _format_state(state: sv.Statevector) -> str:
    terms = []
    width = state.num_qubits
    for idx, amp in enumerate(state.amps):
        if abs(amp) > 1e-12:
            # print qubit 0 leftmost
            label = format(idx, f"0{width}b")[::-1]
            terms.append(f"({amp.real:+.6f}{amp.imag:+.6f}j)|{label}>")
    return " ".join(terms)


def report_example(as_json: bool) -> int:
    rows, checks, thetas = example.replay()
    if as_json:
        _dump({
            "thetas": thetas,
            "rows": [
                {"label": r.label, "state": r.state.to_pairs(), "error": c.literal_error}
                for r, c in zip(rows, checks)
            ],
        }, None)
    else:
        print(f"announced angles: {', '.join(f'{t:.6f}' for t in thetas)}")
        for j, (r, c) in enumerate(zip(rows, checks), start=1):
            print(f"row {j}: {r.label}  [max deviation {c.literal_error:.1e}]")
            print(f"  {_format_state(r.state)}")
    return EXIT_OK if max(c.literal_error for c in checks) <= 1e-9 else EXIT_ABORT


def report_experiment(shots: int, seed: int, as_json: bool) -> int:
    counts = analysis.run_experiment(shots, seed)
    if as_json:
        _dump({"shots": shots, "seed": seed, "counts": counts}, None)
    else:
        print("c2c1c0  count   freq")
        print(analysis.format_histogram(counts))
    return EXIT_OK


def report_cost(n: int, q_bits: int, m: int, as_json: bool) -> int:
    model = analysis.CostModel(n, m, q_bits)
    rows = analysis.comparison_table(model)
    if as_json:
        _dump({"n": n, "share_bits": q_bits, "m": m, "rows": [r.to_dict() for r in rows]}, None)
    else:
        print(f"n={n} |q|={q_bits} m={m}")
        print(analysis.format_table(rows))
    return EXIT_OK


def report_attacks(config_path: Optional[str], seed: int, as_json: bool) -> int:
    if config_path:
        cfg = load_config(config_path)
        config, psi = cfg.share_config(), cfg.secret_state()
    else:
        config, psi = example.CONFIG, example.SECRET
    reports = [attacks.run_scenario(sc, config, psi, seed) for sc in attacks.default_scenarios(config)]
    if as_json:
        _dump({"reports": [r.to_dict() for r in reports]}, None)
        return EXIT_OK
    for r in reports:
        print(r.scenario)
        if r.trace_distances:
            print(f"  trace distances     {[round(x, 6) for x in r.trace_distances]}")
            print(f"  guess probabilities {[round(x, 6) for x in r.guess_probabilities]}")
        if r.fidelity is not None:
            print(f"  fidelity            {r.fidelity:.6f}")
        if r.z_frequencies:
            print(f"  Z-basis P(0)        {[round(x, 4) for x in r.z_frequencies]}")
        if r.detection:
            print(f"  abort rate          {r.detection['abort_rate']} over {r.detection['trials']} trials")
        if "max_pairwise_guess" in r.extra:
            print(f"  max pairwise guess  {r.extra['max_pairwise_guess']:.6f}")
    return EXIT_OK


def cmd_report(args) -> int:
    if args.kind not in REPORT_KINDS:
        print(f"error: unknown report kind {args.kind!r}; expected one of {REPORT_KINDS}", file=sys.stderr)
        return EXIT_USAGE
    if args.kind == "example":
        return report_example(args.json)
    if args.kind == "experiment":
        return report_experiment(args.shots, args.seed, args.json)
    if args.kind == "cost":
        return report_cost(args.n, args.q_bits, args.m, args.json)
    return report_attacks(args.config, args.seed, args.json)


def cmd_selftest() -> int:
    results = acceptance.run_all()
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsrecon", description="Quantum state reconstruction simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the protocol from a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", help="transcript path (default: standard output)")

    rep = sub.add_parser("report", help="print one of the canned reports")
    rep.add_argument("kind", help="|".join(REPORT_KINDS))
    rep.add_argument("--n", type=int, default=3)
    rep.add_argument("--q-bits", type=int, default=2)
    rep.add_argument("--m", type=int, default=1)
    rep.add_argument("--shots", type=int, default=5000)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--config", help="run config for the attacks report")
    rep.add_argument("--json", action="store_true")

    sub.add_parser("selftest", help="run the acceptance checks")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "run":
            return cmd_run(args.config, args.out)
        if args.command == "report":
            return cmd_report(args)
        return cmd_selftest()
    except (QSRError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
