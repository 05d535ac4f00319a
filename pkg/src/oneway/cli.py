"""Command-line entry point: ``oneway compile|verify|stats|trace``.

Exit codes: 0 success, 1 input error, 2 verification failure, 3 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .emit import count_components, report_csv, report_text, stats
from .frontend import QasmError, parse_qasm
from .linalg import deviation_up_to_scalar
from .mgraph import MGraph, MGraphError
from .pipeline import (
    DEFAULT_VERIFY_CAP,
    VERIFY_TOL,
    InvariantBreach,
    compile_circuit,
    pattern_deviation,
    target_map,
)
from .sim.pattern import run_pattern
from .sim.unitary import MAX_UNITARY_QUBITS
from .simplify import SimplifyLimitError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_INTERNAL = 3


@dataclass
class RunConfig:
    command: str
    input: Path
    opt_level: int = 1
    verify_cap: int = DEFAULT_VERIFY_CAP
    out: Path | None = None
    seed: int = 0
    trace: bool = False
    zero_init: bool = True
    mgraph: Path | None = None

    def __post_init__(self) -> None:
        if self.verify_cap > MAX_UNITARY_QUBITS:
            raise ValueError(f"--verify-cap may not exceed the oracle cap of {MAX_UNITARY_QUBITS}")
        if self.opt_level not in (0, 1):
            raise ValueError("--opt-level must be 0 or 1")


class _InputError(Exception):
    pass


def _read_circuit(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_qasm(text)
    except QasmError as exc:
        raise _InputError(f"frontend: {path}: {exc}") from exc


def _compile(cfg: RunConfig, circuit, echo_trace: bool = False):
    def on_fire(f, _d):
        print(f"trace: {f}")

    return compile_circuit(
        circuit,
        opt_level=cfg.opt_level,
        zero_init=cfg.zero_init,
        on_fire=on_fire if echo_trace else None,
    )


def cmd_compile(cfg: RunConfig) -> int:
    circuit = _read_circuit(cfg.input)
    res = _compile(cfg, circuit, echo_trace=cfg.trace)
    out = cfg.out if cfg.out is not None else cfg.input.with_suffix(".oneway")
    out.mkdir(parents=True, exist_ok=True)
    (out / "mgraph.json").write_text(res.mgraph.to_json() + "\n")
    (out / "plan.json").write_text(res.plan.to_json() + "\n")
    (out / "instructions.json").write_text(res.program.to_json() + "\n")
    p = res.plan
    print(
        f"{cfg.input.name}: {res.spider_count} spiders, GHZ={p.ghz_count} Linear={p.linear_count} "
        f"photons={p.photon_count} fusions={p.fusion_count} "
        f"components={count_components(res.program).total} -> {out}"
    )
    return EXIT_OK


def _random_state_check(m: MGraph, target: np.ndarray, seed: int) -> float:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=target.shape[1]) + 1j * rng.normal(size=target.shape[1])
    psi /= np.linalg.norm(psi)
    got = run_pattern(m).dense() @ psi
    return deviation_up_to_scalar(got.reshape(-1, 1), (target @ psi).reshape(-1, 1))


def cmd_verify(cfg: RunConfig) -> int:
    circuit = _read_circuit(cfg.input)
    if circuit.num_qubits > cfg.verify_cap:
        print(f"{cfg.input.name}: SKIP ({circuit.num_qubits} qubits exceeds verify cap {cfg.verify_cap})")
        return EXIT_OK
    if cfg.mgraph is not None:
        try:
            m = MGraph.from_json(cfg.mgraph.read_text())
        except (OSError, ValueError, MGraphError) as exc:
            raise _InputError(f"mgraph: {cfg.mgraph}: {exc}") from exc
    else:
        m = _compile(cfg, circuit).mgraph
    try:
        dev = pattern_deviation(circuit, m, cfg.zero_init)
    except ValueError as exc:
        print(f"{cfg.input.name}: FAIL ({exc})")
        return EXIT_VERIFY
    if len(m.inputs) == circuit.num_qubits:
        dev = max(dev, _random_state_check(m, target_map(circuit, cfg.zero_init), cfg.seed))
    verdict = "PASS" if dev <= VERIFY_TOL else "FAIL"
    print(f"{cfg.input.name}: max deviation {dev:.3e} {verdict}")
    return EXIT_OK if verdict == "PASS" else EXIT_VERIFY


def cmd_stats(cfg: RunConfig) -> int:
    if not cfg.input.is_dir():
        raise _InputError(f"{cfg.input} is not a directory")
    rows, failed = [], []
    for path in sorted(cfg.input.glob("*.qasm")):
        try:
            res = _compile(cfg, _read_circuit(path))
        except Exception as exc:  # keep going; the row is reported as failed
            failed.append(f"error: {path.name}: {exc}")
            continue
        row = stats(res.program, res.plan, path.stem)
        row["spiders"] = res.spider_count
        rows.append(row)
    cols = ("circuit", "ghz", "linear", "photons", "components", "spiders")
    print(report_text(rows, cols), end="")
    for line in failed:
        print(line)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "stats.csv").write_text(report_csv(rows, cols))
        (cfg.out / "stats.txt").write_text(report_text(rows, cols))
    return EXIT_INPUT if failed else EXIT_OK


def cmd_trace(cfg: RunConfig) -> int:
    circuit = _read_circuit(cfg.input)
    res = _compile(cfg, circuit)
    for f in res.firings:
        print(f)
    print(f"{len(res.firings)} firings, {res.spider_count} spiders remain")
    return EXIT_OK


COMMANDS = {"compile": cmd_compile, "verify": cmd_verify, "stats": cmd_stats, "trace": cmd_trace}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oneway", description="Compile OpenQASM 2.0 to photonic one-way programs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--opt-level", type=int, choices=(0, 1), default=1, help="0 skips ZX simplification")
        sp.add_argument("--out", type=Path, default=None, help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trace", action="store_true", help="print every rule firing")
        sp.add_argument("--no-zero-init", dest="zero_init", action="store_false",
                        help="treat inputs as open wires instead of |0>")
        sp.add_argument("--verify-cap", type=int, default=DEFAULT_VERIFY_CAP)

    for name, helptext in [
        ("compile", "write mgraph.json, plan.json and instructions.json"),
        ("verify", "compare the compiled pattern with the circuit unitary"),
        ("trace", "list the simplifier's rule firings"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("input", type=Path)
        common(sp)
        if name == "verify":
            sp.add_argument("--mgraph", type=Path, default=None, help="check this m-graph instead of compiling")
    sp = sub.add_parser("stats", help="per-circuit resource report for a directory of .qasm files")
    sp.add_argument("input", type=Path)
    common(sp)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            input=args.input,
            opt_level=args.opt_level,
            verify_cap=args.verify_cap,
            out=args.out,
            seed=args.seed,
            trace=args.trace,
            zero_init=args.zero_init,
            mgraph=getattr(args, "mgraph", None),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[cfg.command](cfg)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantBreach, SimplifyLimitError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
