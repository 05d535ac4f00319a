"""End-to-end compilation: QASM text to instruction program."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .decompose import DecompositionPlan, decompose, reconstruction_errors
from .emit import InstructionProgram, check_program, emit
from .frontend import Circuit, NativeSeq, parse_qasm, rewrite_to_native, transpile_to_basis
from .linalg import deviation_up_to_scalar
from .mgraph import MGraph, as_graph_like, build_mgraph, extract_pattern
from .sim.pattern import run_pattern
from .sim.statevector import H_MAT
from .sim.unitary import unitary_of
from .simplify import Firing, simplify
from .zx.diagram import ZXDiagram, graph_like_violations

VERIFY_TOL = 1e-8
DEFAULT_VERIFY_CAP = 6


class InvariantBreach(RuntimeError):
    """An internal consistency check failed; this is a compiler bug."""


@dataclass
class CompileResult:
    circuit: Circuit
    native: NativeSeq
    diagram: ZXDiagram
    mgraph: MGraph
    plan: DecompositionPlan
    program: InstructionProgram
    zero_init: bool
    firings: list[Firing] = field(default_factory=list)

    @property
    def spider_count(self) -> int:
        return self.diagram.num_spiders()


def compile_circuit(
    circuit: Circuit,
    opt_level: int = 1,
    zero_init: bool = True,
    on_fire: Callable[[Firing, ZXDiagram], None] | None = None,
) -> CompileResult:
    """Run every stage on a parsed circuit.

    With ``zero_init`` each wire starts with an extra ``HRZ(0)`` so that
    ``|+>`` input photons realize the ``|0...0>`` start state.
    """
    if opt_level not in (0, 1):
        raise ValueError(f"opt level must be 0 or 1, got {opt_level}")
    native = rewrite_to_native(transpile_to_basis(circuit))
    if zero_init:
        native = native.with_zero_init()
    d = as_graph_like(build_mgraph(native))
    firings: list[Firing] = []
    if opt_level:
        res = simplify(d, on_fire=on_fire)
        d, firings = res.diagram, res.firings
    errs = graph_like_violations(d)
    if errs:
        raise InvariantBreach("simplified diagram is not graph-like: " + errs[0])
    m = extract_pattern(d)
    plan = decompose(m)
    errs = reconstruction_errors(plan, m.vertices(), m.edges)
    if errs:
        raise InvariantBreach("decomposition does not reconstruct the m-graph: " + errs[0])
    prog = emit(plan, m)
    errs = check_program(prog)
    if errs:
        raise InvariantBreach("instruction program check failed: " + errs[0])
    return CompileResult(circuit, native, d, m, plan, prog, zero_init, firings)


def compile_qasm(text: str, **kwargs) -> CompileResult:
    return compile_circuit(parse_qasm(text), **kwargs)


def target_map(circuit: Circuit, zero_init: bool) -> np.ndarray:
    """The map a compiled pattern should realize on its open input legs.

    The initialization column applies ``H`` to every wire before the circuit.
    """
    u = unitary_of(circuit)
    if zero_init:
        hn = np.ones((1, 1), dtype=complex)
        for _ in range(circuit.num_qubits):
            hn = np.kron(hn, H_MAT)
        u = u @ hn
    return u


def pattern_deviation(circuit: Circuit, m: MGraph, zero_init: bool) -> float:
    """Max-norm gap between the post-selected pattern map and the circuit."""
    return deviation_up_to_scalar(run_pattern(m).dense(), target_map(circuit, zero_init))


def verify_result(res: CompileResult) -> float:
    return pattern_deviation(res.circuit, res.mgraph, res.zero_init)
