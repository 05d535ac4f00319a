import random
from fractions import Fraction
from pathlib import Path

import pytest

import oneway
from oneway.frontend import CZ, HRZ, Circuit, NativeSeq, parse_qasm
from oneway.zx.diagram import EType, VType, ZXDiagram

BENCH_DIR = Path(oneway.__file__).parent / "data" / "qasmbench"
BENCH_NAMES = sorted(p.stem for p in BENCH_DIR.glob("*.qasm"))

ONE_Q = ["h", "x", "y", "z", "s", "sdg", "t", "tdg", "sx"]
ONE_Q_PARAM = ["rx", "ry", "rz", "u1"]
TWO_Q = ["cx", "cz", "swap", "cy", "ch"]


def load_bench(name: str) -> Circuit:
    return parse_qasm((BENCH_DIR / f"{name}.qasm").read_text())


def random_angle(rng: random.Random):
    if rng.random() < 0.6:
        return Fraction(rng.randint(0, 7), 4)
    return rng.uniform(0.05, 6.2)


def random_circuit(rng: random.Random, max_qubits: int = 4, max_gates: int = 20) -> Circuit:
    n = rng.randint(1, max_qubits)
    c = Circuit(n)
    for _ in range(rng.randint(0, max_gates)):
        r = rng.random()
        if n >= 3 and r < 0.05:
            c.append("ccx", rng.sample(range(n), 3))
        elif n >= 2 and r < 0.35:
            c.append(rng.choice(TWO_Q), rng.sample(range(n), 2))
        elif r < 0.65:
            c.append(rng.choice(ONE_Q), [rng.randrange(n)])
        elif r < 0.9:
            c.append(rng.choice(ONE_Q_PARAM), [rng.randrange(n)], [random_angle(rng)])
        else:
            c.append("u3", [rng.randrange(n)], [random_angle(rng) for _ in range(3)])
    return c


def random_clifford_circuit(rng: random.Random, max_qubits: int = 4, max_gates: int = 20) -> Circuit:
    n = rng.randint(1, max_qubits)
    c = Circuit(n)
    for _ in range(rng.randint(1, max_gates)):
        if n >= 2 and rng.random() < 0.35:
            c.append(rng.choice(["cx", "cz", "swap"]), rng.sample(range(n), 2))
        else:
            c.append(rng.choice(["h", "s", "sdg", "x", "y", "z"]), [rng.randrange(n)])
    return c


def random_native(rng: random.Random, max_qubits: int = 4, max_ops: int = 16, clifford: bool = False) -> NativeSeq:
    n = rng.randint(1, max_qubits)
    ops = []
    for _ in range(rng.randint(0, max_ops)):
        if n > 1 and rng.random() < 0.35:
            a, b = rng.sample(range(n), 2)
            ops.append(CZ(a, b))
        else:
            ang = Fraction(rng.randint(0, 3), 2) if clifford else random_angle(rng)
            ops.append(HRZ(rng.randrange(n), ang))
    return NativeSeq(n, ops)


def random_graph(rng: random.Random, n: int, p: float = 0.4, connected: bool = True) -> list[tuple[int, int]]:
    edges = set()
    if connected:
        for v in range(1, n):
            u = rng.randrange(v)
            edges.add((u, v))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                edges.add((a, b))
    return sorted(edges)


def random_graph_like(rng: random.Random, max_spiders: int = 6, boundaries: int = 2) -> ZXDiagram:
    """Random graph-like diagram with mixed Clifford and non-Clifford phases."""
    d = ZXDiagram()
    n = rng.randint(2, max_spiders)

    def phase():
        r = rng.random()
        if r < 0.4:
            return Fraction(rng.randint(0, 1))
        if r < 0.65:
            return Fraction(rng.choice([1, 3]), 2)
        return random_angle(rng)

    vs = [d.add_vertex(VType.Z, phase()) for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.45:
                d.add_edge(vs[a], vs[b], EType.HADAMARD)
    for _ in range(rng.randint(0, boundaries)):
        b = d.add_output() if rng.random() < 0.5 else d.add_input()
        d.add_edge(b, rng.choice(vs), rng.choice([EType.PLAIN, EType.HADAMARD]))
    return d


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def bench_dir():
    return BENCH_DIR
