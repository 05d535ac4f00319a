import math
from fractions import Fraction

import pytest

from conftest import load_bench
from oneway.decompose import decompose
from oneway.emit import (
    EmitError,
    InstructionProgram,
    check_program,
    count_components,
    emit,
    plate_settings,
    register_convention,
    report_csv,
    report_text,
    stats,
)
from oneway.mgraph import MGraph
from oneway.pipeline import compile_circuit


def graph(n, edges, outputs=(), angle=Fraction(0)):
    m = MGraph()
    for v in range(n):
        m.add_vertex(v, None if v in outputs else angle, "output" if v in outputs else "body")
    m.edges = {tuple(sorted(e)) for e in edges}
    m.order = [v for v in range(n) if v not in outputs]
    m.outputs = list(outputs)
    m.validate()
    return m


def program(m):
    return emit(decompose(m), m)


def test_star_uses_ghz_mode():
    prog = program(graph(4, [(0, 1), (0, 2), (0, 3)]))
    (block,) = prog.entangle
    assert block["mode"] == "GHZ"
    assert block["mode_hwp_deg"] == 22.5
    assert block["h_corrections"] == [1, 2, 3]


def test_path_uses_psi_mode_with_end_corrections():
    prog = program(graph(4, [(0, 1), (1, 2), (2, 3)]))
    (block,) = prog.entangle
    assert block["mode"] == "PSI"
    assert block["mode_hwp_deg"] == 0.0
    assert block["h_corrections"] == [0, 3]
    assert block["pbs_links"] == [[0, 1], [1, 2], [2, 3]]


def test_zero_angle_plates():
    assert plate_settings(0.0) == (0.0, 22.5)


def test_plate_settings_follow_angle():
    q, h = plate_settings(math.pi / 2)
    assert (q, h) == (45.0, 22.5)
    assert plate_settings(-math.pi / 2)[0] == 135.0


def test_custom_convention():
    register_convention("flat", lambda a: (0.0, 0.0))
    m = graph(2, [(0, 1)], angle=Fraction(1, 4))
    prog = emit(decompose(m), m, convention="flat")
    assert all(x["qwp_deg"] == 0.0 for x in prog.measurements)
    with pytest.raises(EmitError):
        emit(decompose(m), m, convention="missing")


def test_single_measured_photon_components():
    prog = program(graph(1, []))
    assert count_components(prog).total == 7


def test_empty_program_has_no_components():
    assert count_components(InstructionProgram()).total == 0


def test_output_photon_components():
    # source + prep HWP + two detectors
    assert count_components(program(graph(1, [], outputs=(0,)))).total == 4


def test_conservation_and_ordering():
    m = graph(10, [(0, 1), (1, 3), (3, 4), (8, 9), (2, 0), (2, 5), (2, 7), (2, 9), (6, 5), (6, 7), (6, 9)],
              outputs=(4, 8))
    plan = decompose(m)
    prog = emit(plan, m)
    assert check_program(prog) == []
    assert len(prog.sources) == plan.photon_count
    consumed = {f["consume"] for f in prog.fusions}
    assert len(prog.measurements) + len(prog.outputs) + len(consumed) == len(prog.sources)
    assert [x["node"] for x in prog.measurements] == m.order
    steps = [op for op, _ in prog.steps()]
    assert steps.index("measure") > max(i for i, op in enumerate(steps) if op == "fuse")


def test_check_program_flags_violations():
    prog = program(graph(3, [(0, 1), (1, 2)]))
    prog.outputs.append(prog.measurements[0]["photon"])
    assert check_program(prog)


def test_mismatched_plan_rejected():
    m = graph(3, [(0, 1), (1, 2)])
    other = decompose(graph(3, [(0, 1)]))
    with pytest.raises(EmitError):
        emit(other, m)


def test_emit_deterministic():
    c = load_bench("teleportation-n3")
    assert compile_circuit(c).program.to_json() == compile_circuit(c).program.to_json()


@pytest.mark.parametrize("name", ["grover-n2", "deutsch-n2", "cat-state-n4"])
def test_table_rows_single_linear(name):
    res = compile_circuit(load_bench(name))
    row = stats(res.program, res.plan, name)
    assert (row["ghz"], row["linear"]) == (0, 1)


def test_grover_linear_block_of_four():
    res = compile_circuit(load_bench("grover-n2"))
    (block,) = res.program.entangle
    assert block["kind"] == "LINEAR" and len(block["photons"]) == 4


def test_components_monotone_in_photons(bench_dir):
    rows = []
    for path in sorted(bench_dir.glob("*.qasm")):
        res = compile_circuit(load_bench(path.stem))
        rows.append(stats(res.program, res.plan, path.stem))
    for a in rows:
        for b in rows:
            if a["photons"] < b["photons"]:
                assert a["components"] <= b["components"], (a, b)


def test_reports():
    rows = [{"circuit": "x", "ghz": 1, "linear": 2, "photons": 9, "components": 60}]
    assert report_csv(rows).splitlines() == ["circuit,ghz,linear,photons,components", "x,1,2,9,60"]
    text = report_text(rows).splitlines()
    assert text[0].split() == ["circuit", "ghz", "linear", "photons", "components"]
    assert text[2].split() == ["x", "1", "2", "9", "60"]
    assert len(report_text([]).splitlines()) == 2
