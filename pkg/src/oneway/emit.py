"""Lower a decomposition plan to instructions for a polarization one-way processor.

Each subgraph occurrence is one photon. Photons are prepared in ``|+>`` by a
half-wave plate, entangled per subgraph by a chain of polarizing beam
splitters, glued by Type-1 fusions and finally measured with a QWP/HWP pair in
front of a PBS and two detectors.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable

from . import phase as ph
from .decompose import GHZ, LINEAR, DecompositionPlan, reconstruction_errors
from .mgraph import MGraph

PREP_HWP_DEG = 22.5
MODE_HWP_DEG = {GHZ: 22.5, LINEAR: 0.0}
MODE_NAME = {GHZ: "GHZ", LINEAR: "PSI"}


class EmitError(ValueError):
    pass


def _default_plates(alpha: float) -> tuple[float, float]:
    return math.degrees(alpha) / 2.0, 22.5


# name -> alpha (radians) -> (QWP degrees, HWP degrees)
PLATE_CONVENTIONS: dict[str, Callable[[float], tuple[float, float]]] = {
    "default": _default_plates,
}


def register_convention(name: str, fn: Callable[[float], tuple[float, float]]) -> None:
    PLATE_CONVENTIONS[name] = fn


def plate_settings(alpha: float, convention: str = "default") -> tuple[float, float]:
    try:
        fn = PLATE_CONVENTIONS[convention]
    except KeyError:
        raise EmitError(f"unknown plate convention {convention!r}") from None
    q, h = fn(alpha)
    return round(q % 180.0, 10), round(h % 180.0, 10)


def _corrections(kind: str, k: int) -> list[int]:
    """Positions that need a Hadamard to turn the source state into the graph state."""
    if k < 2:
        return []
    if kind == GHZ:
        return list(range(1, k))
    if k == 2:
        return [1]
    return [0, k - 1]


@dataclass
class InstructionProgram:
    sources: list[dict] = field(default_factory=list)
    prep: list[dict] = field(default_factory=list)
    entangle: list[dict] = field(default_factory=list)
    fusions: list[dict] = field(default_factory=list)
    measurements: list[dict] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    corrections: list[dict] = field(default_factory=list)
    postselect: dict = field(default_factory=dict)
    convention: str = "default"

    def to_dict(self) -> dict:
        return {
            "convention": self.convention,
            "sources": self.sources,
            "prep": self.prep,
            "entangle": self.entangle,
            "fusions": self.fusions,
            "measurements": self.measurements,
            "outputs": self.outputs,
            "corrections": self.corrections,
            "postselect": self.postselect,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def steps(self) -> list[tuple[str, int]]:
        """Flat execution sequence of (operation, photon) pairs."""
        seq = [("source", s["photon"]) for s in self.sources]
        seq += [("prep", p["photon"]) for p in self.prep]
        seq += [("entangle", pid) for e in self.entangle for pid in e["photons"]]
        for f in self.fusions:
            seq += [("fuse", f["keep"]), ("fuse", f["consume"])]
        seq += [("measure", x["photon"]) for x in self.measurements]
        seq += [("output", pid) for pid in self.outputs]
        return seq


def emit(plan: DecompositionPlan, m: MGraph, convention: str = "default") -> InstructionProgram:
    if convention not in PLATE_CONVENTIONS:
        raise EmitError(f"unknown plate convention {convention!r}")
    errs = reconstruction_errors(plan, m.vertices(), m.edges)
    if errs:
        raise EmitError("plan does not match m-graph: " + "; ".join(errs[:3]))
    prog = InstructionProgram(convention=convention)

    photon: dict[tuple[int, int], int] = {}
    for i, s in enumerate(plan.subgraphs):
        ids = []
        for p, v in enumerate(s.nodes):
            pid = len(photon)
            photon[(i, p)] = pid
            ids.append(pid)
            prog.sources.append({"photon": pid, "node": v, "subgraph": i, "position": p})
            prog.prep.append({"photon": pid, "hwp_deg": PREP_HWP_DEG})
        prog.entangle.append(
            {
                "subgraph": i,
                "kind": s.kind,
                "mode": MODE_NAME[s.kind],
                "mode_hwp_deg": MODE_HWP_DEG[s.kind] if len(ids) > 1 else None,
                "photons": ids,
                "pbs_links": [[ids[j], ids[j + 1]] for j in range(len(ids) - 1)],
                "h_corrections": [ids[p] for p in _corrections(s.kind, len(ids))],
            }
        )

    detector = 0
    for f in plan.fusions:
        prog.fusions.append(
            {
                "node": f.node,
                "keep": photon[f.keep],
                "consume": photon[f.consume],
                "detector": detector,
            }
        )
        detector += 1

    first = {v: occ[0] for v, occ in plan.occurrences().items()}
    for v in m.order:
        pid = photon[first[v]]
        alpha = m.angles[v]
        q, h = plate_settings(ph.to_radians(alpha), convention)
        entry = {"photon": pid, "node": v, "qwp_deg": q, "hwp_deg": h, "detectors": [detector, detector + 1]}
        entry.update(ph.to_json(alpha))
        prog.measurements.append(entry)
        detector += 2
    prog.outputs = [photon[first[v]] for v in m.outputs]
    for v in m.outputs:
        if v in m.corrections:
            theta, had = m.corrections[v]
            entry = {"photon": photon[first[v]], "node": v, "hadamard": had}
            entry.update(ph.to_json(theta))
            prog.corrections.append(entry)
    prog.postselect = {
        "fusion_detectors": [f["detector"] for f in prog.fusions],
        "fusion_clicks": 1,
        "measurement_clicks": 1,
    }
    return prog


def check_program(prog: InstructionProgram) -> list[str]:
    """Machine check of photon conservation and fusion-before-measurement."""
    errs = []
    pids = [s["photon"] for s in prog.sources]
    if len(set(pids)) != len(pids):
        errs.append("photon listed twice as a source")
    consumed = [f["consume"] for f in prog.fusions]
    measured = [x["photon"] for x in prog.measurements]
    if set(consumed) & (set(measured) | set(prog.outputs)):
        errs.append("a fusion-consumed photon is measured or output")
    if sorted(consumed + measured + prog.outputs) != sorted(pids):
        errs.append("photon conservation violated")
    seen_measure = False
    for op, _ in prog.steps():
        if op == "measure":
            seen_measure = True
        elif op == "fuse" and seen_measure:
            errs.append("fusion scheduled after a measurement")
            break
    return errs


@dataclass(frozen=True)
class ComponentTally:
    sources: int = 0
    hwp: int = 0
    qwp: int = 0
    pbs: int = 0
    detectors: int = 0

    @property
    def total(self) -> int:
        return self.sources + self.hwp + self.qwp + self.pbs + self.detectors

    def to_dict(self) -> dict:
        return {
            "sources": self.sources,
            "hwp": self.hwp,
            "qwp": self.qwp,
            "pbs": self.pbs,
            "detectors": self.detectors,
            "total": self.total,
        }


def count_components(prog: InstructionProgram) -> ComponentTally:
    n = len(prog.sources)
    blocks = [e for e in prog.entangle if len(e["photons"]) > 1]
    links = sum(len(e["pbs_links"]) for e in blocks)
    nf, nm, no = len(prog.fusions), len(prog.measurements), len(prog.outputs)
    nc = len(prog.corrections)
    return ComponentTally(
        sources=n,
        hwp=n + len(blocks) + nf + nm + nc,
        qwp=nm + nc,
        pbs=links + nf + nm,
        detectors=nf + 2 * nm + 2 * no,
    )


STATS_COLUMNS = ("circuit", "ghz", "linear", "photons", "components")


def stats(prog: InstructionProgram, plan: DecompositionPlan, name: str = "") -> dict:
    return {
        "circuit": name,
        "ghz": plan.ghz_count,
        "linear": plan.linear_count,
        "photons": plan.photon_count,
        "components": count_components(prog).total,
    }


def report_csv(rows: list[dict], columns=STATS_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def report_text(rows: list[dict], columns=STATS_COLUMNS) -> str:
    cells = [list(columns)] + [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = []
    for j, row in enumerate(cells):
        parts = [row[0].ljust(widths[0])] + [row[i].rjust(widths[i]) for i in range(1, len(row))]
        lines.append("  ".join(parts).rstrip())
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
