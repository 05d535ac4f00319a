"""Angle arithmetic shared by every stage of the compiler.

Two representations are used:

* ``Fraction`` -- an exact rational multiple of pi, normalized to ``[0, 2)``.
* ``float`` -- radians, normalized to ``[0, 2*pi)``.

Exactness is contagious only in one direction: combining a float with anything
yields a float. Clifford/Pauli tests only ever succeed on exact values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Phase = Union[Fraction, float]

TWO_PI = 2.0 * math.pi


def normalize(p: Phase | int) -> Phase:
    if isinstance(p, float):
        r = math.fmod(p, TWO_PI)
        if r < 0:
            r += TWO_PI
        # fmod can hand back exactly TWO_PI after the shift for tiny negatives
        return 0.0 if r >= TWO_PI else r
    return Fraction(p) % 2


def add(p: Phase, q: Phase) -> Phase:
    if isinstance(p, float) or isinstance(q, float):
        return normalize(to_radians(p) + to_radians(q))
    return (p + q) % 2


def neg(p: Phase) -> Phase:
    if isinstance(p, float):
        return normalize(-p)
    return (-p) % 2


def scale(p: Phase, k: Fraction | int) -> Phase:
    """Multiply a phase by a rational factor (used for half-angle splits)."""
    if isinstance(p, float):
        return normalize(p * float(k))
    return (p * Fraction(k)) % 2


def to_radians(p: Phase | int) -> float:
    if isinstance(p, float):
        return p
    return float(Fraction(p)) * math.pi


def is_exact(p: Phase) -> bool:
    return isinstance(p, Fraction)


def is_zero(p: Phase) -> bool:
    return isinstance(p, Fraction) and p == 0


def is_pauli(p: Phase) -> bool:
    """True for exact 0 or pi."""
    return isinstance(p, Fraction) and p.denominator == 1


def is_proper_clifford(p: Phase) -> bool:
    """True for exact +-pi/2."""
    return isinstance(p, Fraction) and p.denominator == 2


def is_clifford(p: Phase) -> bool:
    return is_pauli(p) or is_proper_clifford(p)


def approx_equal(p: Phase, q: Phase, tol: float = 1e-9) -> bool:
    d = math.fmod(abs(to_radians(p) - to_radians(q)), TWO_PI)
    return min(d, TWO_PI - d) < tol


def fmt(p: Phase) -> str:
    """Human-readable form, ``kπ/d`` for exact phases."""
    if isinstance(p, float):
        return f"{p:.6g}"
    p = Fraction(p)
    if p == 0:
        return "0"
    num = "π" if p.numerator == 1 else f"{p.numerator}π"
    return num if p.denominator == 1 else f"{num}/{p.denominator}"


def to_json(p: Phase | None) -> dict:
    """Serialize as ``{angle_num, angle_den}`` (units of pi) or ``{angle}`` (radians)."""
    if p is None:
        return {"angle_num": None, "angle_den": None}
    if isinstance(p, float):
        return {"angle": p}
    return {"angle_num": p.numerator, "angle_den": p.denominator}


def from_json(obj: dict) -> Phase | None:
    if obj.get("angle") is not None:
        return normalize(float(obj["angle"]))
    if obj.get("angle_num") is None:
        return None
    return normalize(Fraction(int(obj["angle_num"]), int(obj["angle_den"])))
