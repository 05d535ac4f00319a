import math
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import load_bench
from oneway.frontend import CZ, HRZ, NativeSeq
from oneway.linalg import deviation_up_to_scalar
from oneway.mgraph import build_mgraph
from oneway.pipeline import compile_circuit, target_map
from oneway.sim.pattern import (
    UnsupportedPatternError,
    chain_path,
    correction_matrix,
    pattern_width,
    run_pattern,
)
from oneway.sim.statevector import SizeCapError
from oneway.sim.unitary import hrz_mat


def single_step(alpha):
    return build_mgraph(NativeSeq(1, [HRZ(0, -alpha)]))


def test_single_step_teleports_hrz():
    rng = random.Random(21)
    for _ in range(50):
        alpha = rng.uniform(0, 2 * math.pi)
        got = run_pattern(single_step(alpha))
        assert deviation_up_to_scalar(got, hrz_mat(-alpha)) <= 1e-10


def test_map_shape():
    m = build_mgraph(NativeSeq(2, [HRZ(0, 0.2), CZ(0, 1)]))
    got = run_pattern(m)
    assert (got.rows, got.cols) == (4, 4)


def test_grover_compiled_matches_circuit():
    c = load_bench("grover-n2")
    res = compile_circuit(c)
    assert deviation_up_to_scalar(run_pattern(res.mgraph), target_map(c, True)) <= 1e-8


def test_output_correction_matrix():
    assert np.allclose(correction_matrix(Fraction(0), False), np.eye(2))
    assert np.allclose(correction_matrix(0.3, True), hrz_mat(0.3))


def _random_chain(rng):
    k = rng.randint(1, 8)
    return build_mgraph(NativeSeq(1, [HRZ(0, rng.uniform(0, 2 * math.pi)) for _ in range(k)]))


def test_feedforward_agrees_with_postselection():
    rng = random.Random(22)
    nrng = np.random.default_rng(22)
    worst = 0.0
    for _ in range(100):
        m = _random_chain(rng)
        ref = run_pattern(m)
        run = run_pattern(m, "sample_with_feedforward", rng=nrng)
        assert [v for v, _ in run.outcomes] == m.order
        worst = max(worst, deviation_up_to_scalar(run.map, ref))
    assert worst <= 1e-8


def test_feedforward_sees_both_outcomes():
    nrng = np.random.default_rng(1)
    m = build_mgraph(NativeSeq(1, [HRZ(0, 0.7)] * 6))
    seen = {k for _ in range(20) for _, k in run_pattern(m, "sample_with_feedforward", rng=nrng).outcomes}
    assert seen == {0, 1}


def test_feedforward_rejects_non_chain():
    m = build_mgraph(NativeSeq(2, [HRZ(0, 0.1), CZ(0, 1), HRZ(1, 0.3)]))
    with pytest.raises(UnsupportedPatternError):
        run_pattern(m, "sample_with_feedforward", rng=np.random.default_rng(0))


def test_chain_path_order():
    m = build_mgraph(NativeSeq(1, [HRZ(0, 0.1), HRZ(0, 0.2)]))
    assert chain_path(m) == [0, 1, 2]


def test_unknown_mode():
    with pytest.raises(ValueError, match="mode"):
        run_pattern(single_step(0.1), "magic")


def test_width_cap_enforced():
    m = build_mgraph(NativeSeq(3, [HRZ(q, 0.1) for q in range(3)]))
    assert pattern_width(m) >= 3
    with pytest.raises(SizeCapError):
        run_pattern(m, cap=3)
