import itertools
import math

import numpy as np
import pytest

from qworlds.algorithms import (
    STAGES,
    ClassicalOracle,
    classical_single_query,
    classical_trace,
    deutsch_run,
    pipeline_run,
)
from qworlds.errors import DimensionError, PromiseViolation
from qworlds.oracle import BooleanFunction, FunctionClass, apply_uf, classify
from qworlds.statecore import RegisterLayout, StateVector, basis_state, fidelity

S = 1 / math.sqrt(2)
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
ONE_BIT = [(0, 0), (0, 1), (1, 0), (1, 1)]


def dense_dj_p_zero(table):
    """All-zero probability from explicit Kronecker-product matrices."""
    n = int(math.log2(len(table)))
    dim = 1 << (n + 1)
    uf = np.zeros((dim, dim))
    for x, fx in enumerate(table):
        for y in (0, 1):
            uf[(x << 1) | (y ^ fx), (x << 1) | y] = 1
    h_all = np.ones((1, 1))
    for _ in range(n + 1):
        h_all = np.kron(h_all, H)
    h_a = np.ones((1, 1))
    for _ in range(n):
        h_a = np.kron(h_a, H)
    h_a = np.kron(h_a, np.eye(2))
    psi = np.zeros(dim)
    psi[1] = 1
    psi = h_a @ uf @ h_all @ psi
    return float(abs(psi[0]) ** 2 + abs(psi[1]) ** 2)


@pytest.mark.parametrize("table", ONE_BIT)
def test_deutsch_is_deterministic(table):
    f = BooleanFunction(1, table)
    res = deutsch_run(f, rng_seed=11)
    assert res.verdict == classify(f).value
    assert abs(res.outcome_probability - 1.0) < 1e-12
    assert (res.outcome_bit == 0) == (res.verdict == "constant")


def test_deutsch_examples():
    r = deutsch_run(BooleanFunction(1, (0, 0)))
    assert (r.outcome_bit, r.verdict) == (0, "constant")
    r = deutsch_run(BooleanFunction(1, (0, 1)))
    assert (r.outcome_bit, r.verdict) == (1, "balanced")
    r = deutsch_run(BooleanFunction(1, (1, 1)))
    assert r.outcome_bit == 0
    # Register B keeps the (|0> - |1>)/sqrt(2) it was given by Hadamard-1.
    target = StateVector([S, -S, 0, 0])
    assert fidelity(r.trace.stage("hadamard2").state, target) > 1 - 1e-12


def test_deutsch_rejects_wider_function():
    with pytest.raises(DimensionError):
        deutsch_run(BooleanFunction(2, (0, 0, 1, 1)))


def test_trace_completeness():
    res = pipeline_run(BooleanFunction(2, (0, 1, 1, 0)), 3)
    stages = [s.stage for s in res.trace]
    assert stages == list(STAGES)
    assert [s.step_index for s in res.trace] == list(range(5))
    for s in res.trace:
        assert abs(s.state.norm() - 1) < 1e-12


@pytest.mark.parametrize("table", ONE_BIT)
def test_pipeline_n1_equals_deutsch(table):
    f = BooleanFunction(1, table)
    a, b = deutsch_run(f, 5), pipeline_run(f, 5)
    assert (a.verdict, a.outcome_bit) == (b.verdict, b.outcome_bit)
    assert a.outcome_probability == b.outcome_probability
    for sa, sb in zip(a.trace, b.trace):
        np.testing.assert_array_equal(sa.state.amps, sb.state.amps)


@pytest.mark.parametrize("table", [(0, 0, 0, 0), (0, 0, 1, 1), (1, 1, 1, 1), (0, 1, 1, 0)])
def test_pipeline_n2_against_dense_simulation(table):
    expected = dense_dj_p_zero(table)
    res = pipeline_run(BooleanFunction(2, table))
    assert abs(res.p_all_zero - expected) < 1e-12


def test_pipeline_n2_frozen_values():
    assert abs(pipeline_run(BooleanFunction(2, (0, 0, 0, 0))).p_all_zero - 1.0) < 1e-12
    assert abs(pipeline_run(BooleanFunction(2, (0, 0, 1, 1))).p_all_zero) < 1e-12


def test_promise_violation():
    with pytest.raises(PromiseViolation):
        pipeline_run(BooleanFunction(2, (0, 0, 0, 1)))


def test_promise_soundness_exhaustive():
    for n in range(1, 5):
        for table in itertools.product((0, 1), repeat=1 << n):
            f = BooleanFunction(n, table)
            cls = classify(f)
            if cls is FunctionClass.NEITHER:
                continue
            res = pipeline_run(f, rng_seed=n)
            assert res.verdict == cls.value
            assert abs(res.outcome_probability - 1.0) < 1e-12


def test_stage_linearity():
    rng = np.random.default_rng(4)
    for n in range(1, 4):
        f = BooleanFunction.random(n, rng)
        layout = RegisterLayout(n, 1)
        coeffs = rng.normal(size=(1 << n, 2)) + 1j * rng.normal(size=(1 << n, 2))
        coeffs /= np.linalg.norm(coeffs)
        total = np.zeros(1 << (n + 1), dtype=complex)
        for alpha in range(1 << n):
            for y in (0, 1):
                image = apply_uf(basis_state(n + 1, (alpha << 1) | y), f, layout)
                np.testing.assert_array_equal(image.amps, basis_state(n + 1, (alpha << 1) | (y ^ f(alpha))).amps)
                total += coeffs[alpha, y] * image.amps
        out = apply_uf(StateVector(coeffs.reshape(-1)), f, layout)
        np.testing.assert_allclose(out.amps, total, atol=1e-12)


def test_classical_single_query():
    assert classical_single_query(BooleanFunction(1, (0, 1)), 1) == 1
    assert classical_single_query(BooleanFunction(1, (1, 1)), 0) == 1
    oracle = ClassicalOracle(BooleanFunction(1, (1, 0)))
    oracle.query(0)
    assert oracle.queries == 1
    with pytest.raises(DimensionError):
        classical_single_query(BooleanFunction(1, (0, 1)), 2)


def test_one_query_cannot_separate_classes():
    # f = 00 (constant) and f = 01 (balanced) answer the same at x = 0.
    assert classical_single_query(BooleanFunction(1, (0, 0)), 0) == classical_single_query(
        BooleanFunction(1, (0, 1)), 0
    )


def test_classical_trace_is_basis_states():
    trace = classical_trace(BooleanFunction(2, (0, 1, 1, 0)), 2)
    for step in trace:
        assert np.count_nonzero(step.state.amps) == 1
    assert np.flatnonzero(trace.steps[-1].state.amps)[0] == (2 << 1) | 1
