import math

import numpy as np
import pytest

from qworlds.errors import DimensionError
from qworlds.infometrics import (
    Ensemble,
    EntropyReport,
    deutsch_output_parity,
    measurement_entropy,
    preparation_entropy,
    random_product_basis,
    shannon_entropy,
    storage_retrieval_bound,
    von_neumann_entropy,
)
from qworlds.algorithms import deutsch_run
from qworlds.oracle import BooleanFunction
from qworlds.statecore import (
    DensityMatrix,
    FullMatrixGate,
    HadamardLayer,
    StateVector,
    basis_state,
    density_from_state,
    haar_state,
    haar_unitary,
    outcome_distribution,
    partial_trace,
)

S = 1 / math.sqrt(2)
IDENTITY = HadamardLayer(())


def svd_entropy(m):
    """Entropy from singular values; equals eigenvalues for PSD matrices."""
    s = np.linalg.svd(m, compute_uv=False)
    s = s[s > 1e-15]
    return float(-np.sum(s * np.log2(s)))


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@pytest.mark.parametrize(
    "dist,bits", [([1, 0], 0.0), ([0.5, 0.5], 1.0), ([0.25] * 4, 2.0), ([0.5, 0.25, 0.25], 1.5)]
)
def test_shannon(dist, bits):
    assert abs(shannon_entropy(dist) - bits) < 1e-15


def test_shannon_rejects():
    with pytest.raises(ValueError):
        shannon_entropy([1.5, -0.5])
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.4])


def test_von_neumann_examples():
    assert von_neumann_entropy(density_from_state(haar_state(3, np.random.default_rng(0)))) < 1e-9
    assert abs(von_neumann_entropy(DensityMatrix(np.eye(2) / 2)) - 1) < 1e-12
    bell = density_from_state(StateVector([S, 0, 0, S]))
    assert abs(von_neumann_entropy(partial_trace(bell, [0])) - 1) < 1e-12


def test_von_neumann_rejects_non_hermitian():
    with pytest.raises(ValueError):
        von_neumann_entropy(np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        von_neumann_entropy(np.diag([1.5, -0.5]))


def test_von_neumann_clips_tiny_negatives():
    assert von_neumann_entropy(np.diag([1.0 + 1e-11, -1e-11])) == 0.0


def test_basis_independence():
    rng = np.random.default_rng(21)
    for _ in range(100):
        d = 4
        w = rng.dirichlet(np.ones(d))
        v = haar_unitary(d, rng)
        rho = v @ np.diag(w) @ v.conj().T
        rho = (rho + rho.conj().T) / 2
        u = haar_unitary(d, rng)
        rot = u @ rho @ u.conj().T
        rot = (rot + rot.conj().T) / 2
        assert abs(von_neumann_entropy(rho) - von_neumann_entropy(rot)) < 1e-9


def test_preparation_examples():
    r = preparation_entropy(Ensemble.of([(1.0, basis_state(1, 0))]))
    assert (r.shannon_bits, r.von_neumann_bits, r.bound_satisfied) == (0.0, 0.0, True)
    r = preparation_entropy(Ensemble.of([(0.5, basis_state(1, 0)), (0.5, basis_state(1, 1))]))
    assert abs(r.shannon_bits - 1) < 1e-12 and abs(r.von_neumann_bits - 1) < 1e-12


def test_preparation_nonorthogonal_closed_form():
    r = preparation_entropy(Ensemble.of([(0.5, basis_state(1, 0)), (0.5, StateVector([S, S]))]))
    # rho = [[3/4, 1/4], [1/4, 1/4]]: trace 1, determinant 1/8.
    tr, det = 1.0, 0.75 * 0.25 - 0.25 * 0.25
    lam = (tr + math.sqrt(tr * tr - 4 * det)) / 2
    assert abs(lam - (1 + S) / 2) < 1e-15
    assert abs(r.shannon_bits - 1) < 1e-12
    assert abs(r.von_neumann_bits - h2(lam)) < 1e-12
    assert r.bound_satisfied


def test_ensemble_validation():
    with pytest.raises(ValueError):
        Ensemble.of([(0.5, basis_state(1, 0))])
    with pytest.raises(DimensionError):
        Ensemble.of([(0.5, basis_state(1, 0)), (0.5, basis_state(2, 0))])


def test_entropy_report_invariant():
    assert EntropyReport(1.0, 1.0 + 5e-10).bound_satisfied
    assert not EntropyReport(1.0, 1.1).bound_satisfied


def test_measurement_examples():
    r = measurement_entropy(basis_state(1, 0), IDENTITY)
    assert r.shannon_bits == 0.0
    r = measurement_entropy(StateVector([S, S]), IDENTITY)
    assert abs(r.shannon_bits - 1) < 1e-12 and r.von_neumann_bits < 1e-9 and r.bound_satisfied


def test_measurement_dimension_mismatch():
    with pytest.raises(DimensionError):
        measurement_entropy(basis_state(1, 0), FullMatrixGate(np.eye(4)))


def test_measurement_bound_pure_sweep():
    rng = np.random.default_rng(500)
    for _ in range(500):
        psi = haar_state(2, rng)
        basis = FullMatrixGate(haar_unitary(4, rng))
        r = measurement_entropy(psi, basis)
        assert abs(r.von_neumann_bits - svd_entropy(np.outer(psi.amps, psi.amps.conj()))) < 1e-9
        assert r.slack >= -1e-9


def test_measurement_of_mixed_state_uses_rotation():
    rho = DensityMatrix(np.diag([0.5, 0.5, 0.0, 0.0]))
    r = measurement_entropy(rho, IDENTITY)
    assert abs(r.shannon_bits - 1) < 1e-12 and abs(r.von_neumann_bits - 1) < 1e-12
    r = measurement_entropy(rho, HadamardLayer([1]))
    assert abs(r.shannon_bits - 1) < 1e-12


def test_storage_retrieval_bound():
    assert abs(storage_retrieval_bound(1).max_retrievable_bits - 1.0) < 1e-12
    r = storage_retrieval_bound(2)
    assert abs(r.max_retrievable_bits - 2.0) < 1e-12 and not r.exceeded
    assert r.battery_size == 4 + 1 + 100


def test_deutsch_readout_at_most_one_bit():
    for table in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        st = deutsch_run(BooleanFunction(1, table)).trace.stage("hadamard2").state
        assert shannon_entropy(outcome_distribution(st, [0])) <= 1.0


def test_output_parity():
    p = deutsch_output_parity()
    assert abs(p.quantum_bits - 1) < 1e-12 and abs(p.classical_bits - 1) < 1e-12
    assert abs(p.quantum_bits - p.classical_bits) < 1e-12


def test_product_basis_is_unitary():
    g = random_product_basis(3, np.random.default_rng(0))
    np.testing.assert_allclose(g.matrix.conj().T @ g.matrix, np.eye(8), atol=1e-12)
