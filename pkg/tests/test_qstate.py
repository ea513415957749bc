import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from aqd import qstate

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def kron_all(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng, n):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return v / np.linalg.norm(v)


def test_ket_is_big_endian():
    assert np.argmax(qstate.ket("01")) == 1
    assert np.argmax(qstate.ket("10")) == 2


def test_state_vector_rejects_unnormalized():
    with pytest.raises(qstate.StateError):
        qstate.state_vector([1, 1])
    with pytest.raises(qstate.StateError):
        qstate.state_vector([1, 0, 0])


def test_density_matrix_checks():
    with pytest.raises(qstate.StateError):
        qstate.density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(qstate.StateError):
        qstate.density_matrix(np.array([[0.5, 0.5], [0, 0.5]]))
    rho = qstate.density_matrix(np.eye(2) / 2)
    assert rho.shape == (2, 2)


def test_apply_matches_kron_oracle():
    psi = qstate.ket("000")
    out = qstate.apply_on_qubits(X, [1], psi)
    assert np.allclose(out, kron_all(I2, X, I2) @ psi)
    assert np.allclose(qstate.embed(X, [2], 3), kron_all(I2, I2, X))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4))
def test_apply_on_density_is_conjugation(seed, n):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n + 1))
    targets = list(rng.permutation(n)[:k])
    u = random_unitary(rng, 2 ** k)
    rho = qstate.to_density(random_state(rng, n))
    full = qstate.embed(u, targets, n)
    assert np.allclose(qstate.apply_on_qubits(u, targets, rho), full @ rho @ full.conj().T)
    assert qstate.is_unitary(full)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4))
def test_unitaries_preserve_norm_and_trace(seed, n):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 2)
    q = int(rng.integers(0, n))
    psi = random_state(rng, n)
    assert np.linalg.norm(qstate.apply_on_qubits(u, [q], psi)) == pytest.approx(1, abs=1e-12)
    rho = qstate.apply_on_qubits(u, [q], qstate.to_density(psi))
    assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
    assert np.min(np.linalg.eigvalsh(rho)) > qstate.PSD_TOL


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(3)), st.integers(0, 2 ** 32 - 1))
def test_permute_qubits_roundtrip(perm, seed):
    psi = random_state(np.random.default_rng(seed), 3)
    moved = qstate.permute_qubits(perm, psi)
    back = qstate.permute_qubits(qstate.inverse_permutation(perm), moved)
    assert np.allclose(back, psi)


def test_permute_moves_qubit():
    # qubit 0 goes to position 2
    out = qstate.permute_qubits([2, 0, 1], qstate.ket("100"))
    assert np.allclose(out, qstate.ket("001"))


def test_fidelity_pure():
    psi = qstate.superpose({"00": 1, "11": 1})
    assert qstate.fidelity_pure(qstate.to_density(psi), psi) == pytest.approx(1)
    mixed = np.diag([0.5, 0, 0, 0.5])
    assert qstate.fidelity_pure(mixed, psi) == pytest.approx(0.5)


def test_check_orthonormal_reports_pair():
    a, b = qstate.ket("0"), (qstate.ket("0") + qstate.ket("1")) / np.sqrt(2)
    i, j, ov = qstate.check_orthonormal([a, b])
    assert (i, j) == (0, 1) and ov == pytest.approx(1 / np.sqrt(2))
    assert qstate.check_orthonormal([a, qstate.ket("1")]) is None


def test_measurement_statistics():
    rng = np.random.default_rng(5)
    plus = H @ qstate.ket("0")
    basis = np.array([qstate.ket("0"), qstate.ket("1")])
    hits = [qstate.measure_in_basis(plus, basis, rng)[0] for _ in range(4000)]
    assert abs(np.mean(hits) - 0.5) < 3 * np.sqrt(0.25 / 4000)


@given(arrays(np.float64, 4, elements=st.floats(-1, 1)))
def test_superpose_normalizes(v):
    if np.linalg.norm(v) < 1e-3:
        return
    psi = qstate.superpose({format(i, "02b"): x for i, x in enumerate(v) if x != 0})
    assert np.linalg.norm(psi) == pytest.approx(1)
