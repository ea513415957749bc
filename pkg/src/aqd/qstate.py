"""Dense state-vector and density-matrix arithmetic for small qubit registers.

States are plain numpy arrays: a 1-d array of ``2**n`` amplitudes is a pure
state, a ``(2**n, 2**n)`` array is a density matrix.  Qubit 0 is the leftmost
(most significant) label in a ket, so amplitude index ``i`` reads as the
binary string of ``i`` from left to right.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

MAX_QUBITS = 5

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
PSD_TOL = -1e-10


class StateError(ValueError):
    """Raised when an array is not a valid state, operator or basis."""


def num_qubits(s: np.ndarray) -> int:
    dim = s.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise StateError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise StateError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return n


def state_vector(amplitudes, tol: float = NORM_TOL) -> np.ndarray:
    """Validate and return ``amplitudes`` as a complex state vector."""
    psi = np.array(amplitudes, dtype=complex)
    if psi.ndim != 1:
        raise StateError("a state vector must be one-dimensional")
    num_qubits(psi)
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > tol:
        raise StateError(f"state norm^2 is {norm!r}, expected 1")
    return psi


def density_matrix(entries, tol: float = NORM_TOL) -> np.ndarray:
    """Validate and return ``entries`` as a density matrix.

    Checks Hermiticity and unit trace at ``tol`` and positivity with
    eigenvalues no lower than ``PSD_TOL``.
    """
    rho = np.array(entries, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateError("a density matrix must be square")
    num_qubits(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise StateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise StateError(f"density matrix trace is {tr!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < PSD_TOL:
        raise StateError("density matrix is not positive semidefinite")
    return rho


def ket(bits: str) -> np.ndarray:
    """Computational basis state, e.g. ``ket("0110")``."""
    if not bits or set(bits) - {"0", "1"}:
        raise StateError(f"invalid basis label {bits!r}")
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def superpose(terms: dict[str, complex]) -> np.ndarray:
    """Normalized superposition of labelled basis kets.

    >>> superpose({"00": 1, "11": 1})  # Bell state
    array([0.70710678+0.j, 0.        +0.j, 0.        +0.j, 0.70710678+0.j])
    """
    psi = sum(c * ket(label) for label, c in terms.items())
    return psi / np.linalg.norm(psi)


def to_density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def is_unitary(u: np.ndarray, tol: float = NORM_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two states of the same kind."""
    if a.ndim != b.ndim:
        raise StateError("cannot tensor a state vector with a density matrix")
    out = np.kron(a, b)
    num_qubits(out)
    return out


def _check_targets(targets: Sequence[int], n: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise StateError(f"duplicate target qubits in {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise StateError(f"target qubit {t} out of range for {n} qubits")
    return targets


def _apply_left(u: np.ndarray, targets: list[int], psi: np.ndarray, n: int) -> np.ndarray:
    # psi may carry one trailing batch axis (columns of a density matrix)
    k = len(targets)
    extra = psi.shape[1:]
    t = psi.reshape((2,) * n + extra)
    ut = u.reshape((2,) * (2 * k))
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), targets))
    # contracted axes land in front; move them back to their slots
    t = np.moveaxis(t, list(range(k)), targets)
    return t.reshape(psi.shape)


def apply_on_qubits(u: np.ndarray, targets: Sequence[int], s: np.ndarray) -> np.ndarray:
    """Apply ``u`` to the listed qubits of ``s``.

    ``u`` acts on ``targets`` in the listed order: its first tensor factor
    hits ``targets[0]``.  Density matrices are conjugated, ``U rho U^dag``.
    """
    n = num_qubits(s)
    targets = _check_targets(targets, n)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2 ** len(targets), 2 ** len(targets)):
        raise StateError(
            f"operator of shape {u.shape} does not act on {len(targets)} qubits"
        )
    if s.ndim == 1:
        return _apply_left(u, targets, s, n)
    half = _apply_left(u, targets, s, n)
    return _apply_left(u, targets, half.conj().T, n).conj().T


def embed(u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Full ``2**n`` matrix of ``u`` acting on ``targets`` and identity elsewhere."""
    targets = _check_targets(targets, n)
    return _apply_left(np.asarray(u, dtype=complex), targets, np.eye(2**n, dtype=complex), n)


def _check_perm(perm: Sequence[int], n: int) -> list[int]:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise StateError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permute_qubits(perm: Sequence[int], s: np.ndarray) -> np.ndarray:
    """Move the qubit at position ``i`` to position ``perm[i]``."""
    n = num_qubits(s)
    perm = _check_perm(perm, n)
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    if s.ndim == 1:
        return np.transpose(s.reshape((2,) * n), inv).reshape(s.shape)
    axes = inv + [n + i for i in inv]
    return np.transpose(s.reshape((2,) * (2 * n)), axes).reshape(s.shape)


def inverse_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def fidelity_pure(rho: np.ndarray, psi: np.ndarray) -> float:
    """Overlap ``<psi|rho|psi>`` of a state with a pure target.

    This is the squared Uhlmann fidelity.  ``rho`` may also be a pure state.
    """
    if rho.ndim == 1:
        rho = to_density(rho)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise StateError(f"dimension mismatch: {rho.shape} vs {psi.shape}")
    f = np.vdot(psi, rho @ psi)
    if abs(f.imag) > NORM_TOL:
        raise StateError(f"fidelity has imaginary part {f.imag!r}")
    return float(min(max(f.real, 0.0), 1.0))


def check_orthonormal(vectors: Sequence[np.ndarray], tol: float = ORTHO_TOL):
    """Return ``(i, j, overlap)`` for the first pair violating orthonormality, else None."""
    vs = np.array(vectors)
    gram = vs.conj() @ vs.T
    dev = np.abs(gram - np.eye(len(vs)))
    for i in range(len(vs)):
        for j in range(i, len(vs)):
            if dev[i, j] > tol:
                return i, j, float(abs(gram[i, j]))
    return None


def orthonormal_basis(vectors: Sequence[np.ndarray], tol: float = ORTHO_TOL) -> np.ndarray:
    """Stack ``vectors`` as rows after checking pairwise orthonormality."""
    basis = np.array(vectors, dtype=complex)
    if basis.ndim != 2:
        raise StateError("a basis is a list of equal-length state vectors")
    bad = check_orthonormal(basis, tol)
    if bad is not None:
        i, j, ov = bad
        raise StateError(f"basis vectors {i} and {j} have overlap {ov:.3g}")
    return basis


def basis_probabilities(s: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Outcome probabilities ``<phi_i|rho|phi_i>`` for each row of ``basis``."""
    if basis.shape[1] != s.shape[0]:
        raise StateError(f"basis dimension {basis.shape[1]} != state dimension {s.shape[0]}")
    if s.ndim == 1:
        probs = np.abs(basis.conj() @ s) ** 2
    else:
        probs = np.einsum("ij,jk,ik->i", basis.conj(), s, basis).real
    return np.clip(probs, 0.0, None)


def measure_in_basis(s: np.ndarray, basis: np.ndarray, rng: np.random.Generator):
    """Sample a measurement outcome; returns ``(index, probability)``."""
    probs = basis_probabilities(s, basis)
    total = probs.sum()
    if abs(total - 1.0) > ORTHO_TOL:
        raise StateError(f"basis probabilities sum to {total!r}; basis incomplete?")
    idx = int(rng.choice(len(probs), p=probs / total))
    return idx, float(probs[idx])
