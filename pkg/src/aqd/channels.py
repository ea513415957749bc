"""Amplitude- and phase-damping Kraus channels acting on travel qubits.

Home qubits never see noise.  Each travel qubit is hit independently by the
single-qubit channel once per traversal, so a full round trip (out to Alice
and back) is two applications.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qstate

KINDS = ("AD", "PD", "identity")


@dataclass(frozen=True)
class KrausChannel:
    kind: str
    rate: float
    kraus_ops: tuple[np.ndarray, ...] = field(compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        completeness = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(completeness - np.eye(2))) > qstate.NORM_TOL:
            raise ValueError("Kraus operators do not sum to the identity")
        object.__setattr__(self, "kraus_ops", ops)

    def to_json(self) -> dict:
        return {"kind": self.kind, "rate": self.rate}

    def apply_single(self, rho: np.ndarray) -> np.ndarray:
        """Act on a lone 2x2 density matrix (decoy qubits)."""
        return sum(k @ rho @ k.conj().T for k in self.kraus_ops)


def _check_rate(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"decoherence rate {eta} outside [0, 1]")
    return eta


def ad_channel(eta: float) -> KrausChannel:
    """E0 = |0><0| + sqrt(1-eta)|1><1|,  E1 = sqrt(eta)|0><1|."""
    eta = _check_rate(eta)
    e0 = np.array([[1, 0], [0, np.sqrt(1 - eta)]], dtype=complex)
    e1 = np.array([[0, np.sqrt(eta)], [0, 0]], dtype=complex)
    return KrausChannel("AD", eta, (e0, e1))


def pd_channel(eta: float) -> KrausChannel:
    """E0 = sqrt(1-eta) I,  E1 = sqrt(eta)|0><0|,  E2 = sqrt(eta)|1><1|."""
    eta = _check_rate(eta)
    e0 = np.sqrt(1 - eta) * np.eye(2, dtype=complex)
    e1 = np.sqrt(eta) * np.diag([1, 0]).astype(complex)
    e2 = np.sqrt(eta) * np.diag([0, 1]).astype(complex)
    return KrausChannel("PD", eta, (e0, e1, e2))


def identity_channel() -> KrausChannel:
    return KrausChannel("identity", 0.0, (np.eye(2, dtype=complex),))


def make_channel(kind: str, eta: float = 0.0) -> KrausChannel:
    kind = kind.upper() if kind.lower() != "identity" else "identity"
    if kind == "AD":
        return ad_channel(eta)
    if kind == "PD":
        return pd_channel(eta)
    if kind == "identity":
        return identity_channel()
    raise ValueError(f"unknown channel kind {kind!r}")


def channel_from_json(doc: dict | None) -> KrausChannel:
    if doc is None:
        return identity_channel()
    return make_channel(doc["kind"], doc.get("rate", 0.0))


@dataclass(frozen=True)
class TraversalPlan:
    travel_qubits: tuple[int, ...]
    traversals: int = 1

    def __post_init__(self):
        tq = tuple(int(q) for q in self.travel_qubits)
        if len(set(tq)) != len(tq):
            raise ValueError(f"duplicate travel qubits {tq}")
        if self.traversals not in (1, 2):
            raise ValueError("traversals must be 1 or 2")
        object.__setattr__(self, "travel_qubits", tq)


def apply_on_qubit(rho: np.ndarray, ch: KrausChannel, qubit: int) -> np.ndarray:
    """One application of ``ch`` to a single qubit of a register."""
    return sum(qstate.apply_on_qubits(k, [qubit], rho) for k in ch.kraus_ops)


def apply_noise(rho: np.ndarray, ch: KrausChannel, plan: TraversalPlan | Sequence[int]) -> np.ndarray:
    """Apply ``ch`` to every travel qubit, once per traversal.

    A bare sequence of qubit indices is read as a single traversal.
    """
    if not isinstance(plan, TraversalPlan):
        plan = TraversalPlan(tuple(plan))
    if rho.ndim == 1:
        rho = qstate.to_density(rho)
    n = qstate.num_qubits(rho)
    for q in plan.travel_qubits:
        if not 0 <= q < n:
            raise ValueError(f"travel qubit {q} out of range for {n} qubits")
    if ch.kind == "identity":
        return rho.copy()
    for _ in range(plan.traversals):
        for q in plan.travel_qubits:
            rho = apply_on_qubit(rho, ch, q)
    return rho


def joint_kraus(ch: KrausChannel, travel_qubits: Sequence[int], n: int) -> np.ndarray:
    """Full-register Kraus operators ``I ⊗ E_i1 ⊗ ... ⊗ E_it`` for every index tuple.

    Returns an array of shape ``(k**t, 2**n, 2**n)``.
    """
    ops = []
    for combo in itertools.product(ch.kraus_ops, repeat=len(travel_qubits)):
        m = np.eye(2**n, dtype=complex)
        for k, q in zip(combo, travel_qubits):
            m = qstate.embed(k, [q], n) @ m
        ops.append(m)
    return np.array(ops)


def apply_joint(rho: np.ndarray, kraus: np.ndarray) -> np.ndarray:
    """``sum_k K rho K^dag`` for a stack of full-register Kraus operators."""
    return np.sum(kraus @ rho @ kraus.conj().transpose(0, 2, 1), axis=0)
