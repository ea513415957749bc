"""Fidelity under noise, qubit efficiency and leakage accounting."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import qstate
from .channels import KrausChannel, apply_joint, joint_kraus, make_channel
from .pauligroup import OperatorGroup, get_group, matrix_of
from .statelib import EncodingScheme, get_state

MODELS = ("AD", "PD")


def _check_eta(eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"decoherence rate {eta} outside [0, 1]")
    return float(eta)


def closed_form_fidelity(model: str, travel_count: int, eta: float) -> float:
    """Closed-form average fidelity for the 4-qubit cluster scheme."""
    e = _check_eta(eta)
    model = model.upper()
    if model == "AD" and travel_count == 2:
        return (e**4 - 4 * e**3 + 12 * e**2 - 16 * e + 8) / 8
    if model == "AD" and travel_count == 1:
        return (e - 2) ** 2 / 4
    if model == "PD" and travel_count == 2:
        return ((e - 1) ** 4 + 1) / 2
    if model == "PD" and travel_count == 1:
        return (e**2 - 2 * e + 2) / 2
    raise ValueError(f"no closed form for model={model!r}, travel_count={travel_count}")


def encoding_pair_fidelity(
    scheme: EncodingScheme,
    bob_word,
    alice_word,
    alice_qubits: Sequence[int],
    travel_qubits: Sequence[int],
    ch: KrausChannel,
    leg_kraus: np.ndarray | None = None,
) -> float:
    """Fidelity for one (Bob, Alice) encoding pair.

    Noise hits the travel qubits after Bob encodes (outbound leg) and again
    after Alice encodes (return leg).
    """
    if leg_kraus is None:
        leg_kraus = joint_kraus(ch, travel_qubits, scheme.n)
    psi_b = qstate.apply_on_qubits(
        matrix_of(bob_word), scheme.encoded_qubits, scheme.state.amplitudes
    )
    ua = matrix_of(alice_word)
    target = qstate.apply_on_qubits(ua, alice_qubits, psi_b)
    rho = apply_joint(qstate.to_density(psi_b), leg_kraus)
    rho = qstate.apply_on_qubits(ua, alice_qubits, rho)
    rho = apply_joint(rho, leg_kraus)
    return qstate.fidelity_pure(rho, target)


def average_fidelity(
    scheme: EncodingScheme,
    alice_group: OperatorGroup,
    travel_qubits: Sequence[int],
    ch: KrausChannel,
    alice_qubits: Sequence[int] | None = None,
    bob_words: Iterable | None = None,
) -> float:
    """Uniform average of the fidelity over every (Bob, Alice) encoding pair.

    Alice acts on ``alice_qubits``, by default the first ``alice_group.n``
    travel qubits.  ``bob_words`` restricts Bob's side of the average.
    """
    travel_qubits = tuple(travel_qubits)
    if alice_qubits is None:
        if alice_group.n > len(travel_qubits):
            raise ValueError("Alice's group acts on more qubits than travel")
        alice_qubits = travel_qubits[: alice_group.n]
    if not set(alice_qubits) <= set(travel_qubits):
        raise ValueError("Alice can only encode on travel qubits")
    bob_words = scheme.group.canonical if bob_words is None else tuple(bob_words)
    leg_kraus = joint_kraus(ch, travel_qubits, scheme.n)
    total = 0.0
    count = 0
    for b in bob_words:
        for a in alice_group.canonical:
            total += encoding_pair_fidelity(
                scheme, b, a, alice_qubits, travel_qubits, ch, leg_kraus
            )
            count += 1
    return total / count


@dataclass(frozen=True)
class ReferenceSetup:
    """The 4-qubit cluster scheme used for the noise curves."""

    scheme: EncodingScheme
    alice_group: OperatorGroup
    travel_qubits: tuple[int, ...]


def reference_setup(travel_count: int) -> ReferenceSetup:
    """Cluster state with Bob encoding from G2 on the qubits found by search.

    One travel qubit: Alice encodes G1 on the first of Bob's encoded qubits.
    Two travel qubits: the outbound pair is a Z-correlated pair (qubits 0
    and 1 here) and Alice encodes 3 bits from G2^1(8) on it.
    """
    scheme = EncodingScheme.search(get_state("cluster4"), get_group("G2"))
    if travel_count == 1:
        return ReferenceSetup(scheme, get_group("G1"), (scheme.encoded_qubits[0],))
    if travel_count == 2:
        return ReferenceSetup(scheme, get_group("G2^1(8)"), (0, 1))
    raise ValueError("travel_count must be 1 or 2")


def simulated_fidelity(model: str, travel_count: int, eta: float) -> float:
    setup = reference_setup(travel_count)
    return average_fidelity(
        setup.scheme, setup.alice_group, setup.travel_qubits, make_channel(model, eta)
    )


@dataclass(frozen=True)
class FidelityPoint:
    model: str
    travel_count: int
    eta: float
    fidelity_closed: float
    fidelity_simulated: float
    state_name: str = "cluster4"

    @property
    def fidelity(self) -> float:
        return self.fidelity_simulated

    @property
    def abs_err(self) -> float:
        return abs(self.fidelity_closed - self.fidelity_simulated)


def eta_grid(step: float = 0.05, start: float = 0.0, stop: float = 1.0) -> list[float]:
    if step <= 0:
        raise ValueError("grid step must be positive")
    if not 0.0 <= start <= stop <= 1.0:
        raise ValueError("grid must lie inside [0, 1]")
    count = int(np.floor((stop - start) / step + 1e-9))
    return [round(start + k * step, 12) for k in range(count + 1)]


def sweep(model: str, travel_count: int, grid: Iterable[float]) -> list[FidelityPoint]:
    model = model.upper()
    if model not in MODELS:
        raise ValueError(f"unknown noise model {model!r}")
    setup = reference_setup(travel_count)
    points = []
    for eta in grid:
        ch = make_channel(model, eta)
        sim = average_fidelity(setup.scheme, setup.alice_group, setup.travel_qubits, ch)
        points.append(FidelityPoint(model, travel_count, float(eta),
                                    closed_form_fidelity(model, travel_count, eta), sim))
    return points


def max_abs_err(points: Sequence[FidelityPoint]) -> float:
    return max((p.abs_err for p in points), default=0.0)


CSV_HEADER = ("model", "travel_count", "eta", "fidelity_closed", "fidelity_simulated", "abs_err")


def sweep_csv(points: Sequence[FidelityPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([p.model, p.travel_count, f"{p.eta:.12g}", f"{p.fidelity_closed:.17g}",
                    f"{p.fidelity_simulated:.17g}", f"{p.abs_err:.3e}"])
    return buf.getvalue()


def sweep_json(points: Sequence[FidelityPoint]) -> str:
    rows = [dict(asdict(p), abs_err=p.abs_err) for p in points]
    return json.dumps({"points": rows, "max_abs_err": max_abs_err(points)}, indent=2)


# --- efficiency and leakage ---------------------------------------------------

@dataclass(frozen=True)
class EfficiencyInput:
    """Per-copy resource count.

    c: message bits; Q: qubits in the channel state; t: travel qubits, each
    matched by one decoy; b: classical bits announced for decoding.
    """

    c: int
    Q: int
    t: int
    b: int
    copies: int = 1
    qsdc_overhead: int = 0

    def __post_init__(self):
        for name in ("c", "Q", "t", "b", "copies", "qsdc_overhead"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def qubits(self) -> int:
        return self.Q + 2 * self.t


PRESETS = {
    "bell-qd": EfficiencyInput(c=4, Q=2, t=1, b=2),
    "cluster-qd": EfficiencyInput(c=8, Q=4, t=2, b=4),
    "cluster-aqd": EfficiencyInput(c=6, Q=4, t=1, b=4),
    "ghz-qd": EfficiencyInput(c=6, Q=3, t=2, b=3),
    "ghz-aqd": EfficiencyInput(c=5, Q=3, t=1, b=3),
}

QSDC_OVERHEAD = 4  # 2 channel qubits + 2 decoys to send 2 bits naming the initial state


def efficiency_fraction(inp: EfficiencyInput) -> Fraction:
    """c / (q + b) with q = Q + 2t, scaled to ``copies`` plus any fixed overhead."""
    den = (inp.qubits + inp.b) * inp.copies + inp.qsdc_overhead
    if den == 0:
        raise ZeroDivisionError("qubit efficiency undefined: no qubits and no classical bits")
    return Fraction(inp.c * inp.copies, den)


def qubit_efficiency(inp: EfficiencyInput) -> float:
    return float(efficiency_fraction(inp))


def qsdc_amortized_efficiency(
    per_copy: EfficiencyInput, copies: int | None = None, overhead: int = QSDC_OVERHEAD
) -> Fraction:
    """Efficiency when the initial state is sent once by QSDC.

    ``copies=None`` gives the large-copy limit, where the fixed overhead
    vanishes.
    """
    if copies is None:
        return efficiency_fraction(EfficiencyInput(per_copy.c, per_copy.Q, per_copy.t, per_copy.b))
    return efficiency_fraction(EfficiencyInput(
        per_copy.c, per_copy.Q, per_copy.t, per_copy.b, copies=copies, qsdc_overhead=overhead,
    ))


def leakage_bits(m: int, n: int, secret_initial_state: bool = False) -> int:
    """Bits exposed by the public announcement.

    Total encoded bits minus what Eve must learn (the smaller party's
    encoding); zero when the initial state is kept secret.
    """
    if m < 0 or n < 0:
        raise ValueError("bit counts must be non-negative")
    if secret_initial_state:
        return 0
    return (m + n) - min(m, n)
