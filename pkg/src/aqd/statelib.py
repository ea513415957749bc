"""Channel-state catalog and densecodability checks.

A (state, group) pair is densecodable on a choice of qubits when applying
every group element to those qubits yields mutually orthonormal states.
The tables of candidate schemes are checked cell by cell; a cell whose state
or group has no concrete definition is reported UNVERIFIED rather than
guessed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qstate
from .pauligroup import (
    CATALOG as GROUPS,
    OperatorGroup,
    PauliWord,
    embeds_as_subgroup,
    matrix_of,
)

PASS, FAIL, UNVERIFIED = "PASS", "FAIL", "UNVERIFIED"

PROVENANCES = ("paper-explicit", "standard-literature", "searched")


class NotDensecodable(ValueError):
    def __init__(self, i: int, j: int, overlap: float, words=None):
        self.pair = (i, j)
        self.overlap = overlap
        detail = f"basis states {i} and {j} overlap with magnitude {overlap:.6g}"
        if words is not None:
            detail += f" ({words[0]} vs {words[1]})"
        super().__init__(detail)


@dataclass(frozen=True)
class NamedState:
    name: str
    amplitudes: np.ndarray = field(compare=False)
    provenance: str = "standard-literature"
    description: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "amplitudes", qstate.state_vector(self.amplitudes))

    @property
    def n(self) -> int:
        return qstate.num_qubits(self.amplitudes)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, doc: dict) -> NamedState:
        amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
        if len(amps) != 2 ** doc["n"]:
            raise ValueError(f"state {doc['name']!r}: {len(amps)} amplitudes for n={doc['n']}")
        return cls(doc["name"], amps, doc.get("provenance", "searched"))


def _s(terms: dict[str, complex]) -> np.ndarray:
    return qstate.superpose(terms)


def _build_states() -> dict[str, NamedState]:
    states = [
        NamedState("bell", _s({"00": 1, "11": 1}), "standard-literature", "2-qubit Bell state"),
        NamedState("ghz", _s({"000": 1, "111": 1}), "standard-literature", "3-qubit GHZ"),
        NamedState(
            "ghz_like", _s({"001": 1, "010": 1, "100": 1, "111": 1}),
            "searched", "3-qubit GHZ-like; admits exactly G2^i(8), i in {2,3,5,6,8,9}",
        ),
        NamedState("cat4", _s({"0000": 1, "1111": 1}), "standard-literature", "4-qubit cat state"),
        NamedState(
            "w4", _s({"0001": 1, "0010": 1, "0100": 1, "1000": 1}),
            "standard-literature", "4-qubit W",
        ),
        NamedState(
            "cluster4", _s({"0000": 1, "0011": 1, "1100": 1, "1111": -1}),
            "standard-literature", "4-qubit cluster state",
        ),
        NamedState(
            "L_ab3_rep", _s({"0001": 1, "0010": 1, "0111": 1, "1011": 1}),
            "paper-explicit", "(|0001>+|0010>+|0111>+|1011>)/2",
        ),
        NamedState(
            "L031031_rep", _s({"0000": 1, "0111": 1}),
            "paper-explicit", "(|0000>+|0111>)/sqrt(2)",
        ),
    ]
    return {s.name: s for s in states}


STATES: dict[str, NamedState] = _build_states()

ALIASES = {"cluster": "cluster4", "cat": "cat4", "w": "w4", "GHZ": "ghz", "Bell": "bell"}


def get_state(name: str, states: dict[str, NamedState] | None = None) -> NamedState:
    states = STATES if states is None else states
    name = ALIASES.get(name, name)
    try:
        return states[name]
    except KeyError:
        raise KeyError(f"unknown state {name!r}; known: {', '.join(states)}") from None


def states_json(states: dict[str, NamedState] | None = None) -> str:
    states = STATES if states is None else states
    return json.dumps([s.to_json() for s in states.values()], indent=2)


def load_states(path: str | Path, base: dict[str, NamedState] | None = None) -> dict[str, NamedState]:
    """Read a state-catalog JSON file; entries override ``base`` by name.

    Normalization is checked on load, so a file with unnormalized amplitudes
    is rejected outright.
    """
    merged = dict(STATES if base is None else base)
    for doc in json.loads(Path(path).read_text()):
        st = NamedState.from_json(doc)
        merged[st.name] = st
    return merged


# --- densecodability ----------------------------------------------------------

def encoded_states(state: NamedState, group: OperatorGroup, encoded_qubits: Sequence[int]):
    return [
        qstate.apply_on_qubits(matrix_of(w), encoded_qubits, state.amplitudes)
        for w in group.canonical
    ]


def densecodable_basis(
    state: NamedState, group: OperatorGroup, encoded_qubits: Sequence[int]
) -> np.ndarray:
    """Rows ``U_i |phi_1>`` in canonical group order, checked orthonormal.

    Raises NotDensecodable naming the first overlapping pair.
    """
    encoded_qubits = list(encoded_qubits)
    if len(encoded_qubits) != group.n:
        raise ValueError(
            f"group acts on {group.n} qubits but {len(encoded_qubits)} positions given"
        )
    if group.order > 2 ** state.n:
        raise ValueError(f"group of order {group.order} exceeds dimension 2^{state.n}")
    vecs = encoded_states(state, group, encoded_qubits)
    bad = qstate.check_orthonormal(vecs)
    if bad is not None:
        i, j, ov = bad
        raise NotDensecodable(i, j, ov, (group.canonical[i], group.canonical[j]))
    return np.array(vecs)


def is_densecodable(state, group, encoded_qubits) -> bool:
    try:
        densecodable_basis(state, group, encoded_qubits)
    except NotDensecodable:
        return False
    return True


def find_assignment(state: NamedState, group: OperatorGroup):
    """Lexicographically smallest ordered qubit tuple making the pair densecodable."""
    for qubits in itertools.permutations(range(state.n), group.n):
        if is_densecodable(state, group, qubits):
            return qubits
    return None


@dataclass(frozen=True)
class EncodingScheme:
    """A densecodable (state, group, qubits) triple and its measurement basis."""

    state: NamedState
    group: OperatorGroup
    encoded_qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "encoded_qubits", tuple(int(q) for q in self.encoded_qubits))
        self.basis  # validates

    @classmethod
    def search(cls, state: NamedState, group: OperatorGroup) -> EncodingScheme:
        qubits = find_assignment(state, group)
        if qubits is None:
            raise ValueError(f"{state.name} is not densecodable with {group.name or group}")
        return cls(state, group, qubits)

    @cached_property
    def basis(self) -> np.ndarray:
        return densecodable_basis(self.state, self.group, self.encoded_qubits)

    @property
    def n(self) -> int:
        return self.state.n

    @property
    def complete(self) -> bool:
        return self.group.order == 2 ** self.n

    def place(self, word: PauliWord, qubits: Sequence[int]) -> PauliWord:
        """Lift ``word`` acting on ``qubits`` to an ``n``-qubit word."""
        return word.pad(self.n - len(word), qubits)

    def lift(self, word: PauliWord) -> PauliWord:
        return self.place(word, self.encoded_qubits)

    def apply(self, full_word: PauliWord, s: np.ndarray) -> np.ndarray:
        return qstate.apply_on_qubits(matrix_of(full_word), range(self.n), s)

    def index_of(self, full_word: PauliWord) -> int:
        """Basis index reached by applying ``full_word`` to the initial state.

        Raises ValueError if the image is not (up to phase) a basis vector.
        """
        cache = self.__dict__.setdefault("_index_cache", {})
        if full_word not in cache:
            img = qstate.apply_on_qubits(matrix_of(full_word), range(self.n), self.state.amplitudes)
            ov = np.abs(self.basis.conj() @ img)
            k = int(np.argmax(ov))
            if abs(ov[k] - 1.0) > qstate.ORTHO_TOL:
                raise ValueError(f"{full_word} does not map the initial state onto the basis")
            cache[full_word] = k
        return cache[full_word]

    def to_json(self) -> dict:
        return {
            "state": self.state.name,
            "group": self.group.name,
            "encoded_qubits": list(self.encoded_qubits),
        }


# --- table verification -----------------------------------------------------

@dataclass(frozen=True)
class Table1Row:
    label: str
    state: str | None
    family: str
    reference_groups: tuple[str, ...]
    new_groups: tuple[str, ...]


def _g2(*idx):
    return tuple(f"G2^{i}(8)" for i in idx)


def _g3(*idx):
    return tuple(f"G3^{i}(32)" for i in idx)


TABLE1 = (
    Table1Row("2-qubit Bell state", "bell", "Bell", ("G1",), ()),
    Table1Row("3-qubit GHZ", "ghz", "GHZ", _g2(1, 2, 4, 5), ()),
    Table1Row("3-qubit GHZ-like", "ghz_like", "GHZ", _g2(2, 3, 5, 6, 8, 9), ()),
    Table1Row("4-qubit cat state", "cat4", "G_abcd", (), _g2(1, 2, 4, 5)),
    Table1Row("4-qubit W", "w4", "L_ab3", _g2(8, 9), ()),
    Table1Row("4-qubit Q5", None, "L_0_{7+1}", _g2(4, 5), ()),
    Table1Row("4-qubit cluster state", "cluster4", "G_abcd", ("G2",), _g2(1, 2, 4, 5)),
    Table1Row("4-qubit Omega state", None, "L_0_{3+1}0_{3+1}", ("G2",), _g2(*range(1, 12))),
    Table1Row("4-qubit Q4", None, "L_0_{5+3}", _g2(6, 7), _g2(5)),
    Table1Row("(|0001>+|0010>+|0111>+|1011>)/2", "L_ab3_rep", "L_ab3", (), _g2(8, 9)),
    Table1Row(
        "(|0000>+|0111>)/sqrt(2)", "L031031_rep", "L_0_{3+1}0_{3+1}",
        (), _g2(4, 5, 8, 9, 10, 11),
    ),
    Table1Row("5-qubit Brown state", None, "-", _g3(1, 2, 4, 5, 7, 8), ()),
    Table1Row("5-qubit cluster state", None, "-", _g3(4, 5, 7, 8), ()),
)


@dataclass
class CellResult:
    row: str
    state: str | None
    group: str
    status: str
    encoded_qubits: tuple[int, ...] | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "row": self.row,
            "state": self.state,
            "group": self.group,
            "status": self.status,
            "encoded_qubits": None if self.encoded_qubits is None else list(self.encoded_qubits),
            "detail": self.detail,
        }


@dataclass
class Report:
    title: str
    cells: list[CellResult]

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.cells)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, UNVERIFIED: 0}
        for c in self.cells:
            out[c.status] += 1
        return out

    def status(self, row: str, group: str | None = None) -> str:
        for c in self.cells:
            if c.row == row and (group is None or c.group == group):
                return c.status
        raise KeyError((row, group))

    def to_json(self) -> dict:
        return {"title": self.title, "cells": [c.to_json() for c in self.cells], "counts": self.counts()}

    def format(self) -> str:
        rows = [(c.row, c.group, c.status, "" if c.encoded_qubits is None else
                 ",".join(map(str, c.encoded_qubits)), c.detail) for c in self.cells]
        head = ("row", "group", "status", "qubits", "detail")
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
        lines = [self.title]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths) + "  {}"
        lines.append(fmt.format(*head))
        lines += [fmt.format(*r) for r in rows]
        lines.append("  ".join(f"{k}={v}" for k, v in self.counts().items()))
        return "\n".join(lines)


def verify_cell(
    state: NamedState | None,
    group: OperatorGroup | None,
    row: str = "",
    group_name: str = "",
    require_complete: bool = False,
) -> CellResult:
    """Check one (state, group) pairing over every qubit assignment."""
    sname = state.name if state is not None else None
    gname = group_name or (group.name if group is not None else "")
    if state is None or group is None:
        missing = "state" if state is None else "group"
        return CellResult(row, sname, gname, UNVERIFIED, detail=f"{missing} definition not available")
    if group.n > state.n or group.order > 2 ** state.n:
        return CellResult(row, sname, gname, FAIL, detail="group too large for state")
    if require_complete and group.order != 2 ** state.n:
        return CellResult(
            row, sname, gname, FAIL,
            detail=f"order {group.order} cannot give a complete basis of dimension {2 ** state.n}",
        )
    qubits = find_assignment(state, group)
    if qubits is None:
        return CellResult(row, sname, gname, FAIL, detail="no densecodable qubit assignment")
    return CellResult(row, sname, gname, PASS, qubits)


def verify_table1(
    states: dict[str, NamedState] | None = None,
    groups: dict[str, OperatorGroup] | None = None,
) -> Report:
    states = STATES if states is None else states
    groups = GROUPS if groups is None else groups
    cells = []
    for r in TABLE1:
        st = states.get(r.state) if r.state else None
        for gname in r.reference_groups + r.new_groups:
            cells.append(verify_cell(st, groups.get(gname), r.label, gname))
    return Report("Densecodable (state, group) pairs", cells)


@dataclass(frozen=True)
class Table2Row:
    state: str
    mode: str  # "AQD" or "QD"
    travel: int
    bob_groups: tuple[str, ...]
    alice_groups: tuple[str, ...]
    ratio: tuple[int, int]

    @property
    def label(self) -> str:
        return f"{self.state} {self.mode} N_T={self.travel} {self.ratio[0]}:{self.ratio[1]}"


_G = ("g1", "g2", "g3")
_BROWN_B = _g2(1, 2, 4, 5, 7, 8)

TABLE2 = (
    Table2Row("2-qubit Bell state", "AQD", 1, _G, ("G1",), (1, 2)),
    Table2Row("2-qubit Bell state", "AQD", 1, ("G1",), _G, (2, 1)),
    Table2Row("2-qubit Bell state", "QD", 1, ("G1",), ("G1",), (2, 2)),
    Table2Row("3-qubit GHZ", "AQD", 1, _g2(4, 5), _G, (3, 1)),
    Table2Row("3-qubit GHZ", "AQD", 1, _g2(4, 5), ("G1",), (3, 2)),
    Table2Row("3-qubit GHZ", "QD", 2, _g2(4, 5), _g2(4, 5), (3, 3)),
    Table2Row("4-qubit cluster and Omega state", "AQD", 1, ("G2",), _G, (4, 1)),
    Table2Row("4-qubit cluster and Omega state", "AQD", 1, ("G2",), ("G1",), (4, 2)),
    Table2Row("4-qubit cluster and Omega state", "AQD", 2, ("G2",), _g2(*range(1, 7)), (4, 3)),
    Table2Row("4-qubit cluster and Omega state", "QD", 2, ("G2",), ("G2",), (4, 4)),
    Table2Row("5-qubit Brown state", "AQD", 1, _BROWN_B, _G, (5, 1)),
    Table2Row("5-qubit Brown state", "AQD", 1, _BROWN_B, ("G1",), (5, 2)),
    Table2Row("5-qubit Brown state", "AQD", 2, _BROWN_B, _g2(*range(1, 7)), (5, 3)),
    Table2Row("5-qubit Brown state", "AQD", 2, _BROWN_B, ("G2",), (5, 4)),
    Table2Row("5-qubit Brown state", "QD", 3, _BROWN_B, _BROWN_B, (5, 5)),
)

# Brown rows name order-8 groups for a 5-bit encoding; a 5-bit group would
# have to be one of the uncatalogued order-32 groups, so they stay unverified.
_NEEDS_ORDER_32 = "5-qubit Brown state"


def check_table2_pair(bob: OperatorGroup, alice: OperatorGroup, travel: int, ratio) -> list[str]:
    """Failures of the subgroup, bit-ratio and travel-qubit checks (empty if all pass)."""
    problems = []
    small, large = (alice, bob) if alice.order <= bob.order else (bob, alice)
    if embeds_as_subgroup(small, large) is None:
        problems.append(f"{small.name} padded with identities is not a subgroup of {large.name}")
    if (bob.bits_per_use, alice.bits_per_use) != tuple(ratio):
        problems.append(
            f"bit ratio {bob.bits_per_use}:{alice.bits_per_use} != {ratio[0]}:{ratio[1]}"
        )
    if travel < alice.n:
        problems.append(f"N_T={travel} < {alice.n} qubits encoded by Alice")
    return problems


def _pairs(r: Table2Row):
    # QD rows: both parties use the same group
    if r.mode == "QD":
        return [(g, g) for g in r.bob_groups]
    return list(itertools.product(r.bob_groups, r.alice_groups))


def verify_table2(groups: dict[str, OperatorGroup] | None = None) -> Report:
    groups = GROUPS if groups is None else groups
    cells = []
    for r in TABLE2:
        if r.state == _NEEDS_ORDER_32 and "G3^1(32)" not in groups:
            cells.append(CellResult(
                r.label, r.state, f"B={'|'.join(r.bob_groups)} A={'|'.join(r.alice_groups)}",
                UNVERIFIED, detail="Bob's 5-bit group requires uncatalogued order-32 groups",
            ))
            continue
        for bname, aname in _pairs(r):
            gname = f"B={bname} A={aname}"
            bob, alice = groups.get(bname), groups.get(aname)
            if bob is None or alice is None:
                cells.append(CellResult(r.label, r.state, gname, UNVERIFIED,
                                        detail="group definition not available"))
                continue
            problems = check_table2_pair(bob, alice, r.travel, r.ratio)
            cells.append(CellResult(
                r.label, r.state, gname, FAIL if problems else PASS, detail="; ".join(problems)
            ))
    return Report("AQD/QD group pairings", cells)
