"""Phase-dropped Pauli group algebra.

Each qubit factor is one of ``I, X, iY, Z`` (codes 0..3).  Products discard
the global phase, so every word is self-inverse and any set of words closed
under multiplication is an elementary abelian 2-group.  Internally a factor
is also a pair of bits ``(x, z)`` and multiplication is bitwise XOR, which
lets subgroup enumeration run as linear algebra over GF(2).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

SYMBOLS = ("I", "X", "iY", "Z")

FACTOR_MATRICES = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1], [-1, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# code -> (x, z) bits and back
_XZ = ((0, 0), (1, 0), (1, 1), (0, 1))
_FROM_XZ = {xz: code for code, xz in enumerate(_XZ)}
_MUL = [[_FROM_XZ[(a[0] ^ b[0], a[1] ^ b[1])] for b in _XZ] for a in _XZ]

_ALIASES = {"I": 0, "I2": 0, "X": 1, "IY": 2, "Y": 2, "Z": 3}


class GroupError(ValueError):
    """Raised for malformed words or sets that fail the group axioms."""


@dataclass(frozen=True, order=True)
class PauliWord:
    """Tensor product of phase-dropped Pauli factors, stored as codes 0..3."""

    factors: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(c) for c in self.factors)
        if not f:
            raise GroupError("a Pauli word needs at least one factor")
        if any(c not in (0, 1, 2, 3) for c in f):
            raise GroupError(f"invalid factor codes {f}")
        object.__setattr__(self, "factors", f)

    @classmethod
    def parse(cls, text: str) -> PauliWord:
        """Parse ``"X.iY.I"`` (dots, spaces or ``⊗`` as separators)."""
        parts = text.replace("⊗", ".").replace(" ", ".").split(".")
        codes = []
        for p in parts:
            if not p:
                continue
            try:
                codes.append(_ALIASES[p.upper()])
            except KeyError:
                raise GroupError(f"unknown Pauli symbol {p!r} in {text!r}") from None
        return cls(tuple(codes))

    @classmethod
    def identity(cls, n: int) -> PauliWord:
        return cls((0,) * n)

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        return ".".join(SYMBOLS[c] for c in self.factors)

    def __mul__(self, other: PauliWord) -> PauliWord:
        return mul(self, other)

    @property
    def key(self) -> int:
        """Base-4 integer used for canonical ordering (first factor most significant)."""
        k = 0
        for c in self.factors:
            k = 4 * k + c
        return k

    @property
    def is_identity(self) -> bool:
        return not any(self.factors)

    def bits(self) -> int:
        """Symplectic bit vector ``x_0 .. x_{n-1} z_0 .. z_{n-1}`` packed into an int."""
        n = len(self.factors)
        v = 0
        for i, c in enumerate(self.factors):
            x, z = _XZ[c]
            v |= x << (2 * n - 1 - i)
            v |= z << (n - 1 - i)
        return v

    @classmethod
    def from_bits(cls, v: int, n: int) -> PauliWord:
        return cls(tuple(
            _FROM_XZ[((v >> (2 * n - 1 - i)) & 1, (v >> (n - 1 - i)) & 1)] for i in range(n)
        ))

    def pad(self, extra: int, positions: Iterable[int] | None = None) -> PauliWord:
        """Insert ``extra`` identity factors; trailing unless ``positions`` says where
        this word's factors go in the longer word."""
        total = len(self) + extra
        if positions is None:
            return PauliWord(self.factors + (0,) * extra)
        positions = list(positions)
        if len(positions) != len(self) or len(set(positions)) != len(positions):
            raise GroupError(f"bad placement {positions} for word of length {len(self)}")
        out = [0] * total
        for c, p in zip(self.factors, positions):
            out[p] = c
        return PauliWord(tuple(out))


def mul(a: PauliWord, b: PauliWord) -> PauliWord:
    """Factorwise product with the global phase discarded."""
    if len(a) != len(b):
        raise GroupError(f"cannot multiply words of length {len(a)} and {len(b)}")
    return PauliWord(tuple(_MUL[x][y] for x, y in zip(a.factors, b.factors)))


def matrix_of(w: PauliWord) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for c in w.factors:
        m = np.kron(m, FACTOR_MATRICES[c])
    return m


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True if ``a == c * b`` for a unit-modulus ``c``.

    Both matrices are normalized by their first entry of largest modulus
    before comparing entrywise.
    """
    if a.shape != b.shape:
        return False
    ia = np.argmax(np.abs(a).ravel() > np.abs(a).max() - tol)
    ib = np.argmax(np.abs(b).ravel() > np.abs(b).max() - tol)
    if ia != ib:
        return False
    pa, pb = a.ravel()[ia], b.ravel()[ib]
    if abs(abs(pa) - abs(pb)) > tol or abs(pa) < tol:
        return False
    return bool(np.max(np.abs(a / (pa / abs(pa)) - b / (pb / abs(pb)))) <= tol)


def _as_words(elements: Iterable) -> frozenset[PauliWord]:
    return frozenset(e if isinstance(e, PauliWord) else PauliWord.parse(e) for e in elements)


def _common_length(words: Iterable[PauliWord]) -> int | None:
    lengths = {len(w) for w in words}
    if len(lengths) > 1:
        raise GroupError(f"words of different lengths: {sorted(lengths)}")
    return lengths.pop() if lengths else None


def is_closed(elements: Iterable[PauliWord]) -> bool:
    s = set(elements)
    return all(mul(a, b) in s for a in s for b in s)


@dataclass(frozen=True)
class OperatorGroup:
    """A finite set of equal-length Pauli words closed under ``mul``.

    Construction validates the group axioms; ``canonical`` orders elements
    by their base-4 key, which fixes the bit-string <-> operator bijection.
    """

    n: int
    elements: frozenset[PauliWord]
    name: str = ""

    def __post_init__(self):
        els = _as_words(self.elements)
        object.__setattr__(self, "elements", els)
        length = _common_length(els)
        if length is not None and length != self.n:
            raise GroupError(f"elements have length {length}, group declares {self.n}")
        if PauliWord.identity(self.n) not in els:
            raise GroupError("group does not contain the identity word")
        if not is_closed(els):
            raise GroupError("set is not closed under multiplication")
        order = len(els)
        if order & (order - 1):
            raise GroupError(f"order {order} is not a power of two")

    @classmethod
    def of(cls, elements: Iterable, name: str = "") -> OperatorGroup:
        els = _as_words(elements)
        n = _common_length(els)
        if n is None:
            raise GroupError("cannot infer word length from an empty set")
        return cls(n, els, name)

    @cached_property
    def canonical(self) -> tuple[PauliWord, ...]:
        return tuple(sorted(self.elements, key=lambda w: w.key))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def bits_per_use(self) -> int:
        return self.order.bit_length() - 1

    def index(self, w: PauliWord) -> int:
        return self.canonical.index(w)

    @cached_property
    def generators(self) -> tuple[PauliWord, ...]:
        """A minimal generating set, chosen greedily in canonical order."""
        gens: list[PauliWord] = []
        span = {PauliWord.identity(self.n)}
        for w in self.canonical:
            if w not in span:
                gens.append(w)
                span |= {mul(w, s) for s in span}
        return tuple(gens)

    def __contains__(self, w) -> bool:
        return w in self.elements

    def __iter__(self):
        return iter(self.canonical)

    def __len__(self) -> int:
        return self.order

    def __str__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return label + "{" + ", ".join(str(w) for w in self.canonical) + "}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "elements": [str(w) for w in self.canonical],
        }


def generate(generators: Iterable, n: int | None = None, name: str = "") -> OperatorGroup:
    """Smallest group containing ``generators`` (and the identity).

    ``n`` is only needed when ``generators`` is empty.
    """
    gens = _as_words(generators)
    length = _common_length(gens)
    if length is None:
        if n is None:
            raise GroupError("word length required for an empty generating set")
        length = n
    elif n is not None and n != length:
        raise GroupError(f"generators have length {length}, expected {n}")
    span = {PauliWord.identity(length)}
    for g in sorted(gens):
        if g not in span:
            span |= {mul(g, s) for s in span}
    return OperatorGroup(length, frozenset(span), name)


def is_subgroup(h: Iterable, g: OperatorGroup) -> bool:
    hs = _as_words(h)
    length = _common_length(hs)
    if length is not None and length != g.n:
        raise GroupError(f"word length {length} does not match group length {g.n}")
    return (
        PauliWord.identity(g.n) in hs
        and hs <= g.elements
        and is_closed(hs)
    )


def extend_with_identity(h: OperatorGroup, extra: int, positions=None) -> OperatorGroup:
    """Pad every element of ``h`` with ``extra`` identity factors.

    Padding is trailing by default; ``positions`` places ``h``'s factors at
    the given slots of the longer word instead.
    """
    if extra < 0:
        raise GroupError("extra must be non-negative")
    if extra == 0 and positions is None:
        return h
    name = f"{h.name}⊗I^{extra}" if h.name else ""
    return OperatorGroup(h.n + extra, frozenset(w.pad(extra, positions) for w in h.elements), name)


def embeds_as_subgroup(h: OperatorGroup, g: OperatorGroup):
    """Find factor slots where ``h`` padded with identities is a subgroup of ``g``.

    Returns the first placement (lexicographic over ordered position tuples)
    or None.  This is the identity-padding condition a smaller encoding group
    must meet inside a larger one.
    """
    if h.n > g.n:
        return None
    for positions in itertools.permutations(range(g.n), h.n):
        padded = {w.pad(g.n - h.n, positions) for w in h.elements}
        if padded <= g.elements:
            return positions
    return None


# --- subgroup enumeration over GF(2) ---------------------------------------

def _rref_basis(vectors: Iterable[int]) -> list[int]:
    """Independent subset spanning ``vectors`` (bit-packed GF(2) rows)."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def _subspaces(dim: int, k: int):
    """All k-dimensional subspaces of GF(2)^dim, each as its RREF rows."""
    for pivots in itertools.combinations(range(dim), k):
        # free slots: columns right of the row's pivot that are not pivots
        free = [
            [c for c in range(p + 1, dim) if c not in pivots] for p in pivots
        ]
        n_free = sum(len(f) for f in free)
        for fill in range(1 << n_free):
            rows = []
            bit = 0
            for p, cols in zip(pivots, free):
                r = 1 << (dim - 1 - p)
                for c in cols:
                    if (fill >> bit) & 1:
                        r |= 1 << (dim - 1 - c)
                    bit += 1
                rows.append(r)
            yield rows


def subgroups_of_order(g: OperatorGroup, m: int) -> list[OperatorGroup]:
    """Every subgroup of ``g`` with exactly ``m`` elements, in canonical order.

    The list is sorted by the canonical element keys of each subgroup, so it
    does not depend on how ``g`` was built.
    """
    if m < 1 or m & (m - 1) or g.order % m:
        raise GroupError(f"no subgroups of order {m} in a group of order {g.order}")
    k = m.bit_length() - 1
    basis = [PauliWord.from_bits(v, g.n) for v in _rref_basis(w.bits() for w in g.canonical)]
    dim = len(basis)
    found = []
    for rows in _subspaces(dim, k):
        gens = []
        for r in rows:
            w = PauliWord.identity(g.n)
            for i in range(dim):
                if (r >> (dim - 1 - i)) & 1:
                    w = mul(w, basis[i])
            gens.append(w)
        found.append(generate(gens, g.n))
    found.sort(key=lambda h: [w.key for w in h.canonical])
    return found


# --- named catalog ----------------------------------------------------------

_G2_SUBGROUPS = {
    1: "I.I X.I iY.I Z.I I.X X.X iY.X Z.X",
    2: "I.I X.I iY.I Z.I I.iY X.iY iY.iY Z.iY",
    3: "I.I X.I iY.I Z.I I.Z X.Z iY.Z Z.Z",
    4: "I.I I.X I.iY I.Z X.I X.X X.iY X.Z",
    5: "I.I I.X I.iY I.Z iY.I iY.X iY.iY iY.Z",
    6: "I.I I.X I.iY I.Z Z.I Z.X Z.iY Z.Z",
    7: "I.I I.Z Z.I Z.Z X.X iY.X X.iY iY.iY",
    8: "I.I Z.Z X.iY iY.X I.X Z.iY iY.I X.Z",
    9: "I.I Z.Z X.iY iY.X X.I iY.Z Z.X I.iY",
    10: "I.I X.I I.X X.X Z.Z iY.Z Z.iY iY.iY",
    11: "I.I iY.I I.iY iY.iY Z.Z Z.X X.Z X.X",
}


def _build_catalog() -> dict[str, OperatorGroup]:
    cat: dict[str, OperatorGroup] = {}
    cat["G1"] = generate(["X", "Z"], name="G1")
    cat["G2"] = generate(["X.I", "I.X", "Z.I", "I.Z"], name="G2")
    for i, text in _G2_SUBGROUPS.items():
        name = f"G2^{i}(8)"
        cat[name] = OperatorGroup.of(text.split(), name=name)
    cat["g1"] = OperatorGroup.of(["I", "X"], name="g1")
    cat["g2"] = OperatorGroup.of(["I", "iY"], name="g2")
    cat["g3"] = OperatorGroup.of(["I", "Z"], name="g3")
    return cat


CATALOG: dict[str, OperatorGroup] = _build_catalog()


def get_group(name: str) -> OperatorGroup:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(CATALOG)}") from None


def catalog_json() -> str:
    return json.dumps([g.to_json() for g in CATALOG.values()], indent=2)


def group_from_json(doc: dict) -> OperatorGroup:
    g = OperatorGroup.of(doc["elements"], name=doc.get("name", ""))
    if "order" in doc and doc["order"] != g.order:
        raise GroupError(f"declared order {doc['order']} but {g.order} elements")
    return g
