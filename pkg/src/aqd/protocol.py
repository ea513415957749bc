"""Executable asymmetric quantum dialogue.

Bob prepares ``p`` copies of a densecodable state and encodes ``n`` bits per
copy; the travel qubits go to Alice mixed with BB84 decoys under a secret
permutation.  After a decoy check Alice encodes ``m <= n`` bits per copy on
the travel qubits and returns them the same way.  After a second check Bob
measures each copy in the scheme basis and announces the outcome, from which
each party recovers the other's message using only their own encoding.

``ProtocolRun`` exposes the steps one at a time and refuses to run them out
of order; ``run`` drives a full round.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from functools import cached_property
from typing import Sequence

import numpy as np

from . import qstate
from .channels import KrausChannel, apply_noise, channel_from_json
from .pauligroup import OperatorGroup, PauliWord, embeds_as_subgroup, get_group, matrix_of, mul
from .statelib import EncodingScheme, find_assignment, get_state

DEFAULT_THRESHOLD = 0.11

EVE_KINDS = ("none", "intercept_resend")

# BB84 decoy alphabet: (basis, bit) -> single-qubit state
_DECOY_VECTORS = {
    ("Z", 0): np.array([1, 0], dtype=complex),
    ("Z", 1): np.array([0, 1], dtype=complex),
    ("X", 0): np.array([1, 1], dtype=complex) / np.sqrt(2),
    ("X", 1): np.array([1, -1], dtype=complex) / np.sqrt(2),
}


class ConfigError(ValueError):
    """The protocol configuration cannot be run."""


class ProtocolError(RuntimeError):
    """A protocol step was invoked out of order or with inconsistent data."""


# --- encoding ---------------------------------------------------------------

def encode(bits: str, group: OperatorGroup) -> PauliWord:
    """Group element at canonical index ``int(bits, 2)``."""
    k = group.bits_per_use
    if len(bits) != k or set(bits) - {"0", "1"}:
        raise ValueError(f"expected a {k}-bit string for a group of order {group.order}")
    return group.canonical[int(bits, 2)] if k else group.canonical[0]


def decode(word: PauliWord, group: OperatorGroup) -> str:
    k = group.bits_per_use
    return format(group.index(word), f"0{k}b") if k else ""


def split_message(bits: str, per_copy: int, copies: int) -> list[str]:
    if len(bits) != per_copy * copies or set(bits) - {"0", "1"}:
        raise ConfigError(f"message must be {per_copy * copies} bits, got {bits!r}")
    return [bits[i * per_copy:(i + 1) * per_copy] for i in range(copies)]


def random_message(nbits: int, rng: np.random.Generator) -> str:
    return "".join(str(b) for b in rng.integers(0, 2, size=nbits))


# --- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class ProtocolConfig:
    state_name: str
    bob_group_name: str
    alice_group_name: str
    encoded_qubits_bob: tuple[int, ...] | None = None
    travel_qubits: tuple[int, ...] | None = None
    copies: int = 1
    decoy_per_leg: int | None = None
    error_threshold: float = DEFAULT_THRESHOLD
    noise: dict | None = None
    eve: str = "none"
    eve_fraction: float = 1.0
    secret_initial_state: bool = False
    seed: int = 0

    def __post_init__(self):
        for name in ("encoded_qubits_bob", "travel_qubits"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(int(q) for q in v))
        if self.copies < 1:
            raise ConfigError("copies must be at least 1")
        if self.decoy_per_leg is not None and self.decoy_per_leg < 0:
            raise ConfigError("decoy count must be non-negative")
        if not 0.0 <= self.error_threshold <= 1.0:
            raise ConfigError("error threshold must lie in [0, 1]")
        if self.eve not in EVE_KINDS:
            raise ConfigError(f"unknown eavesdropper {self.eve!r}; choose from {EVE_KINDS}")
        if not 0.0 <= self.eve_fraction <= 1.0:
            raise ConfigError("interception fraction must lie in [0, 1]")

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("encoded_qubits_bob", "travel_qubits"):
            if d[k] is not None:
                d[k] = list(d[k])
        return d

    @classmethod
    def from_json(cls, doc: dict) -> ProtocolConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**doc)


@dataclass(frozen=True)
class Setup:
    """A resolved configuration: the scheme, Alice's group and where she encodes."""

    config: ProtocolConfig
    scheme: EncodingScheme
    alice_group: OperatorGroup
    travel_qubits: tuple[int, ...]
    channel: KrausChannel

    @property
    def bob_group(self) -> OperatorGroup:
        return self.scheme.group

    @property
    def bob_bits(self) -> int:
        return self.bob_group.bits_per_use

    @property
    def alice_bits(self) -> int:
        return self.alice_group.bits_per_use

    @property
    def decoys_per_leg(self) -> int:
        c = self.config
        return len(self.travel_qubits) * c.copies if c.decoy_per_leg is None else c.decoy_per_leg

    def bob_full(self, word: PauliWord) -> PauliWord:
        return self.scheme.lift(word)

    def alice_full(self, word: PauliWord) -> PauliWord:
        return self.scheme.place(word, self.travel_qubits)

    @cached_property
    def outcome_table(self) -> np.ndarray:
        """``table[b, a]``: basis index after Bob's word ``b`` and Alice's word ``a``."""
        tab = np.empty((self.bob_group.order, self.alice_group.order), dtype=int)
        for i, b in enumerate(self.bob_group.canonical):
            for j, a in enumerate(self.alice_group.canonical):
                tab[i, j] = self.scheme.index_of(self.alice_full(a) * self.bob_full(b))
        return tab


def resolve(config: ProtocolConfig) -> Setup:
    """Look up the named state and groups and check the run is well posed."""
    try:
        state = get_state(config.state_name)
        bob = get_group(config.bob_group_name)
        alice = get_group(config.alice_group_name)
    except KeyError as e:
        raise ConfigError(str(e.args[0])) from None
    if alice.order > bob.order:
        raise ConfigError(
            "Alice's group is larger than Bob's; swap the roles so that Bob, who "
            "prepares the state, holds the larger group"
        )
    slots = embeds_as_subgroup(alice, bob)
    if slots is None:
        raise ConfigError(f"{alice.name} padded with identities is not a subgroup of {bob.name}")

    enc = config.encoded_qubits_bob
    if enc is None:
        enc = find_assignment(state, bob)
        if enc is None:
            raise ConfigError(f"{state.name} is not densecodable with {bob.name}")
    try:
        scheme = EncodingScheme(state, bob, enc)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if not scheme.complete:
        raise ConfigError(
            f"{bob.name} gives only {bob.order} of {2 ** state.n} basis states for {state.name}"
        )

    travel = config.travel_qubits
    if travel is None:
        travel = tuple(scheme.encoded_qubits[s] for s in slots)
    if len(travel) != alice.n:
        raise ConfigError(f"{alice.name} acts on {alice.n} qubits, {len(travel)} travel qubits given")
    if len(set(travel)) != len(travel) or not all(0 <= q < state.n for q in travel):
        raise ConfigError(f"invalid travel qubits {travel}")

    try:
        setup = Setup(config, scheme, alice, tuple(travel), channel_from_json(config.noise))
        table = setup.outcome_table
    except ValueError as e:
        raise ConfigError(f"encodings leave the measurement basis: {e}") from None
    for row in table:
        if len(set(row)) != alice.order:
            raise ConfigError("Alice's encodings are not distinguishable on these travel qubits")
    return setup


# --- decoding ---------------------------------------------------------------

def other_word(announced_word: PauliWord, own_word: PauliWord) -> PauliWord:
    """Solve ``own * other = announced``; every element is its own inverse."""
    return mul(announced_word, own_word)


def decode_as_bob(setup: Setup, announced: int, bob_word: PauliWord) -> PauliWord:
    """Alice's word, from Bob's own word and the announced basis index.

    When Alice's words sit inside Bob's group on the same qubits this is
    ``mul(announced_word, bob_word)``; the table lookup also covers travel
    qubits that Bob did not encode on.
    """
    if not 0 <= announced < setup.bob_group.order:
        raise ValueError(f"announced index {announced} outside the basis")
    row = setup.outcome_table[setup.bob_group.index(bob_word)]
    hits = np.flatnonzero(row == announced)
    if len(hits) != 1:
        raise ValueError(f"outcome {announced} is inconsistent with Bob's encoding {bob_word}")
    return setup.alice_group.canonical[int(hits[0])]


def decode_as_alice(setup: Setup, announced: int, alice_word: PauliWord) -> PauliWord:
    """Bob's word, from Alice's own word and the announced basis index."""
    if not 0 <= announced < setup.bob_group.order:
        raise ValueError(f"announced index {announced} outside the basis")
    col = setup.outcome_table[:, setup.alice_group.index(alice_word)]
    hits = np.flatnonzero(col == announced)
    if len(hits) != 1:
        raise ValueError(f"outcome {announced} is inconsistent with Alice's encoding {alice_word}")
    return setup.bob_group.canonical[int(hits[0])]


# --- decoys and eavesdropping -----------------------------------------------

@dataclass(frozen=True)
class Decoy:
    basis: str
    bit: int

    def density(self) -> np.ndarray:
        return qstate.to_density(_DECOY_VECTORS[(self.basis, self.bit)])


def prepare_decoys(count: int, rng: np.random.Generator) -> list[Decoy]:
    bases = rng.integers(0, 2, size=count)
    bits = rng.integers(0, 2, size=count)
    return [Decoy("ZX"[b], int(v)) for b, v in zip(bases, bits)]


@dataclass(frozen=True)
class DecoyCheck:
    tested: int
    errors: int

    @property
    def rate(self) -> float:
        return self.errors / self.tested if self.tested else 0.0

    def to_json(self) -> dict:
        return {"tested": self.tested, "errors": self.errors, "rate": self.rate}


def _measure_qubit(rho: np.ndarray, qubit: int, basis: str, rng):
    """Projective Z or X measurement of one qubit; returns (bit, post-state)."""
    n = qstate.num_qubits(rho)
    outcomes = []
    for bit in (0, 1):
        proj = qstate.to_density(_DECOY_VECTORS[(basis, bit)])
        post = qstate.apply_on_qubits(proj, [qubit], rho) if n > 1 else proj @ rho @ proj
        outcomes.append((np.trace(post).real, post))
    p0 = min(max(outcomes[0][0], 0.0), 1.0)
    bit = 0 if rng.random() < p0 else 1
    prob, post = outcomes[bit]
    return bit, post / prob


def bb84_decoy_check(prepared: Sequence[Decoy], received: Sequence[np.ndarray], rng) -> DecoyCheck:
    """Measure every received decoy in its preparation basis and count flips."""
    if len(prepared) != len(received):
        raise ValueError(f"{len(prepared)} decoys prepared but {len(received)} received")
    errors = 0
    for d, rho in zip(prepared, received):
        bit, _ = _measure_qubit(rho, 0, d.basis, rng)
        errors += bit != d.bit
    return DecoyCheck(len(prepared), errors)


def decoy_error_probability(decoy: Decoy, ch: KrausChannel) -> float:
    """Chance a lone decoy reads wrong after one pass through ``ch``."""
    rho = ch.apply_single(decoy.density())
    wrong = _DECOY_VECTORS[(decoy.basis, 1 - decoy.bit)]
    return float(np.vdot(wrong, rho @ wrong).real)


# --- transcript -------------------------------------------------------------

@dataclass
class LegRecord:
    permutation: list[int]
    decoy_positions: list[int]
    intercepted: int = 0
    check: dict | None = None


@dataclass
class ProtocolTranscript:
    initial_state: str | None
    config: dict
    bob_encodings: list[int]
    alice_encodings: list[int] = field(default_factory=list)
    legs: list[LegRecord] = field(default_factory=list)
    announcements: list[int] = field(default_factory=list)
    inconsistent_copies: list[int] = field(default_factory=list)
    decoded_bob_message: str | None = None
    decoded_alice_message: str | None = None
    aborted: bool = False
    abort_stage: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @property
    def leg_rates(self) -> list[float]:
        return [leg.check["rate"] for leg in self.legs if leg.check is not None]


# --- the protocol state machine ---------------------------------------------

STAGES = ("init", "prepared", "sent", "checked1", "encoded", "returned", "checked2", "done")


class ProtocolRun:
    """One round of the dialogue, advanced step by step.

    Copies are held as separate density matrices; decoys as 2x2 density
    matrices.  The travel string is a list of ``("m", copy, qubit)`` and
    ``("d", index)`` slots, sent in the order given by a random permutation.
    """

    def __init__(self, setup: Setup, bob_msg: str, alice_msg: str, rng: np.random.Generator):
        self.setup = setup
        self.rng = rng
        c = setup.config
        self.bob_chunks = split_message(bob_msg, setup.bob_bits, c.copies)
        self.alice_chunks = split_message(alice_msg, setup.alice_bits, c.copies)
        self.bob_words = [encode(b, setup.bob_group) for b in self.bob_chunks]
        self.alice_words: list[PauliWord] = []
        self.copies: list[np.ndarray] = []
        self.decoys: list[Decoy] = []
        self.decoy_states: list[np.ndarray] = []
        self.stage = "init"
        self.transcript = ProtocolTranscript(
            initial_state=None if c.secret_initial_state else setup.scheme.state.name,
            config=c.to_json(),
            bob_encodings=[setup.bob_group.index(w) for w in self.bob_words],
        )

    def _advance(self, expected: str, to: str):
        if self.stage != expected:
            raise ProtocolError(f"step needs stage {expected!r}, run is at {self.stage!r}")
        self.stage = to

    def _abort(self, stage: str):
        self.transcript.aborted = True
        self.transcript.abort_stage = stage
        self.stage = "done"

    # AQD1
    def prepare(self):
        self._advance("init", "prepared")
        sch = self.setup.scheme
        for w in self.bob_words:
            psi = sch.apply(self.setup.bob_full(w), sch.state.amplitudes)
            self.copies.append(qstate.to_density(psi))

    def _slots(self) -> list[tuple]:
        msg = [("m", c, q) for c in range(len(self.copies)) for q in self.setup.travel_qubits]
        return msg + [("d", j) for j in range(len(self.decoys))]

    def _transmit(self) -> LegRecord:
        """Permute the travel string and push it through Eve and the channel."""
        slots = self._slots()
        key = [int(k) for k in self.rng.permutation(len(slots))]
        sent = [slots[k] for k in key]
        cfg, ch = self.setup.config, self.setup.channel
        intercepted = 0
        for slot in sent:
            if cfg.eve == "intercept_resend" and self.rng.random() < cfg.eve_fraction:
                basis = "ZX"[int(self.rng.integers(0, 2))]
                intercepted += 1
                if slot[0] == "m":
                    _, c, q = slot
                    _, self.copies[c] = _measure_qubit(self.copies[c], q, basis, self.rng)
                else:
                    j = slot[1]
                    _, self.decoy_states[j] = _measure_qubit(self.decoy_states[j], 0, basis, self.rng)
            if ch.kind != "identity":
                if slot[0] == "m":
                    self.copies[slot[1]] = apply_noise(self.copies[slot[1]], ch, [slot[2]])
                else:
                    self.decoy_states[slot[1]] = ch.apply_single(self.decoy_states[slot[1]])
        decoy_pos = [i for i, s in enumerate(sent) if s[0] == "d"]
        return LegRecord(key, decoy_pos, intercepted)

    def _new_decoys(self):
        self.decoys = prepare_decoys(self.setup.decoys_per_leg, self.rng)
        self.decoy_states = [d.density() for d in self.decoys]

    # AQD2
    def send_to_alice(self):
        self._advance("prepared", "sent")
        self._new_decoys()
        self.transcript.legs.append(self._transmit())

    def _check(self, stage: str, next_stage: str):
        self._advance(stage, next_stage)
        chk = bb84_decoy_check(self.decoys, self.decoy_states, self.rng)
        self.transcript.legs[-1].check = chk.to_json()
        if chk.rate > self.setup.config.error_threshold:
            self._abort("AQD3" if stage == "sent" else "AQD5")
        return chk

    # AQD3
    def check_leg1(self) -> DecoyCheck:
        return self._check("sent", "checked1")

    # AQD4
    def alice_encode(self, order_key: Sequence[int] | None = None):
        """Alice restores the order and encodes on the travel qubits.

        ``order_key`` replaces the permutation Bob disclosed, to model a
        party that reorders with the wrong key.
        """
        self._advance("checked1", "encoded")
        true_key = self.transcript.legs[-1].permutation
        key = true_key if order_key is None else list(order_key)
        if sorted(key) != list(range(len(true_key))):
            raise ProtocolError("order key is not a permutation of the travel string")
        slots = self._slots()
        sent = [slots[k] for k in true_key]
        # position i of the received string is believed to hold slots[key[i]]
        believed = {key[i]: sent[i] for i in range(len(sent))}
        tq = self.setup.travel_qubits
        for c, bits in enumerate(self.alice_chunks):
            word = encode(bits, self.setup.alice_group)
            self.alice_words.append(word)
            for f, q in zip(word.factors, tq):
                if f == 0:
                    continue
                target = believed[slots.index(("m", c, q))]
                self._apply_factor(target, f)
        self.transcript.alice_encodings = [self.setup.alice_group.index(w) for w in self.alice_words]

    def _apply_factor(self, slot, code: int):
        u = matrix_of(PauliWord((code,)))
        if slot[0] == "m":
            _, c, q = slot
            self.copies[c] = qstate.apply_on_qubits(u, [q], self.copies[c])
        else:
            j = slot[1]
            self.decoy_states[j] = u @ self.decoy_states[j] @ u.conj().T

    def send_to_bob(self):
        self._advance("encoded", "returned")
        self._new_decoys()
        self.transcript.legs.append(self._transmit())

    # AQD5
    def check_leg2(self) -> DecoyCheck:
        return self._check("returned", "checked2")

    # AQD6
    def measure_and_decode(self):
        self._advance("checked2", "done")
        sch = self.setup.scheme
        announced = []
        for rho in self.copies:
            idx, _ = qstate.measure_in_basis(rho, sch.basis, self.rng)
            announced.append(idx)
        self.transcript.announcements = announced
        alice_bits, bob_bits = [], []
        for c, (k, bw, aw) in enumerate(zip(announced, self.bob_words, self.alice_words)):
            try:
                alice_bits.append(decode(decode_as_bob(self.setup, k, bw), self.setup.alice_group))
                bob_bits.append(decode(decode_as_alice(self.setup, k, aw), self.setup.bob_group))
            except ValueError:
                # disturbed copy: the outcome matches neither party's encoding
                self.transcript.inconsistent_copies.append(c)
                alice_bits.append("?" * self.setup.alice_bits)
                bob_bits.append("?" * self.setup.bob_bits)
        self.transcript.decoded_alice_message = "".join(alice_bits)
        self.transcript.decoded_bob_message = "".join(bob_bits)

    def run_to_end(self) -> ProtocolTranscript:
        steps = (self.prepare, self.send_to_alice, self.check_leg1, self.alice_encode,
                 self.send_to_bob, self.check_leg2, self.measure_and_decode)
        for step in steps:
            if self.stage == "done":
                break
            step()
        return self.transcript


def run(config: ProtocolConfig, bob_msg: str, alice_msg: str,
        rng: np.random.Generator | None = None) -> ProtocolTranscript:
    """Run one full round; ``rng`` defaults to a generator seeded from the config."""
    setup = resolve(config)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    return ProtocolRun(setup, bob_msg, alice_msg, rng).run_to_end()
