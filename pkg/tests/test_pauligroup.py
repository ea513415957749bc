import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aqd.pauligroup import (
    CATALOG, GroupError, OperatorGroup, PauliWord, embeds_as_subgroup, equal_up_to_phase,
    extend_with_identity, generate, get_group, group_from_json, is_closed, is_subgroup,
    matrix_of, mul, subgroups_of_order,
)

words = st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 3), min_size=n, max_size=n),
                        st.lists(st.integers(0, 3), min_size=n, max_size=n))
).map(lambda ab: (PauliWord(tuple(ab[0])), PauliWord(tuple(ab[1]))))


def test_parse_and_print():
    w = PauliWord.parse("X.iY.I")
    assert w.factors == (1, 2, 0)
    assert str(w) == "X.iY.I"
    assert PauliWord.parse("X ⊗ iY ⊗ I2") == w
    with pytest.raises(ValueError):
        PauliWord.parse("X.Q")


def test_single_qubit_table():
    # phase-dropped products: X*Z ~ iY, X*iY ~ Z, iY*Z ~ X
    X, Y, Z = (PauliWord.parse(s) for s in ("X", "iY", "Z"))
    assert X * Z == Y and X * Y == Z and Y * Z == X
    for w in (X, Y, Z):
        assert (w * w).is_identity


@given(words)
def test_mul_matches_matrix_product(pair):
    a, b = pair
    assert equal_up_to_phase(matrix_of(a) @ matrix_of(b), matrix_of(mul(a, b)))


@given(words)
def test_mul_commutes_and_self_inverse(pair):
    a, b = pair
    assert mul(a, b) == mul(b, a)
    assert mul(mul(a, b), b) == a


@given(st.integers(0, 4 ** 3 - 1))
def test_bits_roundtrip(v):
    w = PauliWord.from_bits(v, 3)
    assert PauliWord.from_bits(w.bits(), 3) == w


def test_g1_and_g2():
    g1 = get_group("G1")
    assert [str(w) for w in g1.canonical] == ["I", "X", "iY", "Z"]
    g2 = generate(["X.I", "I.X", "Z.I", "I.Z"])
    expected = {f"{a}.{b}" for a in ("I", "X", "iY", "Z") for b in ("I", "X", "iY", "Z")}
    assert {str(w) for w in g2.canonical} == expected
    assert g2.order == 16 and g2.bits_per_use == 4


def test_transcribed_subgroups_are_subgroups():
    g2 = get_group("G2")
    for i in range(1, 12):
        h = get_group(f"G2^{i}(8)")
        assert h.order == 8
        assert PauliWord.identity(2) in h
        assert is_closed(h)
        assert is_subgroup(h, g2)


def _brute_force_subgroups(g: OperatorGroup, m: int):
    ident = PauliWord.identity(g.n)
    rest = [w for w in g.canonical if w != ident]
    found = set()
    for combo in itertools.combinations(rest, m - 1):
        elems = frozenset(combo) | {ident}
        if is_closed(elems):
            found.add(elems)
    return found


@pytest.mark.parametrize("m", [2, 4, 8])
def test_subgroup_enumeration_matches_brute_force(m):
    g2 = get_group("G2")
    fast = {frozenset(h.canonical) for h in subgroups_of_order(g2, m)}
    assert fast == _brute_force_subgroups(g2, m)
    assert len(fast) == {2: 15, 4: 35, 8: 15}[m]


def test_enumeration_recovers_named_subgroups():
    subs = {frozenset(h.canonical) for h in subgroups_of_order(get_group("G2"), 8)}
    for i in range(1, 12):
        assert frozenset(get_group(f"G2^{i}(8)").canonical) in subs


def test_g3_index_two_count():
    g3 = generate(["X.I.I", "I.X.I", "I.I.X", "Z.I.I", "I.Z.I", "I.I.Z"])
    assert g3.order == 64
    assert len(subgroups_of_order(g3, 32)) == 63


def test_bad_groups_rejected():
    with pytest.raises(GroupError):
        OperatorGroup.of(["X", "Z"])  # no identity
    with pytest.raises(GroupError):
        OperatorGroup.of(["I", "X", "Z"])  # not closed
    with pytest.raises(GroupError):
        subgroups_of_order(get_group("G2"), 3)


def test_generators_regenerate_group():
    for g in CATALOG.values():
        assert set(generate(g.generators, g.n).canonical) == set(g.canonical)
        assert len(g.generators) == g.bits_per_use


def test_embedding():
    g1 = get_group("G1")
    assert embeds_as_subgroup(g1, get_group("G2")) == (0,)
    assert is_subgroup(extend_with_identity(g1, 1), get_group("G2^1(8)"))
    assert embeds_as_subgroup(get_group("g2"), get_group("G2^4(8)")) is not None
    assert embeds_as_subgroup(get_group("G2"), get_group("G1")) is None


def test_json_roundtrip():
    for g in CATALOG.values():
        back = group_from_json(g.to_json())
        assert back.canonical == g.canonical and back.name == g.name


def test_matrices_unitary():
    for w in get_group("G2").canonical:
        u = matrix_of(w)
        assert np.allclose(u @ u.conj().T, np.eye(4))
