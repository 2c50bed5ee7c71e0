import pytest
from hypothesis import given, strategies as st

from symrotor.basis import (
    BasisLabel,
    SubspaceId,
    canonical_representative,
    in_canonical_set,
    lex_index,
    lex_inverse,
    map_index,
    subspace_basis,
)

ints = st.integers(-12, 12)
ids = st.builds(SubspaceId, ints, ints)


def test_label_requires_projections_below_j():
    with pytest.raises(ValueError):
        BasisLabel(1, 2, 0)
    with pytest.raises(ValueError):
        BasisLabel(2, 0, -3)
    assert BasisLabel(2, -2, 1).subspace == SubspaceId(-2, 1)


def test_subspace_basis_starts_at_lowest_allowed_j():
    b = subspace_basis(SubspaceId(-3, 1), 4)
    assert b.j_min == 3
    assert list(b.js) == [3, 4, 5, 6]
    assert [l.j for l in b.labels] == [3, 4, 5, 6]
    assert b.index_of(BasisLabel(5, -3, 1)) == 2
    with pytest.raises(KeyError):
        b.index_of(BasisLabel(7, -3, 1))
    with pytest.raises(KeyError):
        b.index_of(BasisLabel(4, 3, 1))


@given(ids, st.sampled_from([1, 2, 3]))
def test_maps_are_involutions(sid, tag):
    assert map_index(map_index(sid, tag), tag) == sid
    assert map_index(sid, tag).j_min == sid.j_min


@given(ids)
def test_every_subspace_has_a_canonical_representative(sid):
    rep, tag = canonical_representative(sid)
    assert in_canonical_set(rep)
    assert map_index(rep, tag) == sid


def test_canonical_representative_examples():
    assert canonical_representative(SubspaceId(2, 1)) == (SubspaceId(1, 2), 2)
    assert canonical_representative(SubspaceId(1, -2)) == (SubspaceId(-1, 2), 1)
    assert canonical_representative(SubspaceId(-2, -1)) == (SubspaceId(1, 2), 3)
    assert canonical_representative(SubspaceId(1, 2)) == (SubspaceId(1, 2), "identity")
    assert canonical_representative(SubspaceId(0, -4)) == (SubspaceId(0, 4), 1)


def test_canonical_set_membership():
    assert in_canonical_set(SubspaceId(0, 0))
    assert in_canonical_set(SubspaceId(-3, 3))
    assert not in_canonical_set(SubspaceId(6, 1))
    assert not in_canonical_set(SubspaceId(0, -1))


@given(ids)
def test_lex_index_round_trip(sid):
    assert lex_inverse(lex_index(sid)) == sid


@given(st.integers(0, 10_000))
def test_lex_inverse_round_trip(n):
    assert lex_index(lex_inverse(n)) == n


def test_lex_enumerates_shells_in_order():
    for s in range(5):
        block = {lex_inverse(n) for n in range((2 * s + 1) ** 2)}
        assert block == {SubspaceId(k, m) for k in range(-s, s + 1) for m in range(-s, s + 1)}
    assert lex_index(SubspaceId(0, 0)) == 0
    assert [lex_inverse(n) for n in range(1, 4)] == [SubspaceId(-1, -1), SubspaceId(-1, 0), SubspaceId(-1, 1)]
    with pytest.raises(ValueError):
        lex_inverse(-1)
