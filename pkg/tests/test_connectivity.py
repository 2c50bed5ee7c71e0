import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symrotor.basis import BasisLabel, SubspaceId
from symrotor.connectivity import (
    ChainOfConnectedness,
    default_chain,
    distinct_gaps,
    gap_set,
    is_connected,
    is_nonresonant,
    resonant_extract,
    validate_chain,
)
from symrotor.hamiltonian import GalerkinPair, RotorParams, build_galerkin


@pytest.mark.parametrize("k,m,n", [(0, 0, 2), (1, 1, 10), (-2, 3, 7), (6, 1, 5)])
def test_default_chain_connects_the_truncation(k, m, n):
    sid = SubspaceId(k, m)
    pair = build_galerkin(RotorParams(), sid, n)
    chain = default_chain(sid, n)
    assert len(chain) == n - 1
    validate_chain(pair, chain)
    assert is_connected(pair.coupling)


def test_chain_gaps_follow_the_gap_law():
    pair = build_galerkin(RotorParams(A=2.0), SubspaceId(1, 2), 5)
    gaps = gap_set(pair, default_chain(SubspaceId(1, 2), 5))
    assert gaps.gaps.tolist() == [2 * 2.0 * (j + 1) for j in range(2, 6)]


@pytest.mark.parametrize("k,m", [(0, 0), (1, 1), (2, -1), (3, 3)])
def test_rotor_chains_are_nonresonant(k, m):
    sid = SubspaceId(k, m)
    pair = build_galerkin(RotorParams(), sid, 12)
    report = is_nonresonant(pair, default_chain(sid, 12))
    assert report and report.collisions == ()


def test_collisions_are_listed_exhaustively():
    # equally spaced levels, all coupled: every unit gap collides with the others
    pair = GalerkinPair.synthetic([0.0, 1.0, 2.0, 3.0], np.ones((4, 4)))
    report = is_nonresonant(pair, default_chain(SubspaceId(0, 0), 4))
    assert not report
    first_link = {c.other for c in report.collisions if c.link == (0, 1)}
    assert first_link == {(1, 2), (2, 3)}
    assert len(report.collisions) == 6
    assert all(c.difference == 0 for c in report.collisions)


def test_chain_rejects_foreign_labels_and_gaps():
    a, b = BasisLabel(1, 1, 1), BasisLabel(2, 1, 1)
    with pytest.raises(ValueError):
        ChainOfConnectedness(SubspaceId(1, 0), ((a, b),))
    with pytest.raises(ValueError):
        ChainOfConnectedness(SubspaceId(1, 1), ((a, b), (BasisLabel(3, 1, 1), BasisLabel(4, 1, 1))))
    with pytest.raises(ValueError):
        default_chain(SubspaceId(1, 1), 1)


def test_gap_set_rejects_links_outside_the_truncation():
    pair = build_galerkin(RotorParams(), SubspaceId(1, 1), 3)
    with pytest.raises(ValueError):
        gap_set(pair, default_chain(SubspaceId(1, 1), 5))


def test_validate_chain_rejects_zero_couplings():
    pair = GalerkinPair.synthetic([0.0, 1.0, 3.0], [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        validate_chain(pair, default_chain(SubspaceId(0, 0), 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 12))
def test_resonant_extract_partitions_the_rotor_coupling(k, m, n):
    pair = build_galerkin(RotorParams(), SubspaceId(k, m), n)
    parts = [resonant_extract(pair, s) for s in distinct_gaps(pair)]
    assert np.array_equal(sum(parts, np.zeros((n, n))), pair.coupling)
    support = sum(((p != 0).astype(int) for p in parts), np.zeros((n, n), dtype=int))
    assert support.max() <= 1


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**31 - 1))
def test_resonant_extract_partitions_dense_couplings(n, seed):
    rng = np.random.default_rng(seed)
    drift = rng.integers(0, 6, size=n).astype(float)
    B = rng.normal(size=(n, n))
    pair = GalerkinPair.synthetic(drift, B + B.T)
    total = np.zeros((n, n))
    for s in distinct_gaps(pair):
        total = total + resonant_extract(pair, s)
    assert np.array_equal(total, pair.coupling)
