import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symrotor.basis import SubspaceId
from symrotor.connectivity import default_chain
from symrotor.hamiltonian import GalerkinPair, RotorParams, build_galerkin
from symrotor.perturbation import (
    coincidence_classify,
    first_order_shift,
    fix_phases,
    gap_separation,
    perturbed_spectrum,
    rotor_first_order_gap_shift,
    second_order_shift,
)

JMAX = 20


def shifts_up_to(params, sid, jmax=JMAX):
    """Second derivatives of every level j <= jmax, exact for the infinite chain."""
    pair = build_galerkin(params, sid, jmax + 1 - sid.j_min)
    return {j: second_order_shift(pair, i) for i, j in enumerate(pair.basis.js)}


def test_two_level_second_derivative_matches_closed_form():
    # eigenvalues (D - sqrt(D^2 + 4 mu^2 b^2)) / 2 and its mirror: second derivative -+2 b^2 / D
    D, b = 3.0, 0.7
    pair = GalerkinPair.synthetic([0.0, D], [[0.0, b], [b, 0.0]])
    assert second_order_shift(pair, 0) == pytest.approx(-2 * b * b / D, rel=1e-15)
    assert second_order_shift(pair, 1) == pytest.approx(2 * b * b / D, rel=1e-15)


def test_degenerate_drift_is_rejected():
    pair = GalerkinPair.synthetic([1.0, 1.0], np.eye(2))
    with pytest.raises(ValueError):
        second_order_shift(pair, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(2, 9))
def test_shifts_match_finite_differences(k, m, n):
    pair = build_galerkin(RotorParams(), SubspaceId(k, m), n)
    h1, h2 = 1e-5, 1e-3
    lam = lambda mu: np.linalg.eigvalsh(pair.hamiltonian(mu))
    d1 = (lam(h1) - lam(-h1)) / (2 * h1)
    d2 = (lam(h2) - 2 * lam(0.0) + lam(-h2)) / h2**2
    for p in range(n):
        assert first_order_shift(pair, p) == pytest.approx(d1[p], abs=1e-8)
        assert second_order_shift(pair, p, include_boundary=False) == pytest.approx(d2[p], abs=1e-5)


def test_boundary_term_matches_a_larger_truncation(params):
    sid = SubspaceId(1, 2)
    small = build_galerkin(params, sid, 6)
    big = build_galerkin(params, sid, 8)
    # the level above the truncation is the only one missing from the small sum
    for p in range(6):
        assert second_order_shift(small, p) == pytest.approx(second_order_shift(big, p, include_boundary=False), rel=1e-13)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 8))
def test_rotor_gap_shift_closed_form(k, m, extra):
    j = max(abs(k), abs(m), 1) + extra
    pair = build_galerkin(RotorParams(delta=1.5), SubspaceId(k, m), j + 2 - max(abs(k), abs(m)))
    i = list(pair.basis.js).index(j)
    gap_shift = pair.coupling[i + 1, i + 1] - pair.coupling[i, i]
    assert gap_shift == pytest.approx(rotor_first_order_gap_shift(1.5, k, m, j), rel=1e-12, abs=1e-15)


def test_perturbed_spectrum_phase_convention(params):
    ps = perturbed_spectrum(build_galerkin(params, SubspaceId(1, 1), 6), 1.0)
    V = ps.eigenvectors
    assert np.allclose(V.T @ V, np.eye(6), atol=1e-12)
    lead = V[np.argmax(np.abs(V), axis=0), np.arange(6)]
    assert np.all(lead > 0)
    assert np.all(np.diff(ps.eigenvalues) > 0)
    assert ps.gap(0, 1) == pytest.approx(ps.eigenvalues[1] - ps.eigenvalues[0])
    assert np.array_equal(fix_phases(-V), V)


def test_same_product_pairs_are_separated_at_second_order():
    """For km = k'm' in the canonical set the second derivatives of equal gaps differ."""
    params = RotorParams()
    canon = [SubspaceId(k, m) for m in range(9) for k in range(-m, m + 1)]
    s2 = {sid: shifts_up_to(params, sid) for sid in canon}
    checked = 0
    for a, b in itertools.combinations(canon, 2):
        if a.k * a.m != b.k * b.m:
            continue
        for j in range(max(a.j_min, b.j_min), JMAX):
            q = (s2[a][j + 1] - s2[a][j]) - (s2[b][j + 1] - s2[b][j])
            assert abs(q) > 1e-12, (a, b, j)
            checked += 1
    assert checked > 600


def classify(params, ids, jmax=JMAX):
    entries = []
    for sid in ids:
        n = jmax - sid.j_min + 1
        entries.append((sid, build_galerkin(params, sid, n), default_chain(sid, n)))
    return coincidence_classify(entries)


def test_classification_first_order_when_products_differ(params):
    verdict = classify(params, [SubspaceId(1, 2), SubspaceId(1, 3)], jmax=10)
    assert verdict.coincidences
    assert all(c.resolution == "lifted-first-order" for c in verdict.coincidences)
    assert verdict.simultaneous


def test_classification_second_order_when_products_agree(params):
    verdict = classify(params, [SubspaceId(1, 6), SubspaceId(2, 3)], jmax=12)
    assert verdict.coincidences
    assert {c.resolution for c in verdict.coincidences} == {"lifted-second-order"}
    assert all(c.margin > 1e-12 for c in verdict.coincidences)
    assert verdict.j_ranges[SubspaceId(1, 6)] == (6, 12)


def test_identical_subspaces_are_unresolved(params):
    pair = build_galerkin(params, SubspaceId(1, 1), 4)
    chain = default_chain(SubspaceId(1, 1), 4)
    verdict = coincidence_classify([(SubspaceId(1, 1), pair, chain), (SubspaceId(-1, -1), pair, chain)])
    assert not verdict.simultaneous
    assert verdict.counts()["unresolved"] == 2 * 3


def test_links_without_partner_are_reported(params):
    verdict = classify(params, [SubspaceId(0, 0), SubspaceId(2, 2)], jmax=5)
    none = [c for c in verdict.pairs if c.resolution == "no-coincidence"]
    # links 0-1 and 1-2 of (0,0) have no partner in (2,2), which starts at j=2
    assert {c.link for c in none if c.subspace == SubspaceId(0, 0)} == {(0, 1), (1, 2)}
    assert all(np.isnan(c.margin) for c in none)


def test_gap_separation_is_positive_after_the_shift(params):
    pairs = [build_galerkin(params, s, 10) for s in (SubspaceId(1, 1), SubspaceId(1, -1), SubspaceId(1, 0))]
    assert gap_separation(pairs, 0.0) == 0.0
    assert gap_separation(pairs, 1.0) > 1e-6
