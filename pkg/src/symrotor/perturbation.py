"""Eigenvalue perturbation of the drift by a constant control shift.

Derivatives are taken with respect to the shift mu of the eigenvalues of
``diag(drift) + mu * coupling`` at mu = 0 (Hellmann-Feynman and the usual
second-order sum). They decide whether a shift lifts coincidences between
the gaps of different subspaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .basis import SubspaceId
from .connectivity import GAP_TOL, ChainOfConnectedness, chain_indices, coupled_pairs
from .hamiltonian import GalerkinPair

__all__ = [
    "PerturbedSpectrum",
    "Coincidence",
    "SimultaneityVerdict",
    "first_order_shift",
    "second_order_shift",
    "perturbed_spectrum",
    "fix_phases",
    "rotor_first_order_gap_shift",
    "coincidence_classify",
    "gap_separation",
]

LIFT_TOL = 1e-12

Resolution = Literal["no-coincidence", "lifted-first-order", "lifted-second-order", "unresolved"]


@dataclass(frozen=True, eq=False)
class PerturbedSpectrum:
    mu: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    first_order: np.ndarray
    second_order: np.ndarray

    def gap(self, p: int, q: int) -> float:
        return float(abs(self.eigenvalues[q] - self.eigenvalues[p]))


def first_order_shift(pair: GalerkinPair, p: int) -> float:
    """d lambda_p / d mu at mu = 0, i.e. the diagonal coupling element."""
    return float(pair.coupling[p, p])


def second_order_shift(pair: GalerkinPair, p: int, include_boundary: bool = True) -> float:
    """d^2 lambda_p / d mu^2 at mu = 0.

    Equal to ``2 * sum_q |b_pq|^2 / (E_p - E_q)`` over the coupled levels q.
    With `include_boundary` the level just above the truncation contributes
    through the stored boundary element, which makes the value exact for the
    infinite tri-diagonal problem.
    """
    E = pair.drift_diag
    if len(np.unique(E)) != len(E):
        raise ValueError("second-order shift needs a non-degenerate drift")
    row = pair.coupling[p]
    mask = np.arange(pair.dim) != p
    total = np.sum(row[mask] ** 2 / (E[p] - E[mask]))
    if include_boundary and p == pair.dim - 1 and pair.boundary_energy is not None:
        total += pair.boundary_coupling**2 / (E[p] - pair.boundary_energy)
    return float(2.0 * total)


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so that each one's largest-magnitude entry is real positive."""
    v = np.array(vectors)
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(lead) / lead)[None, :]


def perturbed_spectrum(pair: GalerkinPair, mu: float) -> PerturbedSpectrum:
    w, v = np.linalg.eigh(pair.hamiltonian(mu))
    first = np.array([first_order_shift(pair, p) for p in range(pair.dim)])
    second = np.array([second_order_shift(pair, p) for p in range(pair.dim)])
    return PerturbedSpectrum(mu=float(mu), eigenvalues=w, eigenvectors=fix_phases(v), first_order=first, second_order=second)


def rotor_first_order_gap_shift(delta: float, k: int, m: int, j: int) -> float:
    """Closed form of b_{j+1,j+1} - b_{j,j} for the rotor: -2 delta k m / (j (j+1) (j+2))."""
    return -2.0 * delta * k * m / (j * (j + 1) * (j + 2))


@dataclass(frozen=True)
class Coincidence:
    """One chain link of `subspace` compared with one coupled pair of `other`."""

    subspace: SubspaceId
    link: tuple[int, int]
    other: SubspaceId
    other_pair: Optional[tuple[int, int]]
    resolution: Resolution
    gap: float
    first_order_margin: float = float("nan")
    second_order_margin: float = float("nan")

    @property
    def margin(self) -> float:
        if self.resolution == "lifted-first-order":
            return self.first_order_margin
        if self.resolution == "lifted-second-order":
            return self.second_order_margin
        return float("nan")


@dataclass(frozen=True)
class SimultaneityVerdict:
    pairs: tuple[Coincidence, ...]
    j_ranges: dict = field(default_factory=dict)

    @property
    def coincidences(self) -> list[Coincidence]:
        return [c for c in self.pairs if c.resolution != "no-coincidence"]

    @property
    def unresolved(self) -> list[Coincidence]:
        return [c for c in self.pairs if c.resolution == "unresolved"]

    @property
    def simultaneous(self) -> bool:
        return not self.unresolved

    def counts(self) -> dict:
        out = {"no-coincidence": 0, "lifted-first-order": 0, "lifted-second-order": 0, "unresolved": 0}
        for c in self.pairs:
            out[c.resolution] += 1
        return out


def _oriented(E: np.ndarray, p: int, q: int) -> tuple[int, int]:
    return (p, q) if E[p] <= E[q] else (q, p)


def coincidence_classify(
    subspaces: Sequence[tuple[SubspaceId, GalerkinPair, ChainOfConnectedness]],
    tol: float = GAP_TOL,
    lift_tol: float = LIFT_TOL,
) -> SimultaneityVerdict:
    """Classify every gap coincidence between the listed subspaces.

    For each chain link of one subspace and each coupled pair of another,
    equal gaps are resolved at first order when the gap derivatives
    (diagonal coupling differences) differ, else at second order when the
    second derivatives differ; otherwise the coincidence is unresolved.
    Gaps are oriented upper minus lower level so that the Taylor expansion
    of the two gaps is compared term by term. Links with no coincident pair
    in a given other subspace are reported as ``no-coincidence``.
    """
    prepared = []
    for sid, pair, chain in subspaces:
        second = np.array([second_order_shift(pair, p) for p in range(pair.dim)])
        first = np.diag(pair.coupling)
        prepared.append((sid, pair, chain_indices(pair, chain), first, second))

    out = []
    for (a, b) in itertools.permutations(range(len(prepared)), 2):
        sid_a, pa, links_a, f_a, s_a = prepared[a]
        sid_b, pb, _, f_b, s_b = prepared[b]
        Ea, Eb = pa.drift_diag, pb.drift_diag
        others = [(l, lp) for l, lp in coupled_pairs(pb) if l != lp]
        for p, q in links_a:
            lo, hi = _oriented(Ea, p, q)
            g = Ea[hi] - Ea[lo]
            matched = False
            for l, lp in others:
                lo2, hi2 = _oriented(Eb, l, lp)
                if abs(g - (Eb[hi2] - Eb[lo2])) > tol:
                    continue
                matched = True
                d1 = (f_a[hi] - f_a[lo]) - (f_b[hi2] - f_b[lo2])
                d2 = (s_a[hi] - s_a[lo]) - (s_b[hi2] - s_b[lo2])
                if abs(d1) > lift_tol:
                    res = "lifted-first-order"
                elif abs(d2) > lift_tol:
                    res = "lifted-second-order"
                else:
                    res = "unresolved"
                out.append(Coincidence(sid_a, (p, q), sid_b, (l, lp), res, float(g), abs(float(d1)), abs(float(d2))))
            if not matched:
                out.append(Coincidence(sid_a, (p, q), sid_b, None, "no-coincidence", float(g)))
    j_ranges = {sid: (pair.basis.j_min, pair.basis.j_min + pair.dim - 1) for sid, pair, _ in subspaces}
    return SimultaneityVerdict(tuple(out), j_ranges)


def gap_separation(
    pairs: Sequence[GalerkinPair],
    mu: float,
    transitions: Optional[Sequence[Sequence[tuple[int, int]]]] = None,
) -> float:
    """Smallest distance between a used gap of one subspace and any gap of another at shift `mu`.

    `transitions[i]` lists the index pairs whose perturbed gaps are driven in
    subspace i (default: nearest neighbours). Every gap of the perturbed
    eigenbasis of the other subspaces is a candidate match, since at mu != 0
    all perturbed levels couple.
    """
    spectra = [np.linalg.eigvalsh(p.hamiltonian(mu)) for p in pairs]
    if transitions is None:
        transitions = [[(i, i + 1) for i in range(p.dim - 1)] for p in pairs]
    best = np.inf
    for a, b in itertools.permutations(range(len(pairs)), 2):
        wa, wb = spectra[a], spectra[b]
        all_b = np.abs(np.subtract.outer(wb, wb))[np.triu_indices(len(wb), 1)]
        for p, q in transitions[a]:
            best = min(best, float(np.min(np.abs(all_b - abs(wa[q] - wa[p])))))
    return best
