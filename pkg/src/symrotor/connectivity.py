"""Chains of connectedness, spectral gaps and resonance checks.

A chain links every retained level of a subspace through nonzero coupling
elements. It is non-resonant when none of its gaps is shared by another
coupled pair of the same truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .basis import BasisLabel, SubspaceId, subspace_basis
from .hamiltonian import GalerkinPair

__all__ = [
    "ChainOfConnectedness",
    "GapSet",
    "Collision",
    "ResonanceReport",
    "default_chain",
    "chain_indices",
    "validate_chain",
    "is_connected",
    "gap_set",
    "coupled_pairs",
    "is_nonresonant",
    "resonant_extract",
    "distinct_gaps",
]

Link = tuple[BasisLabel, BasisLabel]

GAP_TOL = 1e-9


@dataclass(frozen=True)
class ChainOfConnectedness:
    subspace: SubspaceId
    links: tuple[Link, ...]

    def __post_init__(self):
        for (a, b) in self.links:
            if a.subspace != self.subspace or b.subspace != self.subspace:
                raise ValueError(f"link ({a}, {b}) leaves subspace {self.subspace}")
        for (_, end), (start, _) in zip(self.links, self.links[1:]):
            if end != start:
                raise ValueError(f"consecutive links do not share an endpoint: {end} != {start}")

    def __len__(self):
        return len(self.links)


@dataclass(frozen=True)
class GapSet:
    entries: tuple[tuple[Link, float], ...]

    @property
    def gaps(self) -> np.ndarray:
        return np.array([g for _, g in self.entries])


@dataclass(frozen=True)
class Collision:
    """A chain link whose gap is matched by another coupled pair."""

    link: tuple[int, int]
    other: tuple[int, int]
    link_gap: float
    other_gap: float

    @property
    def difference(self) -> float:
        return abs(self.link_gap - self.other_gap)


@dataclass(frozen=True)
class ResonanceReport:
    nonresonant: bool
    collisions: tuple[Collision, ...]

    def __bool__(self):
        return self.nonresonant


def default_chain(id: SubspaceId, dim: int) -> ChainOfConnectedness:
    """Nearest-neighbour chain (j, j+1) over the first `dim` levels."""
    if dim < 2:
        raise ValueError(f"a chain needs at least two levels, got dim={dim}")
    labels = subspace_basis(id, dim).labels
    return ChainOfConnectedness(id, tuple(zip(labels[:-1], labels[1:])))


def chain_indices(pair: GalerkinPair, chain: ChainOfConnectedness) -> list[tuple[int, int]]:
    """Truncation indices of every link; KeyError if a link is not retained."""
    return [(pair.basis.index_of(a), pair.basis.index_of(b)) for a, b in chain.links]


def is_connected(matrix: np.ndarray) -> bool:
    """True when the graph of nonzero off-diagonal entries is connected."""
    adj = np.asarray(matrix) != 0
    np.fill_diagonal(adj, False)
    n_comp, _ = connected_components(adj, directed=False)
    return n_comp == 1


def validate_chain(pair: GalerkinPair, chain: ChainOfConnectedness) -> None:
    """Raise ValueError unless every link couples and the chain spans the truncation."""
    idx = chain_indices(pair, chain)
    for (p, q), link in zip(idx, chain.links):
        if pair.coupling[p, q] == 0:
            raise ValueError(f"link {link[0]}-{link[1]} has zero coupling")
    visited = {i for pq in idx for i in pq}
    if visited != set(range(pair.dim)):
        raise ValueError("chain does not reach every retained level")
    if not is_connected(pair.coupling):
        raise ValueError("coupling graph of the truncation is disconnected")


def gap_set(pair: GalerkinPair, chain: ChainOfConnectedness) -> GapSet:
    try:
        idx = chain_indices(pair, chain)
    except KeyError as exc:
        raise ValueError(str(exc)) from None
    E = pair.drift_diag
    return GapSet(tuple((link, float(abs(E[q] - E[p]))) for link, (p, q) in zip(chain.links, idx)))


def coupled_pairs(pair: GalerkinPair) -> list[tuple[int, int]]:
    """Unordered index pairs (p <= q) with nonzero coupling, diagonal included."""
    p, q = np.nonzero(np.triu(pair.coupling))
    return list(zip(p.tolist(), q.tolist()))


def is_nonresonant(pair: GalerkinPair, chain: ChainOfConnectedness, tol: float = GAP_TOL) -> ResonanceReport:
    """Check the chain's gaps against every other coupled pair of the truncation.

    All violations are returned, not only the first one.
    """
    E = pair.drift_diag
    others = coupled_pairs(pair)
    collisions = []
    for p, q in chain_indices(pair, chain):
        g = abs(E[q] - E[p])
        link = (min(p, q), max(p, q))
        for l, lp in others:
            if (l, lp) == link:
                continue
            g2 = abs(E[lp] - E[l])
            if abs(g - g2) <= tol:
                collisions.append(Collision((p, q), (l, lp), float(g), float(g2)))
    return ResonanceReport(not collisions, tuple(collisions))


def resonant_extract(pair: GalerkinPair, sigma: float, tol: float = GAP_TOL) -> np.ndarray:
    """Keep the coupling entries whose gap equals `sigma` (within `tol`)."""
    E = pair.drift_diag
    gaps = np.abs(np.subtract.outer(E, E))
    return np.where(np.abs(gaps - sigma) <= tol, pair.coupling, 0.0)


def distinct_gaps(pair: GalerkinPair, tol: float = GAP_TOL) -> np.ndarray:
    """Sorted gap values of the coupled pairs, merged when closer than `tol`."""
    E = pair.drift_diag
    vals = sorted(abs(E[q] - E[p]) for p, q in coupled_pairs(pair))
    out: list[float] = []
    for v in vals:
        if not out or v - out[-1] > tol:
            out.append(v)
    return np.array(out)
