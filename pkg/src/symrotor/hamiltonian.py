"""Rotational energies, dipole matrix elements and Galerkin truncations.

All stored matrices are real symmetric (Hermitian convention, hbar = 1). The
factor -i only appears inside the propagators of :mod:`symrotor.dynamics`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import BasisLabel, SubspaceBasis, SubspaceId, subspace_basis

__all__ = [
    "RotorParams",
    "GalerkinPair",
    "rot_energy",
    "hz_diag",
    "hz_offdiag",
    "build_galerkin",
]


@dataclass(frozen=True)
class RotorParams:
    """Rotational constants A, C and dipole moment delta of a symmetric top."""

    A: float = 1.0
    C: float = 2.0
    delta: float = 1.0

    def __post_init__(self):
        for name in ("A", "C", "delta"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value}")


@dataclass(frozen=True, eq=False)
class GalerkinPair:
    """Drift and coupling of the N-level truncation of one subspace.

    Attributes
    ----------
    basis : SubspaceBasis
        The retained labels, increasing in j.
    drift_diag : ndarray, shape (N,)
        Rotational energies E_j^{k,m}.
    coupling : ndarray, shape (N, N)
        Matrix of H_z in the retained basis.
    boundary_coupling : float
        Element between the last retained level and the first discarded one.
    boundary_energy : float or None
        Energy of the first discarded level (None for synthetic pairs).
    """

    basis: SubspaceBasis
    drift_diag: np.ndarray
    coupling: np.ndarray
    boundary_coupling: float = 0.0
    boundary_energy: Optional[float] = None
    params: Optional[RotorParams] = field(default=None, repr=False)

    def __post_init__(self):
        d = np.asarray(self.drift_diag, dtype=float)
        b = np.asarray(self.coupling, dtype=float)
        n = d.shape[0]
        if d.ndim != 1 or b.shape != (n, n):
            raise ValueError(f"shape mismatch: drift {d.shape}, coupling {b.shape}")
        if n != self.basis.dim:
            raise ValueError(f"basis has dim {self.basis.dim}, matrices have {n}")
        if not np.array_equal(b, b.T):
            raise ValueError("coupling matrix must be symmetric")
        d.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "drift_diag", d)
        object.__setattr__(self, "coupling", b)

    @classmethod
    def synthetic(cls, drift_diag, coupling) -> "GalerkinPair":
        """Wrap arbitrary matrices; labels are those of H_{0,0} as placeholders."""
        d = np.asarray(drift_diag, dtype=float)
        return cls(subspace_basis(SubspaceId(0, 0), d.shape[0]), d, np.asarray(coupling, dtype=float))

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def id(self) -> SubspaceId:
        return self.basis.id

    @property
    def is_tridiagonal(self) -> bool:
        n = self.dim
        mask = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) > 1
        return not np.any(self.coupling[mask])

    def hamiltonian(self, u: float) -> np.ndarray:
        return np.diag(self.drift_diag) + u * self.coupling


def rot_energy(p: RotorParams, l: BasisLabel) -> float:
    """E_j^{k,m} = A j(j+1) - (A - C) k^2, independent of m."""
    return p.A * l.j * (l.j + 1) - (p.A - p.C) * l.k**2


def hz_diag(p: RotorParams, l: BasisLabel) -> float:
    """Diagonal dipole element delta k m / (j (j+1)); zero for j = 0."""
    if l.j == 0:
        return 0.0
    return p.delta * l.k * l.m / (l.j * (l.j + 1))


def hz_offdiag(p: RotorParams, l: BasisLabel) -> float:
    """Dipole element between (j, k, m) and (j+1, k, m).

    Strictly negative for every valid label, since j + 1 > max(|k|, |m|).
    """
    j1 = l.j + 1
    num = np.sqrt(j1**2 - l.k**2) * np.sqrt(j1**2 - l.m**2)
    den = -j1 * np.sqrt((2 * l.j + 1) * (2 * l.j + 3))
    return float(p.delta * num / den)


def build_galerkin(p: RotorParams, id: SubspaceId, dim: int) -> GalerkinPair:
    """Assemble the `dim`-level truncation of H_{k,m}.

    Selection rules make the coupling tri-diagonal: H_z does not mix k, m,
    or j values more than one apart.
    """
    basis = subspace_basis(id, dim)
    drift = np.array([rot_energy(p, l) for l in basis.labels])
    diag = np.array([hz_diag(p, l) for l in basis.labels])
    off = np.array([hz_offdiag(p, l) for l in basis.labels])
    coupling = np.diag(diag) + np.diag(off[:-1], 1) + np.diag(off[:-1], -1)
    outside = BasisLabel(basis.j_min + dim, id.k, id.m)
    return GalerkinPair(
        basis=basis,
        drift_diag=drift,
        coupling=coupling,
        boundary_coupling=float(off[-1]),
        boundary_energy=rot_energy(p, outside),
        params=p,
    )
