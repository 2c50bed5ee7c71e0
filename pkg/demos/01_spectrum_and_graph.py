"""Spectrum and coupling graph of a single subspace.

Each subspace H_{k,m} is an infinite ladder j = max(|k|,|m|), j+1, ... The
field couples a level only to itself and its two neighbours, so the
nearest-neighbour chain already connects everything. Its gaps grow like
2A(j+1), so no two links resonate.
"""

from symrotor import RotorParams, SubspaceId, build_galerkin, default_chain, gap_set, is_nonresonant

params = RotorParams(A=1.0, C=2.0, delta=1.0)
sid = SubspaceId(1, 1)
pair = build_galerkin(params, sid, 6)

print(f"Subspace {sid}: first {pair.dim} levels")
print(f"{'j':>3} {'energy':>8} {'<j|cos b|j>':>12} {'<j|cos b|j+1>':>14}")
off = list(pair.coupling.diagonal(1)) + [pair.boundary_coupling]
for i, j in enumerate(pair.basis.js):
    print(f"{j:>3} {pair.drift_diag[i]:8.3f} {pair.coupling[i, i]:12.6f} {off[i]:14.6f}")

chain = default_chain(sid, pair.dim)
gaps = gap_set(pair, chain)
print("\nChain gaps:", ", ".join(f"{g:g}" for g in gaps.gaps))
report = is_nonresonant(pair, chain)
print("Non-resonant:", bool(report))

# A hand-made ladder with equal spacing is the opposite case. Every link
# collides with every other coupled pair that has the same gap.
import numpy as np

from symrotor.hamiltonian import GalerkinPair

flat = GalerkinPair.synthetic([0.0, 1.0, 2.0], np.ones((3, 3)))
bad = is_nonresonant(flat, default_chain(SubspaceId(0, 0), 3))
print("\nEqually spaced ladder with full coupling:")
for c in bad.collisions:
    print(f"  link {c.link} collides with pair {c.other} (gap {c.link_gap:g})")
