"""Why several subspaces can share a single control.

In different subspaces the rotor has exactly the same gaps 2A(j+1). A field
that drives j -> j+1 in H_{1,6} therefore also drives it in H_{2,3}. A
constant shift mu of the field pulls those gaps apart. When km differs the
split already shows at first order in mu. When km agrees (1*6 == 2*3) it
first shows at second order.
"""

from symrotor import RotorParams, SubspaceId, build_galerkin, coincidence_classify, default_chain
from symrotor.basis import in_canonical_set
from symrotor.perturbation import gap_separation

params = RotorParams()
jmax = 20
family = [SubspaceId(1, 6), SubspaceId(2, 3), SubspaceId(6, 1), SubspaceId(1, 2)]

entries = []
for sid in family:
    if not in_canonical_set(sid):
        print(f"{sid}: related to a canonical subspace, so it follows it; left out")
        continue
    n = jmax - sid.j_min + 1
    entries.append((sid, build_galerkin(params, sid, n), default_chain(sid, n)))

verdict = coincidence_classify(entries)
print("\nverdict counts:", verdict.counts())

shown = set()
for c in verdict.coincidences:
    key = (c.subspace, c.other, c.resolution)
    if key in shown:
        continue
    shown.add(key)
    print(f"  {c.subspace} vs {c.other}: {c.resolution:>20}  e.g. gap {c.gap:g}, margin {c.margin:.3e}")

print("\nall coincidences lifted:", verdict.simultaneous)
for mu in (0.0, 0.1, 1.0):
    sep = gap_separation([p for _, p, _ in entries], mu)
    print(f"closest chain gap to a foreign gap at mu={mu}: {sep:.3e}")
