"""How much the 10-level truncation can be trusted.

The error on the first N1 levels is at most
    (integral of |u|) x |coupling out of the truncation| x sup_s |pi_N1 X(t,s) e_N|.
The last factor asks how much of the top retained level can flow back
down to the levels we care about. For a smooth resonant pulse it is tiny.
"""

import numpy as np

from symrotor import RotorParams, SubspaceId, build_galerkin, galerkin_bound, published_pulse, propagate

params = RotorParams()
sid = SubspaceId(1, 1)
u = published_pulse()

for t in (20.0, 40.0, 66.889):
    gb = galerkin_bound(params, sid, 2, 10, u, t)
    print(
        f"t={t:7.3f}  |u|_L1={gb.l1_norm_u:8.3f}  |b|={gb.boundary_coupling_abs:.4f}"
        f"  sup={gb.sup_term:.3e}  bound={gb.bound:.3e}"
    )

# Compare with the actual difference to a 20-level run. Both runs must use
# the same step, otherwise the integration error (~1e-6 here) swamps the
# truncation error being measured.
t, h = 66.889, 0.001
small = propagate([build_galerkin(params, sid, 10)], u, [np.eye(10)[0]], t, h).states[0][-1]
large = propagate([build_galerkin(params, sid, 20)], u, [np.eye(20)[0]], t, h).states[0][-1]
print(f"\nmeasured error on the two lowest levels: {np.linalg.norm(large[:2] - small[:2]):.3e}")
