"""Subspaces that can never be steered independently.

H_{1,2} and H_{2,1} have identical couplings. Their energies differ by the
constant (A - C)(k^2 - m^2), so one evolution is the other up to a global
phase, whatever the control. The same holds for (-1,-2) and (-2,-1).
"""

import numpy as np

from symrotor import RotorParams, SubspaceId, published_pulse, related_map, verify_related
from symrotor.dynamics import Constant, SineSum

params = RotorParams()
source = SubspaceId(1, 2)
controls = {"none": Constant(0.0), "sin t": SineSum(0.0, ((1.0, 1.0),)), "published pulse": published_pulse()}

for tag in (1, 2, 3):
    mp = related_map(params, source, tag)
    res = {name: verify_related(params, mp, u, 20.0, 8) for name, u in controls.items()}
    cells = "  ".join(f"{k}: {v:.1e}" for k, v in res.items())
    print(f"{source} -> {mp.target}  phase rate {mp.phase_rate:+g}   residuals  {cells}")

# With the phase running the other way the agreement is lost immediately.
from symrotor.symmetry import RelatedMap

mp = related_map(params, source, 2)
wrong = RelatedMap(mp.source, mp.target, mp.iso_tag, -mp.phase_rate)
print(f"\nopposite frame phase: residual {verify_related(params, wrong, Constant(0.0), 20.0, 8):.3f}")
