"""Selective transfer D_1 -> D_2 in H_{1,1} while H_{1,-1} and H_{1,0} stay put.

The law is built from the perturbed spectrum at mu = 1. Its frequencies are
the gaps of the shifted Hamiltonian and its amplitudes come from the
logarithm of the target rotation. Printed to two decimals, it is the
published five-tone pulse.
"""

import numpy as np

from symrotor import RotorParams, SubspaceId, SynthesisSpec, evaluate_law, synthesize
from symrotor.experiment import run_transfer_experiment
from symrotor.synthesis import PUBLISHED_COMPONENTS

params = RotorParams()
spec = SynthesisSpec(SubspaceId(1, 1), dim=10, mu=1.0, epsilon=1 / 25)
law = synthesize(params, spec)

print(f"{'transition':>10} {'25 x amplitude':>15} {'frequency':>10}   published")
for c, (a, w) in zip(law.report, PUBLISHED_COMPONENTS):
    print(f"{c.p + 1:>5}->{c.q + 1:<4} {25 * c.amplitude:15.4f} {c.frequency:10.4f}   {a:+.2f} sin({w} t)")
print(f"predicted transfer time {law.predicted_time:.2f}")

ev = evaluate_law(law, params, spec, t_final=80.0, bystanders=[SubspaceId(1, -1), SubspaceId(1, 0)], window=(60.0, 70.0))
print(f"\nsynthesized law: |<D_2, psi>| = {ev.fidelity_best:.5f} at t = {ev.t_best:.3f}")
print(f"  bystanders keep |<D_1, psi>| = {ev.bystanders[0]:.5f} and {ev.bystanders[1]:.5f}")

# The same run with the published, rounded pulse.
r = run_transfer_experiment()
print(f"\nrounded pulse, best over [0, 80]: {r.fidelity:.5f} at t = {r.t_star:.3f}")
print(f"  bystanders at that time: {r.bystanders[0]:.5f}, {r.bystanders[1]:.5f}")
local = run_transfer_experiment(window=(62.0, 68.0))
print(f"rounded pulse, peak near 67: {local.fidelity:.5f} at t = {local.t_star:.3f}")

# Coarse plot-ready samples of the transfer curve.
t = ev.trajectory.times[::200]
f = ev.fidelity[::200]
print("\n t      |<D_2,psi>|")
for ti, fi in zip(t, f):
    print(f"{ti:6.1f}  {'#' * int(40 * fi):<40} {fi:.3f}")
