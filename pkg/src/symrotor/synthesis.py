"""Resonant multi-sine control laws for selective transfers.

Recipe
------
1. Diagonalise ``drift + mu * coupling``: eigenvalues lam, eigenvectors V.
2. Target rotation R = expm(K), with K the real skew generator
   ``K[s, t] = theta, K[t, s] = -theta`` (plus any extra blocks). R therefore
   sends e_s to ``cos(theta) e_s - sin(theta) e_t``. By default K is written
   in the rotor basis (``frame="basis"``), which addresses D-functions;
   ``frame="eigen"`` writes it directly on perturbed eigenvectors.
3. Express R and the coupling in the perturbed eigenbasis and take the
   principal logarithm L = logm(V^T R V).
4. For every pair p < q with a non-negligible L_pq, drive the perturbed gap
   omega_pq = lam_q - lam_p with amplitude
   ``a_pq = -epsilon * L_pq / (|L| * Bt_pq)``, where |L| is the largest
   rotation angle.

Step 4 follows from first-order averaging. In the interaction frame a
component ``a sin(omega_pq t)`` drives the (p, q) entry of the generator at
rate ``-a Bt_pq / 2``. The averaged generator is then
``(epsilon / (2 |L|)) L``, and R is reached after T = 2 |L| / epsilon.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np
from scipy import linalg, optimize

from .basis import SubspaceId
from .dynamics import SineSum, Trajectory, default_step, propagate
from .hamiltonian import GalerkinPair, RotorParams, build_galerkin
from .perturbation import perturbed_spectrum

__all__ = [
    "SynthesisSpec",
    "LawComponent",
    "SynthesizedLaw",
    "LawEvaluation",
    "synthesize",
    "evaluate_law",
    "peak_overlap",
    "preset",
    "published_pulse",
    "PUBLISHED_COMPONENTS",
]

# Amplitudes are the printed coefficients divided by 25.
PUBLISHED_COMPONENTS = (
    (2.38, 3.71),
    (-4.42, 9.63),
    (7.13, 17.59),
    (0.01, 5.91),
    (-0.02, 13.88),
)

FREQ_TOL = 1e-6
MIN_COUPLING = 1e-12


def published_pulse() -> SineSum:
    """The published transfer pulse for (k, m) = (1, 1) at A = 1, C = 2, verbatim."""
    return SineSum(1.0, tuple((a / 25, w) for a, w in PUBLISHED_COMPONENTS))


def preset(name: str) -> SineSum:
    if name.lower() in ("published", "transfer"):
        return published_pulse()
    raise ValueError(f"unknown preset {name!r}")


@dataclass(frozen=True)
class SynthesisSpec:
    subspace: SubspaceId
    dim: int = 10
    mu: float = 1.0
    source_index: int = 0
    target_index: int = 1
    epsilon: float = 1 / 25
    angle: float = math.pi / 2
    extra_transitions: tuple[tuple[int, int, float], ...] = ()
    frame: Literal["basis", "eigen"] = "basis"
    threshold: float = 1e-4

    def __post_init__(self):
        if self.source_index == self.target_index:
            raise ValueError("source and target must differ")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.frame not in ("basis", "eigen"):
            raise ValueError(f"frame must be 'basis' or 'eigen', got {self.frame!r}")
        for p in (self.source_index, self.target_index, *(i for t in self.extra_transitions for i in t[:2])):
            if not 0 <= p < self.dim:
                raise ValueError(f"index {p} outside truncation of dimension {self.dim}")
        object.__setattr__(self, "extra_transitions", tuple((int(p), int(q), float(a)) for p, q, a in self.extra_transitions))


@dataclass(frozen=True)
class LawComponent:
    p: int
    q: int
    frequency: float
    ratio: float
    amplitude: float
    log_entry: float
    coupling_entry: float
    predicted_time: float


@dataclass(frozen=True, eq=False)
class SynthesizedLaw:
    control: SineSum
    report: tuple[LawComponent, ...]
    predicted_time: float
    rotation: np.ndarray = field(repr=False)
    log_rotation: np.ndarray = field(repr=False)
    eigenbasis: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    initial: np.ndarray = field(repr=False)
    target: np.ndarray = field(repr=False)


def _generator(spec: SynthesisSpec) -> np.ndarray:
    K = np.zeros((spec.dim, spec.dim))
    blocks = [(spec.source_index, spec.target_index, spec.angle), *spec.extra_transitions]
    for p, q, theta in blocks:
        K[p, q] += theta
        K[q, p] -= theta
    return K


def synthesize(params: RotorParams, spec: SynthesisSpec, pair: Optional[GalerkinPair] = None) -> SynthesizedLaw:
    """Build the resonant sine-sum law for `spec`.

    Parameters
    ----------
    params : RotorParams
    spec : SynthesisSpec
    pair : GalerkinPair, optional
        Use these matrices instead of the rotor truncation of `spec.subspace`.

    Raises
    ------
    ValueError
        If two selected transitions share a perturbed gap, or a selected
        transition has vanishing coupling in the perturbed eigenbasis.
    """
    if pair is None:
        pair = build_galerkin(params, spec.subspace, spec.dim)
    elif pair.dim != spec.dim:
        raise ValueError(f"pair has dimension {pair.dim}, spec asks for {spec.dim}")
    ps = perturbed_spectrum(pair, spec.mu)
    lam, V = ps.eigenvalues, ps.eigenvectors

    R = linalg.expm(_generator(spec))
    R_eig = V.T @ R @ V if spec.frame == "basis" else R
    L = linalg.logm(R_eig)
    if np.max(np.abs(np.imag(L))) > 1e-10:
        raise ValueError("target rotation has no real principal logarithm")
    L = np.real(L)
    B_eig = V.T @ pair.coupling @ V
    scale = float(np.linalg.norm(L, 2))
    T_pred = 2 * scale / spec.epsilon

    forced = {(min(p, q), max(p, q)) for p, q, _ in spec.extra_transitions}
    components = []
    for p, q in itertools.combinations(range(spec.dim), 2):
        if abs(L[p, q]) <= spec.threshold * scale and (p, q) not in forced:
            continue
        b = B_eig[p, q]
        if abs(b) < MIN_COUPLING:
            raise ValueError(f"transition ({p}, {q}) is not addressable: coupling {b:.3e} in the perturbed eigenbasis")
        ratio = L[p, q] / b
        components.append(
            LawComponent(
                p=p,
                q=q,
                frequency=float(lam[q] - lam[p]),
                ratio=float(ratio),
                amplitude=float(-spec.epsilon * ratio / scale),
                log_entry=float(L[p, q]),
                coupling_entry=float(b),
                predicted_time=T_pred,
            )
        )

    freqs = sorted((c.frequency, (c.p, c.q)) for c in components)
    for (w1, t1), (w2, t2) in zip(freqs, freqs[1:]):
        if w2 - w1 <= FREQ_TOL:
            raise ValueError(f"transitions {t1} and {t2} share the perturbed gap {w1:.9g} at mu={spec.mu}; choose another shift")

    if spec.frame == "basis":
        x0 = np.eye(spec.dim)[spec.source_index]
        xt = np.eye(spec.dim)[spec.target_index]
    else:
        x0, xt = V[:, spec.source_index], V[:, spec.target_index]
    control = SineSum(spec.mu, tuple((c.amplitude, c.frequency) for c in components))
    return SynthesizedLaw(control, tuple(components), T_pred, R_eig, L, V, lam, x0.astype(complex), xt.astype(complex))


def peak_overlap(
    traj: Trajectory,
    i: int,
    target,
    window: Optional[tuple[float, float]] = None,
) -> tuple[float, float]:
    """Time and value of the largest |<target, psi_i(t)>| within `window`.

    The stored grid is scanned first, then the maximum is refined with a
    bounded scalar search over ten integration steps on either side.
    """
    target = np.asarray(target, dtype=complex)
    t = traj.times
    lo, hi = window if window is not None else (t[0], t[-1])
    mask = (t >= lo) & (t <= hi)
    if not np.any(mask):
        raise ValueError(f"no stored time inside window {window}")
    overlap = np.abs(traj.states[i] @ target.conj())
    n = int(np.flatnonzero(mask)[np.argmax(overlap[mask])])
    a = max(lo, t[n] - 10 * traj.step)
    b = min(hi, t[n] + 10 * traj.step)
    if b <= a:
        return float(t[n]), float(overlap[n])

    def neg(s):
        return -abs(np.vdot(target, traj.state_at(i, s)))

    res = optimize.minimize_scalar(neg, bounds=(a, b), method="bounded", options={"xatol": 1e-6})
    if -res.fun >= overlap[n]:
        return float(res.x), float(-res.fun)
    return float(t[n]), float(overlap[n])


@dataclass(frozen=True, eq=False)
class LawEvaluation:
    trajectory: Trajectory
    fidelity: np.ndarray
    t_best: float
    fidelity_best: float
    bystanders: tuple[float, ...]


def evaluate_law(
    law: SynthesizedLaw,
    params: RotorParams,
    spec: SynthesisSpec,
    t_final: Optional[float] = None,
    step: Optional[float] = None,
    bystanders: Sequence[SubspaceId] = (),
    pair: Optional[GalerkinPair] = None,
    decimation: int = 10,
    window: Optional[tuple[float, float]] = None,
) -> LawEvaluation:
    """Run the law and track the overlap with the target state.

    Bystander subspaces start in their lowest level; their survival
    amplitude |<phi_0, psi(t_best)>| is reported.
    """
    if pair is None:
        pair = build_galerkin(params, spec.subspace, spec.dim)
    pairs = [pair] + [build_galerkin(params, b, spec.dim) for b in bystanders]
    initial = [law.initial] + [np.eye(spec.dim, dtype=complex)[0] for _ in bystanders]
    if t_final is None:
        t_final = 1.5 * law.predicted_time
    if step is None:
        step = default_step(pairs, law.control)
    traj = propagate(pairs, law.control, initial, t_final, step, decimation)
    fid = np.abs(traj.states[0] @ law.target.conj())
    t_best, f_best = peak_overlap(traj, 0, law.target, window)
    by = tuple(float(abs(traj.state_at(i, t_best)[0])) for i in range(1, len(pairs)))
    return LawEvaluation(traj, fid, t_best, f_best, by)
