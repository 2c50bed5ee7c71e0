"""Driven dynamics of Galerkin truncations and the truncation error bound.

Integration scheme
------------------
Time is cut into cells [i h, (i+1) h] anchored at t = 0. On each cell the
Hamiltonian ``diag(drift) + u(t) coupling`` is frozen at the cell midpoint
and propagated exactly, ``exp(-i dt H_mid)``, through an eigendecomposition
of the real symmetric matrix. This is the second-order exponential
midpoint rule. Intervals that start or stop inside a cell reuse that cell's
midpoint Hamiltonian, so propagators compose exactly,
``X(t, s) X(s, r) == X(t, r)``, for any s.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .basis import SubspaceId
from .hamiltonian import GalerkinPair, RotorParams, build_galerkin

__all__ = [
    "ControlSignal",
    "Constant",
    "SineSum",
    "PiecewiseConstant",
    "Sampled",
    "control_from_dict",
    "Trajectory",
    "GalerkinBound",
    "default_step",
    "propagate",
    "advance",
    "two_time_propagator",
    "integrator_tolerance",
    "l1_norm",
    "galerkin_bound",
]

log = logging.getLogger(__name__)

NORM_TOL = 1e-12
_CHUNK = 2048


# --------------------------------------------------------------------------
# Controls
# --------------------------------------------------------------------------


class ControlSignal:
    """Scalar control u(t); subclasses are immutable and vectorised in t."""

    def __call__(self, t):
        raise NotImplementedError

    @property
    def max_frequency(self) -> float:
        return 0.0

    def sup_abs(self) -> float:
        """Upper bound on |u(t)| over all t."""
        raise NotImplementedError

    def l1_norm(self, t: float) -> float:
        return _quad_abs(self, 0.0, t, ())

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(ControlSignal):
    value: float

    def __call__(self, t):
        return np.full(np.shape(t), float(self.value)) if np.ndim(t) else float(self.value)

    def sup_abs(self):
        return abs(self.value)

    def l1_norm(self, t):
        return abs(self.value) * t

    def to_dict(self):
        return {"type": "constant", "value": self.value}


@dataclass(frozen=True)
class SineSum(ControlSignal):
    """u(t) = shift + sum_i a_i sin(omega_i t)."""

    shift: float
    components: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple((float(a), float(w)) for a, w in self.components))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, float(self.shift))
        for a, w in self.components:
            out = out + a * np.sin(w * t)
        return out if out.ndim else float(out)

    @property
    def max_frequency(self):
        return max((abs(w) for _, w in self.components), default=0.0)

    def sup_abs(self):
        return abs(self.shift) + sum(abs(a) for a, _ in self.components)

    def l1_norm(self, t):
        if t <= 0:
            return 0.0
        if self.sup_abs() == 0:
            return 0.0
        # |u| has kinks where u changes sign; integrate period by period.
        w = self.max_frequency
        n = max(1, math.ceil(t * w / (2 * math.pi))) if w > 0 else 1
        edges = np.linspace(0.0, t, n + 1)
        return float(sum(_quad_abs(self, a, b, ()) for a, b in zip(edges[:-1], edges[1:])))

    def scaled(self, factor: float) -> "SineSum":
        """Same law with every sine amplitude multiplied by `factor`."""
        return SineSum(self.shift, tuple((a * factor, w) for a, w in self.components))

    def to_dict(self):
        return {"type": "sine_sum", "shift": self.shift, "components": [list(c) for c in self.components]}


@dataclass(frozen=True)
class PiecewiseConstant(ControlSignal):
    """u = values[i] on [times[i], times[i+1]); the last value holds afterwards, zero before times[0]."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        _check_grid(self.times, self.values)
        object.__setattr__(self, "times", tuple(map(float, self.times)))
        object.__setattr__(self, "values", tuple(map(float, self.values)))

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t_arr, side="right") - 1
        vals = np.concatenate([[0.0], self.values])[idx + 1]
        return vals if vals.ndim else float(vals)

    def sup_abs(self):
        return max(abs(v) for v in self.values)

    def l1_norm(self, t):
        edges = np.clip(np.append(self.times, np.inf), 0.0, t)
        return float(np.sum(np.abs(self.values) * np.diff(edges)))

    def to_dict(self):
        return {"type": "piecewise_constant", "times": list(self.times), "values": list(self.values)}


@dataclass(frozen=True)
class Sampled(ControlSignal):
    """Linear interpolation of samples; held constant outside the sampled range."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        _check_grid(self.times, self.values)
        object.__setattr__(self, "times", tuple(map(float, self.times)))
        object.__setattr__(self, "values", tuple(map(float, self.values)))

    def __call__(self, t):
        out = np.interp(t, self.times, self.values)
        return out if np.ndim(out) else float(out)

    def sup_abs(self):
        return max(abs(v) for v in self.values)

    def l1_norm(self, t):
        pts = [s for s in self.times if 0 < s < t]
        return _quad_abs(self, 0.0, t, pts)

    def to_dict(self):
        return {"type": "sampled", "times": list(self.times), "values": list(self.values)}


def _check_grid(times, values):
    if len(times) == 0 or len(times) != len(values):
        raise ValueError("times and values must be non-empty and of equal length")
    if np.any(np.diff(times) <= 0):
        raise ValueError("control time grid must be strictly increasing")
    if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
        raise ValueError("control samples must be finite")


def _quad_abs(u: ControlSignal, a: float, b: float, points) -> float:
    if b <= a:
        return 0.0
    val, _ = integrate.quad(lambda s: abs(u(s)), a, b, points=points or None, limit=500, epsabs=0.0, epsrel=1e-10)
    return float(val)


def control_from_dict(spec: dict) -> ControlSignal:
    """Build a control from its JSON description (see ``ControlSignal.to_dict``)."""
    kind = spec.get("type")
    if kind == "constant":
        return Constant(float(spec["value"]))
    if kind == "sine_sum":
        return SineSum(float(spec.get("shift", 0.0)), tuple(tuple(c) for c in spec.get("components", [])))
    if kind == "piecewise_constant":
        return PiecewiseConstant(tuple(spec["times"]), tuple(spec["values"]))
    if kind == "sampled":
        return Sampled(tuple(spec["times"]), tuple(spec["values"]))
    if kind == "preset":
        from .synthesis import preset

        return preset(spec["name"])
    raise ValueError(f"unknown control type {kind!r}")


# --------------------------------------------------------------------------
# Propagation
# --------------------------------------------------------------------------


def default_step(pairs: Sequence[GalerkinPair], u: ControlSignal) -> float:
    """2 pi / (40 omega_max) with omega_max the fastest control or spectral frequency."""
    spec = max(
        float(np.max(np.abs(p.drift_diag))) + u.sup_abs() * float(np.linalg.norm(p.coupling, 2)) for p in pairs
    )
    w = max(u.max_frequency, spec, 1e-12)
    return 2 * math.pi / (40 * w)


def _cells(t0: float, t1: float, step: float):
    """Pieces of [t0, t1] cut at multiples of `step`; returns (left, right, cell_midpoint)."""
    i0 = math.floor(t0 / step)
    i1 = math.ceil(t1 / step)
    idx = np.arange(i0, i1)
    left = np.maximum(idx * step, t0)
    right = np.minimum((idx + 1) * step, t1)
    keep = right - left > 1e-13 * step
    return left[keep], right[keep], (idx[keep] + 0.5) * step


def _unitaries(pair: GalerkinPair, u_mid: np.ndarray, dt: np.ndarray) -> np.ndarray:
    H = np.diag(pair.drift_diag)[None, :, :] + u_mid[:, None, None] * pair.coupling[None, :, :]
    w, V = np.linalg.eigh(H)
    phase = np.exp(-1j * dt[:, None] * w)
    return (V * phase[:, None, :]) @ np.swapaxes(V, 1, 2)


def _sample_control(u: ControlSignal, mids: np.ndarray) -> np.ndarray:
    vals = np.asarray(u(mids), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("control produced a non-finite sample")
    return vals


def advance(pair: GalerkinPair, u: ControlSignal, x, t0: float, t1: float, step: float) -> np.ndarray:
    """State at t1 of the solution equal to `x` at t0 (t1 >= t0)."""
    if t1 < t0:
        raise ValueError(f"cannot advance backwards: t0={t0} > t1={t1}")
    x = np.asarray(x, dtype=complex)
    left, right, mids = _cells(t0, t1, step)
    u_mid = _sample_control(u, mids)
    for c in range(0, len(mids), _CHUNK):
        U = _unitaries(pair, u_mid[c : c + _CHUNK], (right - left)[c : c + _CHUNK])
        for Uk in U:
            x = Uk @ x
    return x


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States of one or several subspaces driven by the same control.

    ``states[i]`` has shape (len(times), N_i); row n is the state at times[n].
    """

    times: np.ndarray
    pairs: tuple[GalerkinPair, ...]
    states: tuple[np.ndarray, ...]
    control: ControlSignal = field(repr=False)
    step: float = 0.0

    @property
    def populations(self) -> tuple[np.ndarray, ...]:
        return tuple(np.abs(s) ** 2 for s in self.states)

    def amplitude(self, i: int, index: int) -> np.ndarray:
        """|<phi_index, psi_i(t)>| on the stored grid."""
        return np.abs(self.states[i][:, index])

    def state_at(self, i: int, t: float) -> np.ndarray:
        """State of subspace i at any t in [0, t_final], advanced from the last stored time <= t."""
        if not (self.times[0] <= t <= self.times[-1]):
            raise ValueError(f"t={t} outside the trajectory range")
        n = int(np.searchsorted(self.times, t, side="right") - 1)
        return advance(self.pairs[i], self.control, self.states[i][n], float(self.times[n]), t, self.step)


def propagate(
    pairs: Sequence[GalerkinPair],
    u: ControlSignal,
    initial: Sequence,
    t_final: float,
    step: Optional[float] = None,
    decimation: int = 10,
) -> Trajectory:
    """Integrate i x' = (diag(drift) + u(t) coupling) x for every pair.

    Parameters
    ----------
    pairs : sequence of GalerkinPair
        Decoupled truncations sharing the control.
    u : ControlSignal
    initial : sequence of array_like
        Unit initial vectors, one per pair.
    t_final : float
    step : float, optional
        Cell length; defaults to :func:`default_step`.
    decimation : int
        Store every `decimation`-th grid point (t = 0 and t_final always).

    Returns
    -------
    Trajectory
    """
    pairs = tuple(pairs)
    if len(initial) != len(pairs):
        raise ValueError(f"{len(pairs)} subspaces but {len(initial)} initial vectors")
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    if decimation < 1:
        raise ValueError("decimation must be >= 1")
    x0s = []
    for pair, x in zip(pairs, initial):
        x = np.asarray(x, dtype=complex)
        if x.shape != (pair.dim,):
            raise ValueError(f"initial vector has shape {x.shape}, expected ({pair.dim},)")
        if abs(np.linalg.norm(x) - 1) > NORM_TOL:
            raise ValueError(f"initial vector is not unit norm (|x| = {np.linalg.norm(x)!r})")
        x0s.append(x)
    if step is None:
        step = default_step(pairs, u)
    if not step > 0:
        raise ValueError("step must be positive")

    left, right, mids = _cells(0.0, t_final, step)
    u_mid = _sample_control(u, mids)
    n_cells = len(mids)
    keep = np.zeros(n_cells, dtype=bool)
    keep[decimation - 1 :: decimation] = True
    keep[-1] = True
    times = np.concatenate([[0.0], right[keep]])
    times[-1] = t_final

    states = []
    for pair, x in zip(pairs, x0s):
        out = np.empty((len(times), pair.dim), dtype=complex)
        out[0] = x
        row = 1
        for c in range(0, n_cells, _CHUNK):
            U = _unitaries(pair, u_mid[c : c + _CHUNK], (right - left)[c : c + _CHUNK])
            for off, Uk in enumerate(U):
                x = Uk @ x
                if keep[c + off]:
                    out[row] = x
                    row += 1
        states.append(out)
    return Trajectory(times=times, pairs=pairs, states=tuple(states), control=u, step=step)


def two_time_propagator(pair: GalerkinPair, u: ControlSignal, s: float, t: float, step: float) -> np.ndarray:
    """Truncated propagator X(t, s) on the global cell grid."""
    if s > t:
        raise ValueError(f"need s <= t, got s={s}, t={t}")
    X = np.eye(pair.dim, dtype=complex)
    left, right, mids = _cells(s, t, step)
    u_mid = _sample_control(u, mids)
    for c in range(0, len(mids), _CHUNK):
        for Uk in _unitaries(pair, u_mid[c : c + _CHUNK], (right - left)[c : c + _CHUNK]):
            X = Uk @ X
    return X


def integrator_tolerance(
    pairs: Sequence[GalerkinPair],
    u: ControlSignal,
    initial: Sequence,
    t_final: float,
    step: Optional[float] = None,
) -> float:
    """Endpoint error estimate of :func:`propagate` at this step.

    Step doubling: for a second-order scheme the error at step h is about
    4/3 of the distance between the h and h/2 results. The estimate is
    floored by the accumulated round-off, cells * N * machine epsilon.
    """
    pairs = tuple(pairs)
    if step is None:
        step = default_step(pairs, u)
    coarse = propagate(pairs, u, initial, t_final, step, decimation=10**9)
    fine = propagate(pairs, u, initial, t_final, step / 2, decimation=10**9)
    est = max(float(np.linalg.norm(a[-1] - b[-1])) for a, b in zip(coarse.states, fine.states)) * 4 / 3
    n_cells = math.ceil(t_final / step)
    floor = n_cells * max(p.dim for p in pairs) * np.finfo(float).eps
    return max(est, floor)


# --------------------------------------------------------------------------
# Truncation error bound
# --------------------------------------------------------------------------


def l1_norm(u: ControlSignal, t: float) -> float:
    """Integral of |u| over [0, t]."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return float(u.l1_norm(t))


@dataclass(frozen=True)
class GalerkinBound:
    """Factors of the truncation error bound and their product."""

    l1_norm_u: float
    boundary_coupling_abs: float
    sup_term: float
    bound: float
    N: int
    N1: int
    grid_points: int = 0


def _tail_transfer(pair: GalerkinPair, u: ControlSignal, t: float, n1: int, step: float):
    """|pi_{N1} X(t, s) phi_N| at every cell boundary s in [0, t], latest s first.

    Uses the backward recursion X(t, s_left) = X(t, s_right) U_cell on the
    first N1 rows only.
    """
    left, right, mids = _cells(0.0, t, step)
    u_mid = _sample_control(u, mids)
    G = np.eye(pair.dim, dtype=complex)[:n1]
    vals = [float(np.linalg.norm(G[:, -1]))]
    n = len(mids)
    for end in range(n, 0, -_CHUNK):
        start = max(0, end - _CHUNK)
        U = _unitaries(pair, u_mid[start:end], (right - left)[start:end])
        for Uk in U[::-1]:
            G = G @ Uk
            vals.append(float(np.linalg.norm(G[:, -1])))
    return np.array(vals)


def galerkin_bound(
    params: RotorParams,
    id: SubspaceId,
    N1: int,
    N: int,
    u: ControlSignal,
    t: float,
    step: Optional[float] = None,
    rel: float = 0.01,
    max_refinements: int = 4,
) -> GalerkinBound:
    """Bound on the first-N1-level error of the N-level truncation at time t.

    The supremum over s is taken on grids of decreasing stride over the
    integration cells until the maximum moves by less than `rel`; if the
    finest stride still moves it, the integration step is halved.
    """
    if not 1 <= N1 <= N:
        raise ValueError(f"need 1 <= N1 <= N, got N1={N1}, N={N}")
    pair = build_galerkin(params, id, N)
    if step is None:
        step = default_step([pair], u)
    l1 = l1_norm(u, t)
    b = abs(pair.boundary_coupling)
    sup = 0.0
    n_grid = 0
    for _ in range(max_refinements + 1):
        vals = _tail_transfer(pair, u, t, N1, step)
        stride = 1 << max(0, int(math.log2(max(len(vals) // 16, 1))))
        prev = float(np.max(vals[::stride]))
        # too few cells to compare two grids: nothing to refine at this step
        converged = stride == 1
        while stride > 1:
            stride //= 2
            cur = float(np.max(vals[::stride]))
            converged = abs(cur - prev) <= rel * cur
            prev = cur
            if converged:
                break
        sup, n_grid = prev, len(vals[::stride])
        if converged:
            break
        log.debug("sup over s not converged at step %g; halving", step)
        step /= 2
    return GalerkinBound(l1_norm_u=l1, boundary_coupling_abs=b, sup_term=sup, bound=l1 * b * sup, N=N, N1=N1, grid_points=n_grid)
