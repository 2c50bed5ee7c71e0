"""Related dynamics between subspaces outside the canonical set and their representatives.

For (k, m) in the canonical set, H_{k,m} and its images H_{-k,-m},
H_{m,k}, H_{-m,-k} carry identical couplings. Their drifts agree up to a
constant shift r = (A - C)(k^2 - m^2) for the two swapping maps. Under
``i x' = H x`` a constant shift contributes the global phase exp(-i r t),
so the frame map that carries a source trajectory onto the target
trajectory at time t is ``exp(-i r t)`` times the relabelling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import SubspaceId, in_canonical_set, map_index
from .dynamics import ControlSignal, default_step, propagate
from .hamiltonian import RotorParams, build_galerkin

__all__ = ["RelatedMap", "related_map", "apply_map", "invert_map", "verify_related"]


@dataclass(frozen=True)
class RelatedMap:
    source: SubspaceId
    target: SubspaceId
    iso_tag: int
    phase_rate: float

    def __post_init__(self):
        if self.iso_tag not in (1, 2, 3):
            raise ValueError(f"iso_tag must be 1, 2 or 3, got {self.iso_tag!r}")
        if map_index(self.source, self.iso_tag) != self.target:
            raise ValueError(f"{self.target} is not the image of {self.source} under map {self.iso_tag}")


def related_map(params: RotorParams, source: SubspaceId, iso_tag: int) -> RelatedMap:
    """Map number `iso_tag` out of the canonical subspace `source`."""
    if not in_canonical_set(source):
        raise ValueError(f"source {source} is not in the canonical set")
    k, m = source.k, source.m
    rate = 0.0 if iso_tag == 1 else (params.A - params.C) * (k * k - m * m)
    return RelatedMap(source, map_index(source, iso_tag), iso_tag, rate)


def apply_map(map: RelatedMap, state, t: float) -> np.ndarray:
    """Carry source coefficients to the target subspace at time t.

    Both subspaces have the same j_min, so coefficients keep their position;
    only the frame phase exp(-i t r) is applied.
    """
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1:
        raise ValueError(f"expected a coefficient vector, got shape {state.shape}")
    return state * np.exp(-1j * t * map.phase_rate)


def invert_map(map: RelatedMap, state, t: float) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1:
        raise ValueError(f"expected a coefficient vector, got shape {state.shape}")
    return state * np.exp(1j * t * map.phase_rate)


def verify_related(
    params: RotorParams,
    map: RelatedMap,
    control: ControlSignal,
    t_final: float,
    dim: int,
    step: Optional[float] = None,
    decimation: int = 10,
    seed: int = 0,
) -> float:
    """Largest gap, over the stored grid, between the direct and conjugated evolutions.

    A random unit state is propagated in the source truncation, and its image
    is propagated in the target truncation and pulled back through the map at
    each stored time.
    """
    rng = np.random.default_rng(seed)
    x0 = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    x0 /= np.linalg.norm(x0)
    src = build_galerkin(params, map.source, dim)
    tgt = build_galerkin(params, map.target, dim)
    if step is None:
        step = default_step([src, tgt], control)
    direct = propagate([src], control, [x0], t_final, step, decimation)
    image = propagate([tgt], control, [apply_map(map, x0, 0.0)], t_final, step, decimation)
    residual = 0.0
    for t, a, b in zip(direct.times, direct.states[0], image.states[0]):
        residual = max(residual, float(np.linalg.norm(a - invert_map(map, b, t))))
    return residual
