"""Controllability analysis and resonant control of a z-polarised symmetric rotor.

Modules
-------
basis          Wigner labels, invariant subspaces, canonical set, enumeration.
hamiltonian    Energies, dipole matrix elements, Galerkin truncations.
connectivity   Chains of connectedness, gap sets, resonance checks.
perturbation   Eigenvalue shifts under a constant field, coincidence lifting.
symmetry       Related dynamics between symmetric subspaces.
dynamics       Controls, exponential-midpoint propagation, truncation bound.
synthesis      Resonant multi-sine laws and their evaluation.
experiment     The (1,1) transfer experiment with two bystander subspaces.
cli            Command-line front end (``symrotor``).
"""

from .basis import (
    BasisLabel,
    SubspaceBasis,
    SubspaceId,
    canonical_representative,
    in_canonical_set,
    lex_index,
    lex_inverse,
    subspace_basis,
)
from .connectivity import (
    ChainOfConnectedness,
    default_chain,
    gap_set,
    is_nonresonant,
    resonant_extract,
)
from .dynamics import (
    Constant,
    PiecewiseConstant,
    Sampled,
    SineSum,
    Trajectory,
    galerkin_bound,
    l1_norm,
    propagate,
    two_time_propagator,
)
from .hamiltonian import GalerkinPair, RotorParams, build_galerkin, hz_diag, hz_offdiag, rot_energy
from .perturbation import (
    coincidence_classify,
    first_order_shift,
    perturbed_spectrum,
    second_order_shift,
)
from .symmetry import RelatedMap, apply_map, related_map, verify_related
from .synthesis import SynthesisSpec, evaluate_law, published_pulse, synthesize

__version__ = "0.1.0"
