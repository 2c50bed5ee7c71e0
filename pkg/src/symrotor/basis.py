"""Index algebra of the Wigner basis D_j^{k,m}.

Only labels are represented here, never the functions of the Euler angles.
A subspace H_{k,m} is spanned by D_j^{k,m} for j >= max(|k|, |m|); the set
``N = {(k, m) : m >= 0, |k| <= m}`` holds one representative of every class
of related subspaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

IsoTag = Union[Literal["identity"], Literal[1], Literal[2], Literal[3]]

__all__ = [
    "BasisLabel",
    "SubspaceId",
    "SubspaceBasis",
    "subspace_basis",
    "in_canonical_set",
    "canonical_representative",
    "map_index",
    "lex_index",
    "lex_inverse",
]


@dataclass(frozen=True, order=True)
class BasisLabel:
    """Wigner index triple (j, k, m) of one eigenfunction D_j^{k,m}."""

    j: int
    k: int
    m: int

    def __post_init__(self):
        if self.j < 0:
            raise ValueError(f"j must be non-negative, got {self.j}")
        if abs(self.k) > self.j or abs(self.m) > self.j:
            raise ValueError(f"invalid label (j={self.j}, k={self.k}, m={self.m}): need |k|, |m| <= j")

    @property
    def subspace(self) -> "SubspaceId":
        return SubspaceId(self.k, self.m)

    def __str__(self):
        return f"({self.j},{self.k},{self.m})"


@dataclass(frozen=True, order=True)
class SubspaceId:
    """The pair (k, m) labelling the invariant subspace H_{k,m}."""

    k: int
    m: int

    @property
    def j_min(self) -> int:
        return max(abs(self.k), abs(self.m))

    def __str__(self):
        return f"({self.k},{self.m})"


@dataclass(frozen=True)
class SubspaceBasis:
    id: SubspaceId
    j_min: int
    dim: int
    labels: tuple[BasisLabel, ...]

    def index_of(self, label: BasisLabel) -> int:
        """Position of `label` in the truncated basis.

        Raises
        ------
        KeyError
            If the label lies in another subspace or beyond the truncation.
        """
        if label.subspace != self.id or not (self.j_min <= label.j < self.j_min + self.dim):
            raise KeyError(f"label {label} not in truncation {self.id} of dimension {self.dim}")
        return label.j - self.j_min

    @property
    def js(self) -> range:
        return range(self.j_min, self.j_min + self.dim)


def subspace_basis(id: SubspaceId, dim: int) -> SubspaceBasis:
    """First `dim` labels of H_{k,m}, in increasing j."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    j0 = id.j_min
    labels = tuple(BasisLabel(j, id.k, id.m) for j in range(j0, j0 + dim))
    return SubspaceBasis(id=id, j_min=j0, dim=dim, labels=labels)


def in_canonical_set(id: SubspaceId) -> bool:
    return id.m >= 0 and abs(id.k) <= id.m


def map_index(id: SubspaceId, tag: IsoTag) -> SubspaceId:
    """Image of (k, m) under one of the related-dynamics index maps.

    Tag 1 sends (k, m) to (-k, -m), tag 2 to (m, k) and tag 3 to (-m, -k).
    All three are involutions.
    """
    k, m = id.k, id.m
    if tag == "identity":
        return id
    if tag == 1:
        return SubspaceId(-k, -m)
    if tag == 2:
        return SubspaceId(m, k)
    if tag == 3:
        return SubspaceId(-m, -k)
    raise ValueError(f"unknown iso tag {tag!r}")


def canonical_representative(id: SubspaceId) -> tuple[SubspaceId, IsoTag]:
    """Member of the canonical set related to `id`, and the map relating them.

    The tag names the map f with ``f(representative) == id``; since every map
    is an involution it also sends `id` back to the representative. When two
    maps give the same representative (|k| == |m|) the lowest tag wins.

    Examples
    --------
    >>> canonical_representative(SubspaceId(2, 1))
    (SubspaceId(k=1, m=2), 2)
    """
    if in_canonical_set(id):
        return id, "identity"
    for tag in (1, 2, 3):
        rep = map_index(id, tag)
        if in_canonical_set(rep):
            return rep, tag
    raise AssertionError(f"no canonical representative for {id}")  # unreachable


def _shell_rank(k: int, m: int, s: int) -> int:
    # lexicographic rank of (k, m) among the 8s points with max(|k|,|m|) == s
    if k == -s:
        return m + s
    if k < s:
        return (2 * s + 1) + 2 * (k + s - 1) + (0 if m == -s else 1)
    return (2 * s + 1) + 2 * (2 * s - 1) + (m + s)


def lex_index(id: SubspaceId) -> int:
    """Bijection Z^2 -> N used to enumerate the subspaces.

    Pairs are taken shell by shell in s = max(|k|, |m|) and lexicographically
    in (k, m) within a shell, so (0, 0) -> 0 and small quantum numbers come
    first.
    """
    s = id.j_min
    if s == 0:
        return 0
    return (2 * s - 1) ** 2 + _shell_rank(id.k, id.m, s)


def lex_inverse(n: int) -> SubspaceId:
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    if n == 0:
        return SubspaceId(0, 0)
    s = (math.isqrt(n) + 1) // 2
    r = n - (2 * s - 1) ** 2
    if r < 2 * s + 1:
        return SubspaceId(-s, r - s)
    r -= 2 * s + 1
    if r < 2 * (2 * s - 1):
        k = r // 2 - s + 1
        return SubspaceId(k, -s if r % 2 == 0 else s)
    r -= 2 * (2 * s - 1)
    return SubspaceId(s, r - s)
