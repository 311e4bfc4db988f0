"""Complete bipartite graphs and their matrix representations.

Vertices are indexed 0..n1-1 for the left set and n1..n1+n2-1 for the
right set.  Marked vertices sit at the lowest indices of each set by
default; by symmetry of the complete bipartite graph every placement
evolves identically, and the canonical choice keeps tests deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BipartiteInstance:
    """Problem parameters: set sizes (n1, n2) and marked counts (k1, k2)."""

    n1: int
    n2: int
    k1: int
    k2: int

    def __post_init__(self) -> None:
        for name in ("n1", "n2", "k1", "k2"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("vertex set sizes must satisfy n1 >= 1 and n2 >= 1")
        if not 0 <= self.k1 <= self.n1:
            raise ValueError(f"marked count must satisfy 0 <= k1 <= n1, got k1={self.k1}, n1={self.n1}")
        if not 0 <= self.k2 <= self.n2:
            raise ValueError(f"marked count must satisfy 0 <= k2 <= n2, got k2={self.k2}, n2={self.n2}")
        if self.k1 + self.k2 < 1:
            raise ValueError("at least one vertex must be marked (k1 + k2 >= 1)")

    @property
    def n(self) -> int:
        """Total vertex count."""
        return self.n1 + self.n2

    @property
    def nk1(self) -> int:
        """Unmarked vertices in the left set."""
        return self.n1 - self.k1

    @property
    def nk2(self) -> int:
        """Unmarked vertices in the right set."""
        return self.n2 - self.k2


@dataclass(frozen=True)
class HermitianOperator:
    """Dense real-symmetric operator, tagged with the basis it acts on.

    ``labels`` is None for the full vertex space, otherwise the tuple of
    vertex-class labels spanning a reduced basis (see :mod:`qwsearch.subspace`).
    """

    entries: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("entries must be exactly symmetric")
        if self.labels is not None and len(self.labels) != m.shape[0]:
            raise ValueError("labels must match the matrix dimension")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def basis_tag(self) -> str:
        return "full" if self.labels is None else f"reduced{self.dim}"


@dataclass(frozen=True)
class MarkedSet:
    """Concrete placement of the marked vertices in each set."""

    v1_marked: tuple[int, ...]
    v2_marked: tuple[int, ...]

    @classmethod
    def canonical(cls, inst: BipartiteInstance) -> "MarkedSet":
        """Lowest k1 indices of the left set and lowest k2 of the right set."""
        return cls(
            tuple(range(inst.k1)),
            tuple(range(inst.n1, inst.n1 + inst.k2)),
        )


def check_marks(inst: BipartiteInstance, marks: MarkedSet) -> None:
    """Validate sizes, ranges and disjointness of a marked-set placement."""
    v1, v2 = marks.v1_marked, marks.v2_marked
    if len(set(v1)) != len(v1) or len(set(v2)) != len(v2):
        raise ValueError("marked vertex indices must be distinct")
    if len(v1) != inst.k1 or len(v2) != inst.k2:
        raise ValueError(
            f"marked set sizes ({len(v1)}, {len(v2)}) must equal (k1, k2) = ({inst.k1}, {inst.k2})"
        )
    if any(not 0 <= i < inst.n1 for i in v1):
        raise ValueError("left-set marked indices must lie in [0, n1)")
    if any(not inst.n1 <= i < inst.n for i in v2):
        raise ValueError("right-set marked indices must lie in [n1, n1 + n2)")


def build_adjacency(inst: BipartiteInstance) -> HermitianOperator:
    """0/1 adjacency matrix: every left vertex is joined to every right vertex."""
    a = np.zeros((inst.n, inst.n))
    a[: inst.n1, inst.n1 :] = 1.0
    a[inst.n1 :, : inst.n1] = 1.0
    return HermitianOperator(a)


def build_degree(inst: BipartiteInstance) -> HermitianOperator:
    """Diagonal degree matrix: left vertices have degree n2, right ones n1."""
    deg = np.concatenate([np.full(inst.n1, float(inst.n2)), np.full(inst.n2, float(inst.n1))])
    return HermitianOperator(np.diag(deg))


def build_laplacian(inst: BipartiteInstance) -> HermitianOperator:
    """Graph Laplacian with the adjacency-minus-degree sign convention.

    Every row sums to zero, so the uniform vector is a 0-eigenvector.
    """
    return HermitianOperator(build_adjacency(inst).entries - build_degree(inst).entries)


def oracle_projector(inst: BipartiteInstance, marks: MarkedSet | None = None) -> HermitianOperator:
    """Diagonal 0/1 projector onto the marked vertices; trace is k1 + k2."""
    if marks is None:
        marks = MarkedSet.canonical(inst)
    check_marks(inst, marks)
    diag = np.zeros(inst.n)
    diag[list(marks.v1_marked)] = 1.0
    diag[list(marks.v2_marked)] = 1.0
    return HermitianOperator(np.diag(diag))
