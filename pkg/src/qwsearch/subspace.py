"""Invariant-subspace model of the search dynamics.

Grouping identically-evolving vertices gives four classes:

    a  marked vertices in the left set      (k1 of them)
    b  marked vertices in the right set     (k2)
    c  unmarked vertices in the left set    (n1 - k1)
    d  unmarked vertices in the right set   (n2 - k2)

The uniform superposition over each class, ordered (a, b, c, d), spans a
subspace that is closed under both walk generators and the marking
oracle, so all dynamics of interest reduce to a matrix of dimension at
most four.  Empty classes are dropped from the basis rather than
zero-padded, which keeps lift/project well defined and the reduced
eigenproblems clean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graphs import (
    BipartiteInstance,
    HermitianOperator,
    MarkedSet,
    build_adjacency,
    build_laplacian,
    check_marks,
    oracle_projector,
)

CLASS_LABELS = ("a", "b", "c", "d")

#: Target labels accepted by success-probability helpers.
MARKED_LABELS = ("a", "b")


class WalkKind(str, Enum):
    """Which graph operator generates the walk term of the Hamiltonian."""

    LAPLACIAN = "laplacian"
    ADJACENCY = "adjacency"


def class_sizes(inst: BipartiteInstance) -> dict[str, int]:
    return {"a": inst.k1, "b": inst.k2, "c": inst.nk1, "d": inst.nk2}


def basis_labels(inst: BipartiteInstance) -> tuple[str, ...]:
    """Labels of the non-empty vertex classes, in canonical order."""
    sizes = class_sizes(inst)
    return tuple(label for label in CLASS_LABELS if sizes[label] > 0)


@dataclass(frozen=True)
class ReducedState:
    """Real unit vector over the present vertex classes.

    Carrying the labels alongside the amplitudes prevents a 3-dimensional
    state from being silently indexed as 4-dimensional.  Complex vectors
    produced by time evolution are handled as plain arrays by
    :mod:`qwsearch.spectral`; this type covers the real initial and
    target states only.
    """

    labels: tuple[str, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=float)
        if amps.ndim != 1 or len(amps) != len(self.labels):
            raise ValueError("amplitude vector must match the label tuple")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state must be normalized, got norm {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def amplitude(self, label: str) -> float:
        """Amplitude on one class; 0 for a class absent from the basis."""
        if label in self.labels:
            return float(self.amps[self.labels.index(label)])
        return 0.0


def _masked(inst: BipartiteInstance, values: np.ndarray) -> np.ndarray:
    sizes = class_sizes(inst)
    keep = [i for i, label in enumerate(CLASS_LABELS) if sizes[label] > 0]
    return values[np.ix_(keep, keep)] if values.ndim == 2 else values[keep]


def uniform_state(inst: BipartiteInstance) -> ReducedState:
    """Equal superposition over all vertices, written in the class basis."""
    sizes = class_sizes(inst)
    amps = np.array([math.sqrt(sizes[label]) for label in CLASS_LABELS]) / math.sqrt(inst.n)
    return ReducedState(basis_labels(inst), _masked(inst, amps))


def balanced_state(inst: BipartiteInstance) -> ReducedState:
    """Set-balanced superposition: each vertex set carries probability 1/2.

    Individual vertices have probability 1/(2 n1) on the left and
    1/(2 n2) on the right.  This is an eigenvector of the adjacency
    matrix with eigenvalue sqrt(n1 * n2) and is the natural start for
    the adjacency walk.
    """
    n1, n2 = inst.n1, inst.n2
    amps = np.array(
        [
            math.sqrt(inst.k1 * n2),
            math.sqrt(inst.k2 * n1),
            math.sqrt(inst.nk1 * n2),
            math.sqrt(inst.nk2 * n1),
        ]
    ) / math.sqrt(2 * n1 * n2)
    return ReducedState(basis_labels(inst), _masked(inst, amps))


def balanced_complement(inst: BipartiteInstance) -> ReducedState:
    """The partner of :func:`balanced_state` in the per-set-uniform plane.

    Orthogonal to the balanced state by construction; eigenvector of the
    adjacency matrix with eigenvalue -sqrt(n1 * n2).
    """
    n1, n2 = inst.n1, inst.n2
    amps = np.array(
        [
            -math.sqrt(inst.k1 * n2),
            math.sqrt(inst.k2 * n1),
            -math.sqrt(inst.nk1 * n2),
            math.sqrt(inst.nk2 * n1),
        ]
    ) / math.sqrt(2 * n1 * n2)
    return ReducedState(basis_labels(inst), _masked(inst, amps))


def basis_state(inst: BipartiteInstance, label: str) -> ReducedState:
    """Unit vector on a single vertex class."""
    labels = basis_labels(inst)
    if label not in labels:
        raise ValueError(f"class {label!r} is empty for this instance (present: {labels})")
    amps = np.zeros(len(labels))
    amps[labels.index(label)] = 1.0
    return ReducedState(labels, amps)


def reduced_adjacency(inst: BipartiteInstance) -> HermitianOperator:
    """Adjacency matrix restricted to the class basis."""
    k1, k2, m1, m2 = inst.k1, inst.k2, inst.nk1, inst.nk2
    ab = math.sqrt(k1 * k2)
    ad = math.sqrt(k1 * m2)
    bc = math.sqrt(k2 * m1)
    cd = math.sqrt(m1 * m2)
    full = np.array(
        [
            [0.0, ab, 0.0, ad],
            [ab, 0.0, bc, 0.0],
            [0.0, bc, 0.0, cd],
            [ad, 0.0, cd, 0.0],
        ]
    )
    return HermitianOperator(_masked(inst, full), basis_labels(inst))


def reduced_degree(inst: BipartiteInstance) -> HermitianOperator:
    """Degree matrix restricted to the class basis: diag(n2, n1, n2, n1)."""
    full = np.diag([float(inst.n2), float(inst.n1), float(inst.n2), float(inst.n1)])
    return HermitianOperator(_masked(inst, full), basis_labels(inst))


def _oracle_diagonal(inst: BipartiteInstance) -> np.ndarray:
    # marked classes a and b carry the oracle; c and d do not
    full = np.array([1.0, 1.0, 0.0, 0.0])
    return _masked(inst, full)


def search_hamiltonian(inst: BipartiteInstance, kind: WalkKind, gamma: float) -> HermitianOperator:
    """Reduced search Hamiltonian -gamma * walk - oracle.

    The two kinds differ by exactly gamma * diag(n2, n1, n2, n1): the
    Laplacian walk keeps the degree term, the adjacency walk drops it.
    """
    if not gamma > 0:
        raise ValueError(f"jumping rate gamma must be positive, got {gamma!r}")
    kind = WalkKind(kind)
    h = -gamma * reduced_adjacency(inst).entries
    if kind is WalkKind.LAPLACIAN:
        h = h + gamma * reduced_degree(inst).entries
    h = h - np.diag(_oracle_diagonal(inst))
    return HermitianOperator(h, basis_labels(inst))


def full_search_hamiltonian(
    inst: BipartiteInstance,
    kind: WalkKind,
    gamma: float,
    marks: MarkedSet | None = None,
) -> HermitianOperator:
    """Search Hamiltonian in the full vertex space, oracle at the marked vertices."""
    if not gamma > 0:
        raise ValueError(f"jumping rate gamma must be positive, got {gamma!r}")
    kind = WalkKind(kind)
    walk = build_laplacian(inst) if kind is WalkKind.LAPLACIAN else build_adjacency(inst)
    return HermitianOperator(-gamma * walk.entries - oracle_projector(inst, marks).entries)


def _class_indices(inst: BipartiteInstance, marks: MarkedSet) -> dict[str, np.ndarray]:
    check_marks(inst, marks)
    v1_marked = np.array(sorted(marks.v1_marked), dtype=int)
    v2_marked = np.array(sorted(marks.v2_marked), dtype=int)
    v1_all = np.arange(inst.n1)
    v2_all = np.arange(inst.n1, inst.n)
    return {
        "a": v1_marked,
        "b": v2_marked,
        "c": np.setdiff1d(v1_all, v1_marked),
        "d": np.setdiff1d(v2_all, v2_marked),
    }


def lift(inst: BipartiteInstance, marks: MarkedSet, state: ReducedState) -> np.ndarray:
    """Embed a class-basis state into the full vertex space (an isometry)."""
    indices = _class_indices(inst, marks)
    out = np.zeros(inst.n)
    for label, amp in zip(state.labels, state.amps):
        idx = indices[label]
        out[idx] = amp / math.sqrt(len(idx))
    return out


def project(
    inst: BipartiteInstance, marks: MarkedSet, vector: np.ndarray
) -> tuple[np.ndarray, float]:
    """Project a full-space vector onto the class basis.

    Returns the class amplitudes (over :func:`basis_labels`, same dtype
    as the input) together with the norm of the component orthogonal to
    the invariant subspace.  Complex vectors are accepted since evolved
    states carry phases; use :class:`ReducedState` for real kets.
    """
    vector = np.asarray(vector)
    if vector.shape != (inst.n,):
        raise ValueError(f"expected a vector of length {inst.n}, got shape {vector.shape}")
    indices = _class_indices(inst, marks)
    labels = basis_labels(inst)
    amps = np.array([vector[indices[label]].sum() / math.sqrt(len(indices[label])) for label in labels])
    residual_vec = vector.astype(complex).copy()
    for label, amp in zip(labels, amps):
        idx = indices[label]
        residual_vec[idx] -= amp / math.sqrt(len(idx))
    return amps, float(np.linalg.norm(residual_vec))
