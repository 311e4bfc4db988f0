"""Exact diagonalization and spectral time evolution.

Everything analytic in the package is ultimately checked against the
numbers produced here.  Evolution uses the spectral form

    psi(t) = sum_i exp(-i * lambda_i * t) * v_i * <v_i, psi0>

which is exact per time point; the matrices involved are tiny (the
reduced model) or desk-scale (full vertex space), so no ODE integration
or sparse machinery is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import BipartiteInstance, HermitianOperator, MarkedSet
from .subspace import MARKED_LABELS, ReducedState, _class_indices, basis_labels


class SpectralError(RuntimeError):
    """Numerical failure in an eigendecomposition, with diagnostics."""


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues sorted ascending with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def gap(self, i: int, j: int) -> float:
        """Energy difference between two levels."""
        return float(abs(self.eigenvalues[j] - self.eigenvalues[i]))


@dataclass(frozen=True)
class EvolutionSeries:
    """Per-time scalar samples on a strictly increasing time grid."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        if np.any(np.diff(times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", np.asarray(self.values))


def diagonalize(op: HermitianOperator) -> EigenSystem:
    """Eigendecomposition of a real-symmetric operator.

    Output is deterministic: eigenvalues ascending, and each eigenvector
    scaled so its largest-magnitude component is positive.  Residual and
    orthogonality contracts are verified on every call and violations
    raise :class:`SpectralError` rather than returning silently bad data.
    """
    m = op.entries
    if not np.all(np.isfinite(m)):
        raise SpectralError("matrix contains non-finite entries")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh rarely fails on finite input
        raise SpectralError(f"eigendecomposition failed to converge: {exc}") from exc

    # fix the sign freedom deterministically
    lead = np.argmax(np.abs(eigenvectors), axis=0)
    signs = np.where(eigenvectors[lead, np.arange(op.dim)] < 0, -1.0, 1.0)
    eigenvectors = eigenvectors * signs

    scale = max(1.0, float(np.max(np.abs(eigenvalues))) if op.dim else 1.0)
    residual = np.max(np.abs(m @ eigenvectors - eigenvectors * eigenvalues))
    if residual >= 1e-10 * scale:
        raise SpectralError(f"eigenpair residual {residual:.3e} exceeds 1e-10 * {scale:.3e}")
    ortho = np.max(np.abs(eigenvectors.T @ eigenvectors - np.eye(op.dim)))
    if ortho >= 1e-10:
        raise SpectralError(f"eigenvector matrix deviates from orthogonal by {ortho:.3e}")
    return EigenSystem(eigenvalues, eigenvectors)


def _propagate(system: EigenSystem, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Evolved states as columns, one per requested time."""
    amps = system.eigenvectors.T @ psi0
    phases = np.exp(-1j * np.outer(system.eigenvalues, times))
    return system.eigenvectors @ (phases * amps[:, None])


def _as_vector(psi0: ReducedState | np.ndarray) -> np.ndarray:
    if isinstance(psi0, ReducedState):
        return np.asarray(psi0.amps)
    return np.asarray(psi0)


def evolve(
    op: HermitianOperator | EigenSystem,
    psi0: ReducedState | np.ndarray,
    t: float,
) -> np.ndarray:
    """Apply exp(-i H t) to a state; returns a complex vector."""
    system = op if isinstance(op, EigenSystem) else diagonalize(op)
    vec = _as_vector(psi0)
    if vec.shape != (system.dim,):
        raise ValueError(f"state has shape {vec.shape}, expected ({system.dim},)")
    return _propagate(system, vec, np.array([float(t)]))[:, 0]


def _target_matrix(
    inst: BipartiteInstance,
    op: HermitianOperator,
    targets: set[str] | frozenset[str] | tuple[str, ...] | list[str],
    marks: MarkedSet | None,
) -> np.ndarray:
    """Rows that map a state vector to the amplitudes on the target classes.

    Targets naming empty classes contribute zero rows: with no marked
    vertices in a set, the probability of measuring one is zero.
    """
    targets = tuple(targets)
    if not targets:
        raise ValueError("targets must be non-empty")
    unknown = set(targets) - set(MARKED_LABELS)
    if unknown:
        raise ValueError(f"targets must be marked classes {MARKED_LABELS}, got {sorted(unknown)}")
    rows = []
    if op.labels is not None:
        for label in targets:
            row = np.zeros(op.dim)
            if label in op.labels:
                row[op.labels.index(label)] = 1.0
            rows.append(row)
    else:
        from .graphs import MarkedSet as _MarkedSet

        marks = marks if marks is not None else _MarkedSet.canonical(inst)
        indices = _class_indices(inst, marks)
        present = basis_labels(inst)
        for label in targets:
            row = np.zeros(inst.n)
            if label in present:
                idx = indices[label]
                row[idx] = 1.0 / np.sqrt(len(idx))
            rows.append(row)
    return np.array(rows)


def success_probability(
    inst: BipartiteInstance,
    op: HermitianOperator,
    psi0: ReducedState | np.ndarray,
    t: float,
    targets: set[str] | tuple[str, ...] | list[str],
    marks: MarkedSet | None = None,
) -> float:
    """Probability of finding a vertex of the target classes at time t."""
    rows = _target_matrix(inst, op, targets, marks)
    state = evolve(op, psi0, t)
    return float(np.sum(np.abs(rows @ state) ** 2))


def probability_series(
    inst: BipartiteInstance,
    op: HermitianOperator,
    psi0: ReducedState | np.ndarray,
    t_max: float,
    n_points: int,
    targets: set[str] | tuple[str, ...] | list[str],
    marks: MarkedSet | None = None,
) -> EvolutionSeries:
    """Success probability on a uniform grid covering [0, t_max]."""
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    if n_points < 2:
        raise ValueError(f"need at least 2 points, got {n_points}")
    rows = _target_matrix(inst, op, targets, marks)
    system = diagonalize(op)
    times = np.linspace(0.0, float(t_max), int(n_points))
    states = _propagate(system, _as_vector(psi0), times)
    values = np.sum(np.abs(rows @ states) ** 2, axis=0)
    if values.min() < -1e-9 or values.max() > 1 + 1e-9:
        raise SpectralError(f"probabilities left [0, 1]: range [{values.min()}, {values.max()}]")
    return EvolutionSeries(times, values)
