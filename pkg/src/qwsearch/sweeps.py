"""Numerical experiments: eigenstate-overlap sweeps, peak detection,
critical-rate search, and detuning scans.

Per-grid-point work is independent; set the environment variable
QWALK_THREADS to a value above 1 to evaluate grids with a thread pool.
Results are assembled by grid index either way, so output does not
depend on scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .graphs import BipartiteInstance
from .predictions import SearchRegime, predict
from .spectral import EigenSystem, _as_vector, _propagate, _target_matrix, diagonalize
from .subspace import (
    ReducedState,
    WalkKind,
    balanced_state,
    basis_state,
    search_hamiltonian,
    uniform_state,
)

_T = TypeVar("_T")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: coarse scan resolution used before golden-section refinement
_SCAN_POINTS = 400


class DegenerateRegimeError(RuntimeError):
    """The peak-probability landscape is flat; no resonance to locate."""


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QWALK_THREADS", "1")))
    except ValueError:
        return 1


def _grid_map(fn: Callable[[_T], object], items: Sequence[_T]) -> list:
    workers = _thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def initial_state(inst: BipartiteInstance, kind: WalkKind) -> ReducedState:
    """Natural starting state: uniform for the Laplacian walk, set-balanced
    for the adjacency walk."""
    kind = WalkKind(kind)
    return uniform_state(inst) if kind is WalkKind.LAPLACIAN else balanced_state(inst)


# --------------------------------------------------------------------------
# overlap sweeps


@dataclass(frozen=True)
class OverlapCurve:
    """Squared overlaps of reference states with eigenstates along a rate grid.

    ``overlaps[name]`` has one row per grid point and one column per
    eigenstate, indexed ascending by eigenvalue.
    """

    gammas: np.ndarray
    overlaps: dict[str, np.ndarray]


def default_references(inst: BipartiteInstance, kind: WalkKind) -> dict[str, ReducedState]:
    refs: dict[str, ReducedState] = {"initial": initial_state(inst, kind)}
    for label in ("a", "b"):
        if (inst.k1 if label == "a" else inst.k2) > 0:
            refs[label] = basis_state(inst, label)
    return refs


def overlap_sweep(
    inst: BipartiteInstance,
    kind: WalkKind,
    gammas: Iterable[float],
    references: dict[str, ReducedState] | None = None,
) -> OverlapCurve:
    """Diagonalize the search Hamiltonian along a rate grid and record
    squared overlaps of each reference state with every eigenstate."""
    gammas = np.asarray(list(gammas), dtype=float)
    if len(gammas) == 0 or np.any(gammas <= 0) or np.any(np.diff(gammas) <= 0):
        raise ValueError("gamma grid must be positive and strictly increasing")
    refs = references if references is not None else default_references(inst, kind)
    ref_matrix = np.array([state.amps for state in refs.values()])

    def one(gamma: float) -> np.ndarray:
        system = diagonalize(search_hamiltonian(inst, kind, gamma))
        return (ref_matrix @ system.eigenvectors) ** 2

    rows = _grid_map(one, list(gammas))
    stacked = np.array(rows)  # (n_gamma, n_refs, dim)
    overlaps = {name: stacked[:, i, :] for i, name in enumerate(refs)}
    return OverlapCurve(gammas, overlaps)


# --------------------------------------------------------------------------
# peak detection


@dataclass(frozen=True)
class PeakResult:
    """First maximum of a success-probability curve.

    ``found`` is False when the coarse scan sees no interior local
    maximum above half the scan maximum (a monotone or flat curve); the
    fields then hold the best scanned point instead of a refined peak.
    """

    t_peak: float
    p_peak: float
    found: bool = True


def find_peak(
    inst: BipartiteInstance,
    kind: WalkKind,
    gamma: float,
    start: ReducedState,
    targets: Sequence[str],
    t_max: float,
) -> PeakResult:
    """Locate the first success-probability peak in (0, t_max].

    A 400-point uniform scan selects the first local maximum exceeding
    half the global scan maximum (later revivals are ignored), then
    golden-section refinement resolves its time to relative 1e-6.
    """
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    h = search_hamiltonian(inst, kind, gamma)
    system = diagonalize(h)
    rows = _target_matrix(inst, h, tuple(targets), None)
    vec = _as_vector(start)

    def prob(times: np.ndarray) -> np.ndarray:
        states = _propagate(system, vec, times)
        return np.sum(np.abs(rows @ states) ** 2, axis=0)

    times = np.linspace(0.0, float(t_max), _SCAN_POINTS)
    values = prob(times)
    cutoff = 0.5 * float(values.max())
    peak_idx = None
    for i in range(1, len(times) - 1):
        if values[i] >= values[i - 1] and values[i] >= values[i + 1] and values[i] >= cutoff:
            peak_idx = i
            break
    if peak_idx is None:
        best = int(np.argmax(values))
        return PeakResult(t_peak=float(times[best]), p_peak=float(values[best]), found=False)

    lo, hi = times[peak_idx - 1], times[peak_idx + 1]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = prob(np.array([x1, x2]))
    while hi - lo > 1e-6 * max(hi, 1e-12):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = float(prob(np.array([x2]))[0])
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = float(prob(np.array([x1]))[0])
    t_peak = 0.5 * (lo + hi)
    return PeakResult(t_peak=float(t_peak), p_peak=float(prob(np.array([t_peak]))[0]), found=True)


# --------------------------------------------------------------------------
# critical-rate search


def _peak_probability(inst: BipartiteInstance, regime: SearchRegime, gamma: float, t_max: float) -> float:
    result = find_peak(
        inst, regime.kind, gamma, initial_state(inst, regime.kind), regime.targets, t_max
    )
    return result.p_peak


def critical_gamma_search(
    inst: BipartiteInstance,
    kind: WalkKind,
    regimes: Sequence[SearchRegime] | None = None,
) -> dict[SearchRegime, float]:
    """Numerically locate the critical jumping rate of each regime.

    The objective is the peak success probability, maximized over a
    log-spaced 120-point grid spanning [0.1/max(n1, n2), 10/sqrt(n1*n2)].
    For the Laplacian walk the search runs once per resonance, restricted
    to a factor-sqrt(2) neighborhood of the analytic candidate so the two
    resonances cannot be confused.  Golden-section refinement resolves
    the rate to relative 1e-4.
    """
    kind = WalkKind(kind)
    if regimes is None:
        if kind is WalkKind.ADJACENCY:
            regimes = (SearchRegime.ADJACENCY,)
        else:
            regimes = tuple(
                regime
                for regime, k in (
                    (SearchRegime.LAPLACIAN_A, inst.k1),
                    (SearchRegime.LAPLACIAN_B, inst.k2),
                )
                if k > 0
            )
    for regime in regimes:
        if regime.kind is not kind:
            raise ValueError(f"regime {regime.value} does not belong to the {kind.value} walk")

    lo = 0.1 / max(inst.n1, inst.n2)
    hi = 10.0 / math.sqrt(inst.n1 * inst.n2)
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), 120))

    results: dict[SearchRegime, float] = {}
    for regime in regimes:
        pred = predict(inst, regime)
        t_max = 3.0 * pred.runtime
        points = grid
        if kind is WalkKind.LAPLACIAN:
            window = (pred.gamma_crit / math.sqrt(2.0), pred.gamma_crit * math.sqrt(2.0))
            points = grid[(grid >= window[0]) & (grid <= window[1])]
            if len(points) < 8:
                points = np.exp(np.linspace(math.log(window[0]), math.log(window[1]), 40))

        values = np.array(
            _grid_map(lambda g: _peak_probability(inst, regime, float(g), t_max), list(points))
        )
        if float(values.max() - values.min()) < 0.05:
            raise DegenerateRegimeError(
                f"peak probability is flat across the rate grid for {regime.value} "
                f"(spread {values.max() - values.min():.3f}); no resonance found"
            )
        best = int(np.argmax(values))
        log_lo = math.log(points[max(best - 1, 0)])
        log_hi = math.log(points[min(best + 1, len(points) - 1)])

        def objective(log_gamma: float) -> float:
            return _peak_probability(inst, regime, math.exp(log_gamma), t_max)

        x1 = log_hi - _GOLDEN * (log_hi - log_lo)
        x2 = log_lo + _GOLDEN * (log_hi - log_lo)
        f1, f2 = objective(x1), objective(x2)
        while log_hi - log_lo > 1e-4:
            if f1 < f2:
                log_lo, x1, f1 = x1, x2, f2
                x2 = log_lo + _GOLDEN * (log_hi - log_lo)
                f2 = objective(x2)
            else:
                log_hi, x2, f2 = x2, x1, f1
                x1 = log_hi - _GOLDEN * (log_hi - log_lo)
                f1 = objective(x1)
        results[regime] = math.exp(0.5 * (log_lo + log_hi))
    return results


# --------------------------------------------------------------------------
# detuning scans


@dataclass(frozen=True)
class DetuningSweep:
    """Peak success probability as the rate is offset from critical."""

    regime: SearchRegime
    gamma_base: float
    epsilons: np.ndarray
    p_peaks: np.ndarray


def detuning_sweep(
    inst: BipartiteInstance,
    regime: SearchRegime,
    epsilons: Iterable[float],
    gamma: float | None = None,
) -> DetuningSweep:
    """Peak success probability at gamma + epsilon for each offset.

    The peak is searched within three analytic runtimes.  The offset list
    must include 0 so the undetuned baseline is part of the scan.
    """
    regime = SearchRegime(regime)
    epsilons = np.asarray(list(epsilons), dtype=float)
    if not np.any(epsilons == 0.0):
        raise ValueError("epsilon list must include 0 (the undetuned baseline)")
    pred = predict(inst, regime)
    base = pred.gamma_crit if gamma is None else float(gamma)
    bad = epsilons[base + epsilons <= 0]
    if len(bad):
        raise ValueError(f"offsets {bad.tolist()} drive the jumping rate non-positive")
    t_max = 3.0 * pred.runtime

    def one(eps: float) -> float:
        return _peak_probability(inst, regime, base + eps, t_max)

    p_peaks = np.array(_grid_map(one, list(epsilons)))
    return DetuningSweep(regime=regime, gamma_base=base, epsilons=epsilons, p_peaks=p_peaks)
