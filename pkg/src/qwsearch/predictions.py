"""Closed-form layer: critical rates, runtimes, final states, approximate
eigenpairs, speed comparison between the two walks, and expected repetition
counts for collecting every marked vertex.

All formulas here are analytic; :mod:`qwsearch.sweeps` provides the
numerical experiments they are validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np

from .graphs import BipartiteInstance, HermitianOperator
from .subspace import (
    ReducedState,
    WalkKind,
    balanced_complement,
    balanced_state,
    basis_labels,
    basis_state,
    search_hamiltonian,
    uniform_state,
)


class SearchRegime(str, Enum):
    """One resonance of the search dynamics.

    The Laplacian walk has two critical rates, steering the system to the
    marked vertices of one set or the other; the adjacency walk has a
    single critical rate reaching both sets at once.
    """

    LAPLACIAN_A = "laplacian_a"
    LAPLACIAN_B = "laplacian_b"
    ADJACENCY = "adjacency"

    @property
    def kind(self) -> WalkKind:
        return WalkKind.ADJACENCY if self is SearchRegime.ADJACENCY else WalkKind.LAPLACIAN

    @property
    def targets(self) -> tuple[str, ...]:
        if self is SearchRegime.LAPLACIAN_A:
            return ("a",)
        if self is SearchRegime.LAPLACIAN_B:
            return ("b",)
        return ("a", "b")


@dataclass(frozen=True)
class WalkPrediction:
    """Analytic bundle for one regime.

    ``eigenpairs`` holds the normalized approximate eigenvectors (in the
    class basis) together with their predicted eigenvalues; the runtime
    equals pi over the predicted gap.  ``precision_scale`` is the scale
    below which detuning the rate away from critical is harmless.
    """

    kind: WalkKind
    regime: SearchRegime
    gamma_crit: float
    runtime: float
    final_state: ReducedState
    eigenpairs: tuple[tuple[ReducedState, float], ...]
    precision_scale: float


def _normalized(inst: BipartiteInstance, full_amps: dict[str, float]) -> ReducedState:
    labels = basis_labels(inst)
    amps = np.array([full_amps.get(label, 0.0) for label in labels])
    return ReducedState(labels, amps / np.linalg.norm(amps))


def predict(inst: BipartiteInstance, regime: SearchRegime) -> WalkPrediction:
    """Critical rate, runtime, final state and approximate eigenpairs."""
    regime = SearchRegime(regime)
    n1, n2, k1, k2 = inst.n1, inst.n2, inst.k1, inst.k2
    n = inst.n
    if regime is SearchRegime.LAPLACIAN_A and k1 < 1:
        raise ValueError("regime laplacian_a needs at least one marked vertex in the left set")
    if regime is SearchRegime.LAPLACIAN_B and k2 < 1:
        raise ValueError("regime laplacian_b needs at least one marked vertex in the right set")

    if regime in (SearchRegime.LAPLACIAN_A, SearchRegime.LAPLACIAN_B):
        target = "a" if regime is SearchRegime.LAPLACIAN_A else "b"
        k = k1 if regime is SearchRegime.LAPLACIAN_A else k2
        gamma = 1.0 / n2 if regime is SearchRegime.LAPLACIAN_A else 1.0 / n1
        energy = math.sqrt(k / n)
        runtime = (math.pi / 2.0) * math.sqrt(n / k)
        start = uniform_state(inst)
        pairs = []
        for sign, value in ((1.0, -energy), (-1.0, +energy)):
            amps = {label: start.amplitude(label) for label in basis_labels(inst)}
            amps[target] = amps.get(target, 0.0) + sign
            pairs.append((_normalized(inst, amps), value))
        return WalkPrediction(
            kind=WalkKind.LAPLACIAN,
            regime=regime,
            gamma_crit=gamma,
            runtime=runtime,
            final_state=basis_state(inst, target),
            eigenpairs=tuple(pairs),
            precision_scale=n ** -1.5,
        )

    # adjacency regime
    s = k2 * n1 + k1 * n2
    gamma = 1.0 / math.sqrt(n1 * n2)
    half_gap = math.sqrt(s / (2.0 * n1 * n2))
    runtime = math.pi / (2.0 * half_gap)
    ca = math.sqrt(k1 * n2 / s)
    cb = math.sqrt(k2 * n1 / s)
    start = balanced_state(inst)
    pairs = []
    for sign, value in ((1.0, -1.0 - half_gap), (-1.0, -1.0 + half_gap)):
        amps = {label: start.amplitude(label) for label in basis_labels(inst)}
        amps["a"] = amps.get("a", 0.0) + sign * ca
        amps["b"] = amps.get("b", 0.0) + sign * cb
        pairs.append((_normalized(inst, amps), value))
    if k1 > 0 and k2 > 0:
        # the third member of the degenerate block, orthogonal to the start state
        amps = {"a": -math.sqrt(k2 * n1 / (k1 * n2)), "b": 1.0}
        pairs.append((_normalized(inst, amps), -1.0))
    return WalkPrediction(
        kind=WalkKind.ADJACENCY,
        regime=SearchRegime.ADJACENCY,
        gamma_crit=gamma,
        runtime=runtime,
        final_state=_normalized(inst, {"a": ca, "b": cb}),
        eigenpairs=tuple(pairs),
        precision_scale=n ** -1.5,
    )


# --------------------------------------------------------------------------
# residual reports for the approximate eigenpairs


@dataclass(frozen=True)
class EigenpairReport:
    """Residuals of predicted eigenpairs against the exact Hamiltonian.

    ``residuals`` are ||H v - E v|| for unit v; ``relative_residuals``
    additionally divide by the Frobenius norm of H (the standard
    backward-error normalization), which makes values comparable across
    Hamiltonians of different scale.
    """

    regime: SearchRegime
    gamma: float
    residuals: tuple[float, ...]
    relative_residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    @property
    def max_relative_residual(self) -> float:
        return max(self.relative_residuals)


def _pair_residual(h: HermitianOperator, state: ReducedState, energy: float) -> float:
    vec = state.amps
    return float(np.linalg.norm(h.entries @ vec - energy * vec) / np.linalg.norm(vec))


def verify_eigenpairs(inst: BipartiteInstance, prediction: WalkPrediction) -> EigenpairReport:
    """Check each predicted eigenpair against the exact reduced Hamiltonian."""
    h = search_hamiltonian(inst, prediction.kind, prediction.gamma_crit)
    h_scale = float(np.linalg.norm(h.entries))
    residuals = tuple(_pair_residual(h, state, energy) for state, energy in prediction.eigenpairs)
    return EigenpairReport(
        regime=prediction.regime,
        gamma=prediction.gamma_crit,
        residuals=residuals,
        relative_residuals=tuple(r / h_scale for r in residuals),
    )


@dataclass(frozen=True)
class StationarityReport:
    """How close the balanced-complement state is to an exact eigenstate."""

    rayleigh: float
    residual: float
    relative_residual: float


def complement_stationarity(inst: BipartiteInstance) -> StationarityReport:
    """Residual of the balanced-complement state at the adjacency critical rate.

    The state only picks up a phase under the search dynamics, so its
    residual against its own Rayleigh quotient should shrink with size.
    """
    gamma = 1.0 / math.sqrt(inst.n1 * inst.n2)
    h = search_hamiltonian(inst, WalkKind.ADJACENCY, gamma)
    vec = balanced_complement(inst).amps
    rayleigh = float(vec @ h.entries @ vec)
    residual = float(np.linalg.norm(h.entries @ vec - rayleigh * vec))
    return StationarityReport(
        rayleigh=rayleigh,
        residual=residual,
        relative_residual=residual / float(np.linalg.norm(h.entries)),
    )


# --------------------------------------------------------------------------
# which walk is faster


class Faster(str, Enum):
    ADJACENCY = "adjacency_faster"
    LAPLACIAN = "laplacian_faster"
    TIE = "tie"
    EQUIVALENT = "regimes_equivalent"


@dataclass(frozen=True)
class SpeedVerdict:
    """Outcome of comparing the adjacency runtime with the best Laplacian one.

    ``threshold`` is the boundary value of the varied marked count (k1
    when n1 > n2, k2 when n1 < n2), None when the two walks are
    asymptotically equivalent.
    """

    verdict: Faster
    threshold: float | None


def analytic_runtimes(inst: BipartiteInstance) -> tuple[float, float, float]:
    """(t_a, t_b, t_star); a Laplacian runtime is inf when its set has no marks."""
    n1, n2, k1, k2, n = inst.n1, inst.n2, inst.k1, inst.k2, inst.n
    t_a = (math.pi / 2.0) * math.sqrt(n / k1) if k1 > 0 else math.inf
    t_b = (math.pi / 2.0) * math.sqrt(n / k2) if k2 > 0 else math.inf
    s = k2 * n1 + k1 * n2
    t_star = math.pi * math.sqrt(n1 * n2) / math.sqrt(2.0 * s)
    return t_a, t_b, t_star


def faster_walk(inst: BipartiteInstance) -> SpeedVerdict:
    """Classify which walk finds a marked vertex sooner.

    When the set sizes are within sqrt(n) of each other the two walks are
    effectively the same and no verdict is meaningful.  Otherwise the
    adjacency walk always beats the Laplacian resonance aimed at the
    smaller set, and the remaining comparison reduces to the varied
    marked count against a closed-form threshold.  Ties are detected on
    the runtimes with relative tolerance 1e-12.
    """
    n1, n2, k1, k2, n = inst.n1, inst.n2, inst.k1, inst.k2, inst.n
    if abs(n1 - n2) <= math.sqrt(n):
        return SpeedVerdict(Faster.EQUIVALENT, None)
    t_a, t_b, t_star = analytic_runtimes(inst)
    if n1 > n2:
        threshold = k2 * (n1 / n2) * (n / (n1 - n2))
        varied, t_cmp = k1, t_a
    else:
        threshold = k1 * (n2 / n1) * (n / (n2 - n1))
        varied, t_cmp = k2, t_b
    if math.isfinite(t_cmp) and abs(t_star - t_cmp) <= 1e-12 * max(t_star, t_cmp):
        return SpeedVerdict(Faster.TIE, threshold)
    return SpeedVerdict(Faster.ADJACENCY if varied < threshold else Faster.LAPLACIAN, threshold)


# --------------------------------------------------------------------------
# repetitions to collect every marked vertex


def harmonic_number(k: int) -> Fraction:
    """H_k = 1 + 1/2 + ... + 1/k as an exact rational; H_0 = 0."""
    if k < 0:
        raise ValueError("harmonic numbers need k >= 0")
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def expected_repetitions_laplacian(k1: int, k2: int) -> Fraction:
    """Expected runs to see every marked vertex using the two Laplacian resonances.

    Each resonance samples uniformly within one set, so each set is an
    independent uniform coupon-collector problem: k1*H_k1 + k2*H_k2.
    """
    return k1 * harmonic_number(k1) + k2 * harmonic_number(k2)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = 1e-9,
    max_depth: int = 60,
) -> float:
    """Adaptive Simpson quadrature on [a, b] with relative tolerance."""

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        fl = f(0.5 * (lo + mid))
        fr = f(0.5 * (mid + hi))
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        if abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        if depth <= 0:
            raise QuadratureError(
                f"adaptive Simpson did not converge on [{lo}, {hi}] within the depth cap"
            )
        return recurse(lo, mid, flo, fl, fmid, left, 0.5 * tol, depth - 1) + recurse(
            mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth - 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    tol = max(rel_tol * abs(whole), 1e-12)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


def expected_repetitions_adjacency(inst: BipartiteInstance) -> float:
    """Expected runs to see every marked vertex from the adjacency final state.

    The final state samples left-set marks with probability n2/s each and
    right-set marks with n1/s each (s = k2*n1 + k1*n2), so this is the
    coupon-collector problem with non-uniform weights; its expectation is
    the exponential-product integral evaluated here by adaptive Simpson.
    The integration window is capped where the integrand falls below
    1e-12, which the slowest exponential rate bounds explicitly.
    """
    n1, n2, k1, k2 = inst.n1, inst.n2, inst.k1, inst.k2
    s = k2 * n1 + k1 * n2
    rate1 = n2 / s  # per-vertex sampling rate, left marks
    rate2 = n1 / s  # right marks

    def integrand(t: float) -> float:
        p1 = (1.0 - math.exp(-rate1 * t)) ** k1 if k1 > 0 else 1.0
        p2 = (1.0 - math.exp(-rate2 * t)) ** k2 if k2 > 0 else 1.0
        return 1.0 - p1 * p2

    rates = [r for r, k in ((rate1, k1), (rate2, k2)) if k > 0]
    t_cap = (math.log(k1 + k2) + 35.0) / min(rates)
    return adaptive_simpson(integrand, 0.0, t_cap, rel_tol=1e-9)


def uniform_start_success_bound(inst: BipartiteInstance) -> float:
    """Peak success of the adjacency walk when started from the uniform state.

    Only the balanced component of the uniform state evolves to the
    marked vertices; its weight is 1/2 + sqrt(n1*n2)/n, which never drops
    below one half.
    """
    return 0.5 + math.sqrt(inst.n1 * inst.n2) / inst.n
