"""Command-line interface: dataset emission and the one-shot reproduction suite.

Subcommands: overlap, evolve, compare, critical-gamma, detune, coupon,
predict, reproduce-all.  Every dataset-producing command prints CSV to
stdout or writes it with ``--out``; ``--plot`` additionally renders a
PNG next to the file.  ``reproduce-all`` emits every figure and table
dataset plus a JSON summary of numeric checks, and exits nonzero if any
check fails.

Instances default to (n1, n2, k1, k2) = (512, 256, 3, 5); values can
come from a config file (JSON or flat key=value, auto-detected) and are
overridden by command-line flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import (
    Dataset,
    atomic_write_text,
    columns_from_arrays,
    format_dataset,
    standard_metadata,
    write_dataset,
)
from .graphs import BipartiteInstance
from .predictions import (
    Faster,
    SearchRegime,
    analytic_runtimes,
    complement_stationarity,
    expected_repetitions_adjacency,
    expected_repetitions_laplacian,
    faster_walk,
    predict,
    uniform_start_success_bound,
    verify_eigenpairs,
)
from .spectral import SpectralError, probability_series, success_probability
from .subspace import WalkKind, balanced_state, uniform_state
from .sweeps import (
    DegenerateRegimeError,
    critical_gamma_search,
    detuning_sweep,
    find_peak,
    initial_state,
    overlap_sweep,
)

DEFAULT_INSTANCE = BipartiteInstance(512, 256, 3, 5)

_CONFIG_KEYS = {
    "n1": int,
    "n2": int,
    "k1": int,
    "k2": int,
    "gamma": float,
    "walk": str,
    "tmax": float,
    "points": int,
}


@dataclass(frozen=True)
class InstanceConfig:
    """Resolved run configuration: instance plus optional overrides."""

    instance: BipartiteInstance
    walk: WalkKind | None = None
    gamma: float | None = None
    tmax: float | None = None
    points: int | None = None

    def __post_init__(self) -> None:
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError(f"gamma override must be positive, got {self.gamma!r}")
        if self.tmax is not None and not self.tmax > 0:
            raise ValueError(f"tmax must be positive, got {self.tmax!r}")
        if self.points is not None and self.points < 2:
            raise ValueError(f"points must be at least 2, got {self.points!r}")


def load_config_file(path: str | Path) -> dict:
    """Parse a JSON or flat key=value config file (auto-detected)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: JSON config must be an object")
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
    config = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}: unknown config key {key!r}")
        try:
            config[key] = _CONFIG_KEYS[key](value)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{path}: bad value for {key!r}: {value!r}") from exc
    return config


def resolve_config(args: argparse.Namespace) -> InstanceConfig:
    values: dict = {"n1": DEFAULT_INSTANCE.n1, "n2": DEFAULT_INSTANCE.n2,
                    "k1": DEFAULT_INSTANCE.k1, "k2": DEFAULT_INSTANCE.k2}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in _CONFIG_KEYS:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            values[key] = cli_value
    instance = BipartiteInstance(values["n1"], values["n2"], values["k1"], values["k2"])
    walk = WalkKind(values["walk"]) if "walk" in values else None
    return InstanceConfig(
        instance=instance,
        walk=walk,
        gamma=values.get("gamma"),
        tmax=values.get("tmax"),
        points=values.get("points"),
    )


def _default_regime(inst: BipartiteInstance, kind: WalkKind) -> SearchRegime:
    if kind is WalkKind.ADJACENCY:
        return SearchRegime.ADJACENCY
    return SearchRegime.LAPLACIAN_A if inst.k1 > 0 else SearchRegime.LAPLACIAN_B


def _resolve_regime(config: InstanceConfig, args: argparse.Namespace) -> SearchRegime:
    kind = config.walk or WalkKind.LAPLACIAN
    regime_arg = getattr(args, "regime", None)
    if regime_arg is None:
        return _default_regime(config.instance, kind)
    regime = SearchRegime(regime_arg)
    if config.walk is not None and regime.kind is not config.walk:
        raise ValueError(f"regime {regime.value} does not belong to the {config.walk.value} walk")
    return regime


def _emit(dataset: Dataset, args: argparse.Namespace, plot_kind: str | None) -> None:
    out = getattr(args, "out", None)
    wants_plot = getattr(args, "plot", False)
    if wants_plot and out is None:
        raise ValueError("--plot requires --out")
    if out is None:
        sys.stdout.write(format_dataset(dataset))
        return
    write_dataset(dataset, out)
    if wants_plot and plot_kind is not None:
        from . import plots

        plots.RENDERERS[plot_kind](dataset, Path(out).with_suffix(".png"))


# --------------------------------------------------------------------------
# dataset builders (shared by the subcommands and reproduce-all)


def _overlap_grid(inst: BipartiteInstance, kind: WalkKind, n_points: int) -> np.ndarray:
    if kind is WalkKind.ADJACENCY:
        candidates = [1.0 / math.sqrt(inst.n1 * inst.n2)]
    else:
        candidates = [1.0 / inst.n2 if inst.k1 > 0 else None, 1.0 / inst.n1 if inst.k2 > 0 else None]
        candidates = [c for c in candidates if c is not None]
    return np.linspace(0.25 * min(candidates), 3.0 * max(candidates), n_points)


def build_overlap_dataset(config: InstanceConfig, kind: WalkKind, n_points: int) -> Dataset:
    inst = config.instance
    grid = _overlap_grid(inst, kind, n_points)
    curve = overlap_sweep(inst, kind, grid)
    columns = ["gamma"]
    arrays: list = [list(map(float, curve.gammas))]
    for name, block in curve.overlaps.items():
        for i in range(block.shape[1]):
            columns.append(f"{name}_psi{i}")
            arrays.append(list(map(float, block[:, i])))
    meta = standard_metadata("overlap", inst, walk=kind.value)
    return columns_from_arrays(columns, arrays, meta)


def build_evolve_dataset(
    config: InstanceConfig, regime: SearchRegime, start_name: str | None = None
) -> Dataset:
    inst = config.instance
    pred = predict(inst, regime)
    gamma = config.gamma if config.gamma is not None else pred.gamma_crit
    t_max = config.tmax if config.tmax is not None else 2.0 * pred.runtime
    n_points = config.points if config.points is not None else 501
    if start_name == "uniform":
        start = uniform_state(inst)
    elif start_name == "balanced":
        start = balanced_state(inst)
    elif start_name is None:
        start = initial_state(inst, regime.kind)
    else:
        raise ValueError(f"unknown start state {start_name!r}")
    h_kind = regime.kind
    series_a = probability_series(inst, _h(inst, h_kind, gamma), start, t_max, n_points, ("a",))
    series_b = probability_series(inst, _h(inst, h_kind, gamma), start, t_max, n_points, ("b",))
    p_a = series_a.values
    p_b = series_b.values
    meta = standard_metadata(
        "evolve", inst, walk=h_kind.value, regime=regime.value, gamma=gamma, tmax=t_max
    )
    return columns_from_arrays(
        ["t", "p_a", "p_b", "p_total"],
        [list(map(float, series_a.times)), list(map(float, p_a)), list(map(float, p_b)),
         list(map(float, p_a + p_b))],
        meta,
    )


def _h(inst: BipartiteInstance, kind: WalkKind, gamma: float):
    from .subspace import search_hamiltonian

    return search_hamiltonian(inst, kind, gamma)


def build_compare_dataset(inst: BipartiteInstance, varied: str, k_values: list[int]) -> Dataset:
    if varied not in ("k1", "k2"):
        raise ValueError(f"varied count must be k1 or k2, got {varied!r}")
    rows = []
    for k in k_values:
        trial = replace(inst, **{varied: k})
        t_a, t_b, t_star = analytic_runtimes(trial)
        verdict = faster_walk(trial)
        rows.append((k, t_a, t_b, t_star, verdict.verdict.value))
    threshold = faster_walk(replace(inst, **{varied: k_values[0]})).threshold
    meta = standard_metadata("compare", inst, varied=varied, threshold=threshold)
    return Dataset(columns=[varied, "t_a", "t_b", "t_star", "verdict"], rows=rows, metadata=meta)


def build_critical_gamma_dataset(config: InstanceConfig, kinds: list[WalkKind]) -> Dataset:
    inst = config.instance
    rows = []
    for kind in kinds:
        numeric = critical_gamma_search(inst, kind)
        for regime, gamma in numeric.items():
            analytic = predict(inst, regime).gamma_crit
            rows.append(
                (regime.value, gamma, analytic, abs(gamma - analytic) / analytic)
            )
    meta = standard_metadata("critical-gamma", inst, walks=[k.value for k in kinds])
    return Dataset(
        columns=["regime", "gamma_numeric", "gamma_analytic", "rel_error"],
        rows=rows,
        metadata=meta,
    )


def default_epsilons(inst: BipartiteInstance, gamma: float) -> list[float]:
    n = inst.n
    offsets = [-1.0 / n, -(n ** -1.5), -(n ** -2), 0.0, n ** -2, n ** -1.5, 1.0 / n, 5.0 / n]
    return [eps for eps in offsets if gamma + eps > 0]


def build_detune_dataset(
    config: InstanceConfig, regime: SearchRegime, epsilons: list[float] | None
) -> Dataset:
    inst = config.instance
    gamma = config.gamma if config.gamma is not None else predict(inst, regime).gamma_crit
    if epsilons is None:
        epsilons = default_epsilons(inst, gamma)
    sweep = detuning_sweep(inst, regime, epsilons, gamma=gamma)
    meta = standard_metadata("detune", inst, regime=regime.value, gamma=gamma)
    return columns_from_arrays(
        ["epsilon", "gamma", "p_peak"],
        [
            list(map(float, sweep.epsilons)),
            [float(gamma + e) for e in sweep.epsilons],
            list(map(float, sweep.p_peaks)),
        ],
        meta,
    )


def build_coupon_dataset(config: InstanceConfig) -> Dataset:
    inst = config.instance
    exact = expected_repetitions_laplacian(inst.k1, inst.k2)
    integral = expected_repetitions_adjacency(inst)
    meta = standard_metadata("coupon", inst, laplacian_exact=str(exact))
    return Dataset(
        columns=["method", "expected_runs"],
        rows=[("laplacian", float(exact)), ("adjacency", integral)],
        metadata=meta,
    )


def _defined_regimes(inst: BipartiteInstance) -> list[SearchRegime]:
    regimes = []
    if inst.k1 > 0:
        regimes.append(SearchRegime.LAPLACIAN_A)
    if inst.k2 > 0:
        regimes.append(SearchRegime.LAPLACIAN_B)
    regimes.append(SearchRegime.ADJACENCY)
    return regimes


def build_predict_dataset(config: InstanceConfig) -> Dataset:
    inst = config.instance
    rows = []
    for regime in _defined_regimes(inst):
        pred = predict(inst, regime)
        rows.append(
            (
                regime.value,
                pred.gamma_crit,
                pred.runtime,
                math.pi / pred.runtime,
                pred.final_state.amplitude("a") ** 2,
                pred.final_state.amplitude("b") ** 2,
                pred.precision_scale,
            )
        )
    meta = standard_metadata("predict", inst)
    return Dataset(
        columns=["regime", "gamma_crit", "runtime", "gap", "p_a_final", "p_b_final", "precision_scale"],
        rows=rows,
        metadata=meta,
    )


# --------------------------------------------------------------------------
# reproduce-all


def _repetitions_inclusion_exclusion(inst: BipartiteInstance) -> float:
    """Closed-form value of the non-uniform collection integral, used as an
    independent cross-check of the quadrature."""
    s = inst.k2 * inst.n1 + inst.k1 * inst.n2
    r1, r2 = inst.n2 / s, inst.n1 / s
    total = 0.0
    for i in range(inst.k1 + 1):
        for j in range(inst.k2 + 1):
            if i == 0 and j == 0:
                continue
            total += (-1) ** (i + j + 1) * comb(inst.k1, i) * comb(inst.k2, j) / (i * r1 + j * r2)
    return total


def _check(name: str, expected: float, observed: float, tolerance: float, passed: bool) -> dict:
    return {
        "check_name": name,
        "expected": expected,
        "observed": observed,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def _first_flip(dataset: Dataset, varied: str) -> int:
    for k, verdict in zip(dataset.column(varied), dataset.column("verdict")):
        if verdict != Faster.ADJACENCY.value:
            return int(k)
    return -1


def run_reproduction(out_dir: Path, config: InstanceConfig, render: bool = True) -> tuple[list[dict], list[Path]]:
    """Emit every figure/table dataset plus the numeric check summary.

    Returns the check list and the paths written.  Files are only written
    after their dataset is fully computed, so failures cannot leave
    partial output.
    """
    inst = config.instance
    written: list[Path] = []
    renders: list[tuple[str, Dataset, Path]] = []

    def emit(name: str, dataset: Dataset, plot_kind: str | None) -> Dataset:
        path = out_dir / f"{name}.csv"
        write_dataset(dataset, path)
        written.append(path)
        if render and plot_kind is not None:
            renders.append((plot_kind, dataset, path.with_suffix(".png")))
        return dataset

    checks: list[dict] = []

    # eigenstate-overlap sweeps
    emit("overlap_laplacian", build_overlap_dataset(config, WalkKind.LAPLACIAN, 201), "overlap")
    emit("overlap_adjacency", build_overlap_dataset(config, WalkKind.ADJACENCY, 201), "overlap")

    # evolutions at each critical rate, with peak checks
    for regime, name in (
        (SearchRegime.LAPLACIAN_A, "evolution_laplacian_a"),
        (SearchRegime.LAPLACIAN_B, "evolution_laplacian_b"),
        (SearchRegime.ADJACENCY, "evolution_adjacency"),
    ):
        if regime is SearchRegime.LAPLACIAN_A and inst.k1 == 0:
            continue
        if regime is SearchRegime.LAPLACIAN_B and inst.k2 == 0:
            continue
        emit(name, build_evolve_dataset(config, regime), "evolve")
        pred = predict(inst, regime)
        peak = find_peak(
            inst, regime.kind, pred.gamma_crit, initial_state(inst, regime.kind),
            regime.targets, 2.0 * pred.runtime,
        )
        checks.append(
            _check(f"peak_time_{regime.value}", pred.runtime, peak.t_peak, 0.02 * pred.runtime,
                   peak.found and abs(peak.t_peak - pred.runtime) <= 0.02 * pred.runtime)
        )
        p_floor = 0.98 if regime is SearchRegime.ADJACENCY else 0.95
        checks.append(
            _check(f"peak_probability_{regime.value}_min", p_floor, peak.p_peak, 0.0,
                   peak.p_peak >= p_floor)
        )
        if regime is SearchRegime.ADJACENCY:
            h = _h(inst, regime.kind, pred.gamma_crit)
            start = initial_state(inst, regime.kind)
            for label in ("a", "b"):
                expected_p = pred.final_state.amplitude(label) ** 2
                observed_p = success_probability(inst, h, start, peak.t_peak, (label,))
                checks.append(
                    _check(f"final_split_{label}", expected_p, observed_p, 0.03,
                           abs(observed_p - expected_p) <= 0.03)
                )

    # numeric critical-rate recovery
    for kind in (WalkKind.LAPLACIAN, WalkKind.ADJACENCY):
        for regime, gamma in critical_gamma_search(inst, kind).items():
            analytic = predict(inst, regime).gamma_crit
            checks.append(
                _check(f"critical_gamma_{regime.value}", analytic, gamma, 0.05 * analytic,
                       abs(gamma - analytic) <= 0.05 * analytic)
            )

    # runtime comparison sweeps (the second probes the opposite size ordering)
    sweep1 = inst if inst.k2 > 0 else replace(inst, k2=max(inst.k2, 1))
    ds1 = build_compare_dataset(sweep1, "k1", list(range(1, _sweep_cap(sweep1, "k1") + 1)))
    emit("runtimes_vary_k1", ds1, "compare")
    if inst.n1 < inst.n2:
        sweep2 = inst if inst.k1 > 0 else replace(inst, k1=1)
    else:
        sweep2 = replace(inst, n2=2 * inst.n1, k1=max(inst.k1, 1), k2=1)
    ds2 = build_compare_dataset(sweep2, "k2", list(range(1, _sweep_cap(sweep2, "k2") + 1)))
    emit("runtimes_vary_k2", ds2, "compare")
    for dataset, varied in ((ds1, "k1"), (ds2, "k2")):
        threshold = dataset.metadata.get("threshold")
        if threshold is None:
            continue
        expected_flip = math.ceil(threshold - 1e-12)
        observed_flip = _first_flip(dataset, varied)
        agrees = _verdicts_match_runtimes(dataset)
        checks.append(
            _check(f"crossover_{varied}", expected_flip, observed_flip, 0.0,
                   observed_flip == expected_flip and agrees)
        )

    # closed-form tables
    emit("predicted_values", build_predict_dataset(config), None)
    verdict_rows = []
    for dataset, varied in ((ds1, "k1"), (ds2, "k2")):
        inst_meta = dataset.metadata["instance"]
        for k, verdict in zip(dataset.column(varied), dataset.column("verdict")):
            values = dict(inst_meta)
            values[varied] = k
            verdict_rows.append(
                (values["n1"], values["n2"], values["k1"], values["k2"],
                 dataset.metadata.get("threshold"), verdict)
            )
    emit(
        "speed_verdicts",
        Dataset(
            columns=["n1", "n2", "k1", "k2", "threshold", "verdict"],
            rows=verdict_rows,
            metadata=standard_metadata("compare", inst, note="verdict grid over both sweeps"),
        ),
        None,
    )

    # repetition counts
    coupon = emit("repetitions", build_coupon_dataset(config), None)
    lap_value = expected_repetitions_laplacian(inst.k1, inst.k2)
    if (inst.k1, inst.k2) == (3, 5):
        checks.append(
            _check("repetitions_laplacian_exact", float(Fraction(203, 12)), float(lap_value), 0.0,
                   lap_value == Fraction(203, 12))
        )
    adj_value = dict(zip(coupon.column("method"), coupon.column("expected_runs")))["adjacency"]
    adj_oracle = _repetitions_inclusion_exclusion(inst)
    checks.append(
        _check("repetitions_adjacency_integral", adj_oracle, adj_value, 1e-3,
               abs(adj_value - adj_oracle) <= 1e-3)
    )
    if (inst.n1, inst.n2, inst.k1, inst.k2) == (512, 256, 3, 5):
        checks.append(
            _check("repetitions_adjacency_reference", 26.368, adj_value, 0.01,
                   abs(adj_value - 26.368) <= 0.01)
        )

    # uniform-start success under the adjacency walk
    pred_star = predict(inst, SearchRegime.ADJACENCY)
    peak_s = find_peak(
        inst, WalkKind.ADJACENCY, pred_star.gamma_crit, uniform_state(inst),
        ("a", "b"), 2.0 * pred_star.runtime,
    )
    bound = uniform_start_success_bound(inst)
    checks.append(
        _check("uniform_start_peak", bound, peak_s.p_peak, 0.03,
               abs(peak_s.p_peak - bound) <= 0.03)
    )

    # perturbative eigenpairs and complement stationarity
    worst_rel = max(
        verify_eigenpairs(inst, predict(inst, regime)).max_relative_residual
        for regime in _defined_regimes(inst)
    )
    checks.append(_check("eigenpair_relative_residual_max", 0.05, worst_rel, 0.0, worst_rel < 0.05))
    stat = complement_stationarity(inst)
    checks.append(
        _check("complement_relative_residual_max", 0.1, stat.relative_residual, 0.0,
               stat.relative_residual < 0.1)
    )

    # detuning dichotomy around the first available resonance
    regime = _default_regime(inst, WalkKind.LAPLACIAN)
    eps_small, eps_large = inst.n ** -2, 5.0 / inst.n
    detune_ds = emit(
        "detune_" + regime.value,
        build_detune_dataset(replace(config, gamma=None), regime, None),
        "detune",
    )
    by_eps = dict(zip(detune_ds.column("epsilon"), detune_ds.column("p_peak")))
    p0 = by_eps[0.0]
    checks.append(
        _check("detune_inside_tolerance", p0, by_eps[eps_small], 0.05,
               by_eps[eps_small] >= p0 - 0.05)
    )
    checks.append(
        _check("detune_outside_tolerance_max", 0.5 * p0, by_eps[eps_large], 0.0,
               by_eps[eps_large] < 0.5 * p0)
    )

    # summary last, after all datasets succeeded
    summary = {
        "instance": {"n1": inst.n1, "n2": inst.n2, "k1": inst.k1, "k2": inst.k2},
        "version": __version__,
        "checks": checks,
        "passed": sum(1 for c in checks if c["pass"]),
        "failed": sum(1 for c in checks if not c["pass"]),
    }
    summary_path = out_dir / "summary.json"
    atomic_write_text(summary_path, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(summary_path)

    for plot_kind, dataset, png_path in renders:
        from . import plots

        plots.RENDERERS[plot_kind](dataset, png_path)
        written.append(png_path)

    return checks, written


def _sweep_cap(inst: BipartiteInstance, varied: str) -> int:
    threshold = faster_walk(replace(inst, **{varied: 1})).threshold
    cap = inst.n1 if varied == "k1" else inst.n2
    if threshold is None or not math.isfinite(threshold):
        return min(40, cap)
    return min(max(int(math.ceil(2 * threshold)), 40), cap)


def _verdicts_match_runtimes(dataset: Dataset) -> bool:
    for row in dataset.rows:
        _, t_a, t_b, t_star, verdict = row
        t_best = min(t_a, t_b)
        if verdict == Faster.TIE.value:
            ok = abs(t_star - t_best) <= 1e-9 * max(t_star, t_best)
        elif verdict == Faster.ADJACENCY.value:
            ok = t_star < t_best
        elif verdict == Faster.LAPLACIAN.value:
            ok = t_best < t_star
        else:
            ok = False
        if not ok:
            return False
    return True


# --------------------------------------------------------------------------
# argument parsing and dispatch


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON or key=value config file")
    common.add_argument("--n1", type=int, help="left vertex-set size")
    common.add_argument("--n2", type=int, help="right vertex-set size")
    common.add_argument("--k1", type=int, help="marked vertices in the left set")
    common.add_argument("--k2", type=int, help="marked vertices in the right set")
    common.add_argument("--walk", choices=[k.value for k in WalkKind], help="walk generator")
    common.add_argument("--gamma", type=float, help="jumping-rate override")
    common.add_argument("--tmax", type=float, help="evolution time span")
    common.add_argument("--points", type=int, help="grid resolution")
    common.add_argument("--out", type=Path, help="output CSV path (stdout when omitted)")
    common.add_argument("--plot", action="store_true", help="render a PNG next to --out")

    parser = argparse.ArgumentParser(
        prog="qwsearch",
        description="Spatial search by continuous-time quantum walk on complete bipartite graphs.",
    )
    parser.add_argument("--version", action="version", version=f"qwsearch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("overlap", parents=[common], help="eigenstate overlaps along a rate grid")
    p_evolve = sub.add_parser("evolve", parents=[common], help="success probability over time")
    p_evolve.add_argument("--regime", choices=[r.value for r in SearchRegime])
    p_evolve.add_argument("--start", choices=["uniform", "balanced"],
                          help="override the natural starting state")

    p_compare = sub.add_parser("compare", parents=[common], help="runtimes across marked counts")
    p_compare.add_argument("--vary", choices=["k1", "k2"], help="which marked count varies")
    p_compare.add_argument("--k-min", type=int, default=1)
    p_compare.add_argument("--k-max", type=int)

    sub.add_parser("critical-gamma", parents=[common], help="numeric critical-rate search")

    p_detune = sub.add_parser("detune", parents=[common], help="peak probability vs rate offset")
    p_detune.add_argument("--regime", choices=[r.value for r in SearchRegime])
    p_detune.add_argument("--epsilons", help="comma-separated offsets (must include 0)")

    sub.add_parser("coupon", parents=[common], help="expected repetitions to collect all marks")
    sub.add_parser("predict", parents=[common], help="closed-form rates, runtimes, final states")

    p_repro = sub.add_parser("reproduce-all", parents=[common],
                             help="emit all datasets, figures and the check summary")
    p_repro.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    return parser


def _cmd_overlap(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    kind = config.walk or WalkKind.LAPLACIAN
    _emit(build_overlap_dataset(config, kind, config.points or 201), args, "overlap")
    return 0


def _cmd_evolve(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    regime = _resolve_regime(config, args)
    _emit(build_evolve_dataset(config, regime, args.start), args, "evolve")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    inst = config.instance
    varied = args.vary or ("k1" if inst.n1 >= inst.n2 else "k2")
    fixed_count = inst.k2 if varied == "k1" else inst.k1
    if fixed_count < 1:
        fixed_name = "k2" if varied == "k1" else "k1"
        raise ValueError(f"comparison varying {varied} needs {fixed_name} >= 1")
    k_max = args.k_max if args.k_max is not None else _sweep_cap(inst, varied)
    if args.k_min < 1 or k_max < args.k_min:
        raise ValueError(f"bad k range [{args.k_min}, {k_max}]")
    cap = inst.n1 if varied == "k1" else inst.n2
    if k_max > cap:
        raise ValueError(f"k range exceeds the vertex-set size {cap}")
    _emit(build_compare_dataset(inst, varied, list(range(args.k_min, k_max + 1))), args, "compare")
    return 0


def _cmd_critical_gamma(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    kinds = [config.walk] if config.walk else [WalkKind.LAPLACIAN, WalkKind.ADJACENCY]
    _emit(build_critical_gamma_dataset(config, kinds), args, None)
    return 0


def _cmd_detune(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    regime = _resolve_regime(config, args)
    epsilons = None
    if args.epsilons:
        try:
            epsilons = [float(x) for x in args.epsilons.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad --epsilons list: {args.epsilons!r}") from exc
    _emit(build_detune_dataset(config, regime, epsilons), args, "detune")
    return 0


def _cmd_coupon(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    _emit(build_coupon_dataset(config), args, None)
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    _emit(build_predict_dataset(config), args, None)
    return 0


def _cmd_reproduce_all(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    out_dir = args.out if args.out is not None else Path("qwsearch-report")
    checks, written = run_reproduction(Path(out_dir), config, render=not args.no_figures)
    for check in checks:
        status = "PASS" if check["pass"] else "FAIL"
        print(
            f"{status} {check['check_name']}: expected {check['expected']:.6g}, "
            f"observed {check['observed']:.6g} (tolerance {check['tolerance']:.3g})"
        )
    failed = [c for c in checks if not c["pass"]]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed; "
          f"{len(written)} files under {out_dir}")
    return 1 if failed else 0


_HANDLERS = {
    "overlap": _cmd_overlap,
    "evolve": _cmd_evolve,
    "compare": _cmd_compare,
    "critical-gamma": _cmd_critical_gamma,
    "detune": _cmd_detune,
    "coupon": _cmd_coupon,
    "predict": _cmd_predict,
    "reproduce-all": _cmd_reproduce_all,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, DegenerateRegimeError, SpectralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
