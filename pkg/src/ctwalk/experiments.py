"""Sweep orchestration: cases, side-chain deltas, power-law fit, studies.

A case is one (N, S, offset, walk) pipeline run: build the graph, evolve
from both ends, deconvolve, find the horizon, take the mean. Sweeps over
many cases are cached on disk keyed by (N, S, offset, walk, dt) so large
tables rerun incrementally, and independent cases can run in a process
pool.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import classical, coherence, quantum
from .errors import NoZeroCrossingError, ValidationError
from .first_passage import (
    FirstPassageResult,
    cumulative_mass,
    deconvolve,
    detect_tau0,
    extract_first_passage,
    mean_fpt,
    reconstruct,
)
from .graphs import Graph, SideChainConfig, bipartite_coloring, build_side_chain_graph
from .grid import TimeGrid

MAX_HORIZON_DOUBLINGS = 8


@dataclass(frozen=True)
class SweepRecord:
    """Scalar outcome of one pipeline case."""

    N: int
    S: int
    offset: int
    walk: str
    dt: float
    eps: float
    tau: float
    tau0: float
    norm: float
    reconstruction_error: float


@dataclass(frozen=True)
class Deltas:
    """Mean first-passage shifts caused by attaching one and two side vertices."""

    d1: float
    d2: float
    d2_prime: float
    d1_ratio: float
    d2_ratio: float


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of ratio ~ prefactor * N**exponent on log-log axes."""

    prefactor: float
    exponent: float
    residual: float


def _model_graph(n: int, s: int, offset: int) -> Graph:
    return build_side_chain_graph(SideChainConfig(N=n, S=s, offset=offset))


def _quantum_pair(g: Graph, n: int, grid: TimeGrid) -> tuple[np.ndarray, np.ndarray]:
    h = quantum.build_hamiltonian(g)
    p_1n = quantum.transition_probabilities(h, 1, (n,), grid)[0]
    p_nn = quantum.transition_probabilities(h, n, (n,), grid)[0]
    return p_1n, p_nn


def _classical_pair(g: Graph, n: int, grid: TimeGrid) -> tuple[np.ndarray, np.ndarray]:
    rm = classical.build_rate_matrix(g)
    p_1n = classical.vertex_occupations(rm, 1, (n,), grid)[0]
    p_nn = classical.vertex_occupations(rm, n, (n,), grid)[0]
    return p_1n, p_nn


def run_pipeline(
    g: Graph, target: int, walk: str, dt: float, eps: float
) -> tuple[FirstPassageResult, TimeGrid]:
    """Evolve, deconvolve and integrate one case; grid sizing is automatic.

    Classical horizons come from the killed-walk survival function (the
    F-mass crossing is used when it happens on the grid); quantum horizons
    start near the ballistic crossing time and double until the zero of F
    is on the grid.
    """
    if walk == "classical":
        # epsilon horizon from the exact killed-walk survival; the quadrature
        # mass of the discrete F saturates ~1e-6 short of one at dt = 0.01,
        # so its own epsilon crossing can sit far beyond the true one
        t_eps = classical.survival_horizon(g, target, eps=eps)
        grid = TimeGrid.from_span(t_eps * 1.05 + 4.0, dt)
        p_1n, p_nn = _classical_pair(g, target, grid)
        F = deconvolve(p_1n, p_nn, grid)
        if 1.0 - cumulative_mass(F, grid)[-1] < eps:
            tau0 = detect_tau0(F, grid, mode="classical", eps=eps)
        else:
            tau0 = t_eps
        partial = mean_fpt(F, grid, tau0)
        residual = float(np.max(np.abs(reconstruct(F, p_nn, grid) - p_1n)))
        return (
            FirstPassageResult(
                grid=grid,
                F=F,
                tau0=partial.tau0,
                tau=partial.tau,
                norm=partial.norm,
                reconstruction_error=residual,
            ),
            grid,
        )
    if walk == "quantum":
        t_end = max(12.0, 0.7 * target + 6.0)
        for _ in range(MAX_HORIZON_DOUBLINGS):
            grid = TimeGrid.from_span(t_end, dt)
            p_1n, p_nn = _quantum_pair(g, target, grid)
            try:
                return (
                    extract_first_passage(p_1n, p_nn, grid, mode="quantum", eps=eps),
                    grid,
                )
            except NoZeroCrossingError:
                t_end *= 2.0
        raise NoZeroCrossingError(
            f"no zero of F within {t_end} time units; giving up"
        )
    raise ValidationError(f"walk must be 'classical' or 'quantum', got {walk!r}")


def run_case(
    n: int, s: int, offset: int, walk: str, dt: float = 0.01, eps: float = 1e-6
) -> SweepRecord:
    """Full pipeline for one (N, S, offset, walk) case."""
    g = _model_graph(n, s, offset)
    result, _ = run_pipeline(g, n, walk, dt, eps)
    return SweepRecord(
        N=n,
        S=s,
        offset=offset,
        walk=walk,
        dt=dt,
        eps=eps,
        tau=result.tau,
        tau0=result.tau0,
        norm=result.norm,
        reconstruction_error=result.reconstruction_error,
    )


def side_chain_deltas(records: dict[int, SweepRecord]) -> Deltas:
    """Deltas from the S = 0, 1, 2 records of one (N, offset, walk) family."""
    try:
        tau = records[0].tau
        tau1 = records[1].tau
        tau2 = records[2].tau
    except KeyError as exc:
        raise ValidationError(f"missing case for S={exc.args[0]}") from exc
    d1 = tau1 - tau
    d2 = tau2 - tau
    return Deltas(
        d1=d1,
        d2=d2,
        d2_prime=tau2 - tau1,
        d1_ratio=d1 / tau,
        d2_ratio=d2 / tau,
    )


def fit_power_law(ns: np.ndarray, ratios: np.ndarray) -> PowerLawFit:
    """Fit log|ratio| against log N; the common sign moves into the prefactor."""
    ns = np.asarray(ns, dtype=float)
    ratios = np.asarray(ratios, dtype=float)
    if len(ns) != len(ratios) or len(ns) < 2:
        raise ValidationError("need at least 2 (N, ratio) points of equal length")
    if np.any(ratios == 0.0):
        raise ValidationError("zero ratio cannot be placed on log axes")
    signs = np.sign(ratios)
    if not np.all(signs == signs[0]):
        raise ValidationError("ratios change sign; a single power law cannot fit them")
    lx = np.log(ns)
    ly = np.log(np.abs(ratios))
    design = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ np.array([slope, intercept])
    rms = float(np.sqrt(np.mean(resid**2)))
    return PowerLawFit(
        prefactor=float(signs[0] * math.exp(intercept)),
        exponent=float(slope),
        residual=rms,
    )


# ---------------------------------------------------------------------------
# Disk cache and sweeps
# ---------------------------------------------------------------------------

def _cache_name(n: int, s: int, offset: int, walk: str, dt: float) -> str:
    return f"N{n}_S{s}_off{offset}_{walk}_dt{dt:.6g}.json"


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_run_case(
    n: int,
    s: int,
    offset: int,
    walk: str,
    dt: float = 0.01,
    eps: float = 1e-6,
    cache_dir: str | Path | None = None,
) -> SweepRecord:
    """run_case with an optional append-only JSON cache."""
    if cache_dir is None:
        return run_case(n, s, offset, walk, dt, eps)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / _cache_name(n, s, offset, walk, dt)
    if path.exists():
        data = json.loads(path.read_text())
        if data.get("eps") == eps:
            return SweepRecord(**data)
    record = run_case(n, s, offset, walk, dt, eps)
    _atomic_write_text(path, json.dumps(asdict(record)))
    return record


def _case_worker(args: tuple) -> SweepRecord:
    return cached_run_case(*args)


def sweep(
    ns: list[int],
    s_values: list[int],
    offset: int,
    walk: str,
    dt: float = 0.01,
    eps: float = 1e-6,
    cache_dir: str | Path | None = None,
    jobs: int = 1,
) -> list[SweepRecord]:
    """All (N, S) cases at a fixed offset, optionally in parallel.

    The output order is the deterministic product order of ns and s_values,
    independent of scheduling.
    """
    cases = [(n, s, offset, walk, dt, eps, cache_dir) for n in ns for s in s_values]
    if jobs <= 1:
        return [_case_worker(c) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_case_worker, cases))


def delta_table(records: list[SweepRecord]) -> dict[int, Deltas]:
    """Group a sweep by N and reduce each S-triple to its deltas."""
    by_n: dict[int, dict[int, SweepRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.N, {})[rec.S] = rec
    return {n: side_chain_deltas(group) for n, group in sorted(by_n.items())}


def speedup_fit(records: list[SweepRecord]) -> PowerLawFit:
    """Power-law fit of the one-vertex speed-up ratio d1/tau against N.

    Needs only the S = 0 and S = 1 cases of each N.
    """
    by_n: dict[int, dict[int, SweepRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.N, {})[rec.S] = rec
    ns = []
    ratios = []
    for n in sorted(by_n):
        group = by_n[n]
        if 0 in group and 1 in group:
            ns.append(n)
            ratios.append((group[1].tau - group[0].tau) / group[0].tau)
    if len(ns) < 2:
        raise ValidationError("need S=0 and S=1 records for at least two N values")
    return fit_power_law(np.array(ns), np.array(ratios))


def offset_study(
    n: int,
    offsets: list[int],
    walk: str,
    dt: float = 0.01,
    eps: float = 1e-6,
    cache_dir: str | Path | None = None,
) -> dict[int, Deltas]:
    """Deltas as the side-chain mount slides away from the center."""
    out: dict[int, Deltas] = {}
    for offset in offsets:
        records = {
            s: cached_run_case(n, s, offset, walk, dt, eps, cache_dir)
            for s in (0, 1, 2)
        }
        out[offset] = side_chain_deltas(records)
    return out


# ---------------------------------------------------------------------------
# Entropy study
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EntropyCase:
    """Entropy diagnostics of one quantum case on its own horizon."""

    S: int
    grid: TimeGrid
    entropy: np.ndarray
    tau0: float
    average: float


@dataclass(frozen=True, eq=False)
class EntropyStudy:
    cases: dict[int, EntropyCase]

    @property
    def average_gap_2_0(self) -> float:
        """Average-entropy difference between the S = 2 and S = 0 cases."""
        return self.cases[2].average - self.cases[0].average


def entropy_study(
    n: int,
    offset: int = 0,
    dt: float = 0.01,
    eps: float = 1e-6,
    s_values: tuple[int, ...] = (0, 1, 2),
) -> EntropyStudy:
    """Entropy series for each S, each on the horizon of its own quantum F."""
    cases: dict[int, EntropyCase] = {}
    for s in s_values:
        g = _model_graph(n, s, offset)
        result, _ = run_pipeline(g, n, "quantum", dt, eps)
        grid = TimeGrid.from_span(result.tau0, dt)
        coloring = bipartite_coloring(g)
        h = quantum.build_hamiltonian(g)
        amp = quantum.evolve_schrodinger(h, 1, grid)
        series = coherence.entropy_series(amp, coloring)
        avg = coherence.average_entropy(series, grid, result.tau0)
        cases[s] = EntropyCase(
            S=s, grid=grid, entropy=series, tau0=result.tau0, average=avg
        )
    return EntropyStudy(cases=cases)
