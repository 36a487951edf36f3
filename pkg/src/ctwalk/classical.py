"""Continuous-time classical random walk: master equation and exact solvers.

The generator has unit total exit rate per vertex: K[a,b] = J[a,b]/deg(b)
for a != b and -1 on the diagonal, so every column sums to zero and the
waiting time at any vertex is exponential with mean one.

Propagation is spectral (no step-size error): K is similar to the symmetric
matrix D^{-1/2} J D^{-1/2} - I via the degree diagonal D, which is
diagonalized once per graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .graphs import Graph
from .grid import TimeGrid


@dataclass(frozen=True, eq=False)
class RateMatrix:
    """Generator of the walk plus the adjacency and degree data it came from."""

    matrix: np.ndarray
    adjacency: np.ndarray
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _spectral(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigendecomposition of D^{-1/2} J D^{-1/2} - I."""
        dh = np.sqrt(self.degrees)
        sym = self.adjacency / np.outer(dh, dh) - np.eye(self.n)
        lam, u = np.linalg.eigh(sym)
        return lam, u


@dataclass(frozen=True, eq=False)
class ProbabilitySeries:
    """Per-vertex occupation probabilities over a uniform grid; shape (n_times, n)."""

    grid: TimeGrid
    values: np.ndarray

    def vertex(self, v: int) -> np.ndarray:
        return self.values[:, v - 1]


def build_rate_matrix(g: Graph) -> RateMatrix:
    """K = J D^{-1} - I for a connected graph."""
    if not g.is_connected():
        raise ValidationError("rate matrix requires a connected graph")
    j = g.adjacency()
    deg = j.sum(axis=0)
    k = j / deg[None, :]
    np.fill_diagonal(k, -1.0)
    return RateMatrix(matrix=k, adjacency=j, degrees=deg)


def _check_start(rm: RateMatrix, start: int) -> None:
    if not (1 <= start <= rm.n):
        raise ValidationError(f"start vertex {start} out of range 1..{rm.n}")


def evolve_master(rm: RateMatrix, start: int, grid: TimeGrid) -> ProbabilitySeries:
    """p(t) = exp(K t) delta_start on every grid point.

    Returns the full (n_times, n) array; for long horizons where only a few
    vertices matter use vertex_occupations instead.
    """
    _check_start(rm, start)
    lam, u = rm._spectral
    dh = np.sqrt(rm.degrees)
    w = u[start - 1, :] / dh[start - 1]
    phases = np.exp(np.outer(lam, grid.times))          # (n, n_times)
    values = (u * dh[:, None]) @ (phases * w[:, None])  # (n, n_times)
    return ProbabilitySeries(grid=grid, values=values.T)


def vertex_occupations(
    rm: RateMatrix, start: int, targets: tuple[int, ...], grid: TimeGrid
) -> np.ndarray:
    """Occupation probabilities of selected vertices only; shape (len(targets), n_times).

    Memory stays O(n_times) per requested vertex, which matters for the long
    classical horizons (millions of grid points).
    """
    _check_start(rm, start)
    for v in targets:
        if not (1 <= v <= rm.n):
            raise ValidationError(f"target vertex {v} out of range 1..{rm.n}")
    lam, u = rm._spectral
    dh = np.sqrt(rm.degrees)
    w = u[start - 1, :] / dh[start - 1]
    t = grid.times
    out = np.zeros((len(targets), grid.n))
    for j in range(rm.n):
        ph = np.exp(lam[j] * t)
        for i, v in enumerate(targets):
            out[i] += (dh[v - 1] * u[v - 1, j] * w[j]) * ph
    return out


def stationary_distribution(rm: RateMatrix) -> np.ndarray:
    """Null vector of K normalized to total probability one: deg(a) / sum deg."""
    return rm.degrees / rm.degrees.sum()


def mfpt_linear_solve(g: Graph, start: int, target: int) -> float:
    """Mean first-passage time from the adjoint linear system, no time grid.

    Solves sum_b K[b,a] m[b] = -1 for all a != target with m[target] = 0 and
    returns m[start]. Exact up to the linear solver, so it serves as the
    independent cross-check for the convolution-based estimate.
    """
    g.check_vertex(start)
    g.check_vertex(target)
    if start == target:
        return 0.0
    rm = build_rate_matrix(g)
    keep = [i for i in range(rm.n) if i != target - 1]
    a = rm.matrix[np.ix_(keep, keep)].T
    m = np.linalg.solve(a, -np.ones(len(keep)))
    return float(m[keep.index(start - 1)])


def survival_horizon(g: Graph, target: int, eps: float = 1e-6, start: int = 1) -> float:
    """Time at which the not-yet-arrived probability mass drops below eps.

    Uses the spectral form of the generator with the target row and column
    removed (the killed walk), then bisects the survival function. Sizing the
    simulation grid from this avoids repeated horizon doubling.
    """
    g.check_vertex(target)
    g.check_vertex(start)
    if start == target:
        raise ValidationError("start and target must differ")
    j = g.adjacency()
    deg = j.sum(axis=0)
    keep = [i for i in range(g.n) if i != target - 1]
    dh = np.sqrt(deg[keep])
    sym = j[np.ix_(keep, keep)] / np.outer(dh, dh) - np.eye(len(keep))
    lam, u = np.linalg.eigh(sym)
    i_start = keep.index(start - 1)
    coef = (dh[:, None] * u).sum(axis=0) * (u[i_start, :] / dh[i_start])

    def surv(t: float) -> float:
        return float(coef @ np.exp(lam * t))

    hi = 1.0
    while surv(hi) > eps:
        hi *= 2.0
        if hi > 1e12:
            raise ValidationError("survival mass does not decay; graph disconnected?")
    lo = hi / 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if surv(mid) > eps:
            lo = mid
        else:
            hi = mid
    return hi
