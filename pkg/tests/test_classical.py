import numpy as np
import pytest

from ctwalk import (
    SideChainConfig,
    TimeGrid,
    ValidationError,
    build_rate_matrix,
    build_side_chain_graph,
    evolve_master,
    mfpt_linear_solve,
    path_graph,
    stationary_distribution,
    survival_horizon,
    vertex_occupations,
)


def chain(n, s=0, offset=0):
    return build_side_chain_graph(SideChainConfig(N=n, S=s, offset=offset))


def rk4_linear(matrix, y0, t_end, h):
    """Fixed-step RK4 for y' = matrix @ y; independent of the spectral route."""
    steps = int(round(t_end / h))
    y = y0.astype(float).copy()
    out = [y.copy()]
    for _ in range(steps):
        k1 = matrix @ y
        k2 = matrix @ (y + 0.5 * h * k1)
        k3 = matrix @ (y + 0.5 * h * k2)
        k4 = matrix @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(y.copy())
    return np.array(out)


# ---------------------------------------------------------------------------
# rate matrix
# ---------------------------------------------------------------------------

def test_two_path_rate_matrix():
    k = build_rate_matrix(path_graph(2)).matrix
    assert np.array_equal(k, np.array([[-1.0, 1.0], [1.0, -1.0]]))


def test_three_path_rate_matrix_columns():
    k = build_rate_matrix(path_graph(3)).matrix
    assert np.array_equal(k[:, 0], [-1.0, 1.0, 0.0])
    assert np.array_equal(k[:, 1], [0.5, -1.0, 0.5])
    assert np.array_equal(k[:, 2], [0.0, 1.0, -1.0])


@pytest.mark.parametrize("n,s", [(9, 0), (9, 2), (43, 1), (5, 3)])
def test_columns_conserve_probability(n, s):
    k = build_rate_matrix(chain(n, s)).matrix
    # degree-3 columns carry one rounding ulp from 1/3; everything else is exact
    assert np.abs(k.sum(axis=0)).max() <= 2.0**-52
    assert np.all(np.diag(k) == -1.0)
    off = k - np.diag(np.diag(k))
    assert np.all(off >= 0.0)


def test_disconnected_graph_rejected():
    from ctwalk.graphs import Graph

    g = Graph(n=3, edges=frozenset({(1, 2)}), labels=("chain",) * 3)
    with pytest.raises(ValidationError):
        build_rate_matrix(g)


# ---------------------------------------------------------------------------
# master equation
# ---------------------------------------------------------------------------

def test_two_path_relaxation():
    rm = build_rate_matrix(path_graph(2))
    grid = TimeGrid.from_span(5.0, 0.01)
    series = evolve_master(rm, 1, grid)
    expected = 0.5 * (1.0 + np.exp(-2.0 * grid.times))
    assert np.max(np.abs(series.vertex(1) - expected)) < 1e-12


def test_initial_condition_is_delta():
    rm = build_rate_matrix(chain(9, 2))
    series = evolve_master(rm, 4, TimeGrid.from_span(1.0, 0.1))
    delta = np.zeros(rm.n)
    delta[3] = 1.0
    assert np.max(np.abs(series.values[0] - delta)) < 1e-12


def test_spectral_matches_rk4_on_nine_path():
    rm = build_rate_matrix(path_graph(9))
    grid = TimeGrid.from_span(20.0, 0.01)
    series = evolve_master(rm, 1, grid)
    y0 = np.zeros(9)
    y0[0] = 1.0
    oracle = rk4_linear(rm.matrix, y0, 20.0, 0.01)
    assert np.max(np.abs(series.values - oracle)) < 1e-8


def test_probability_conservation_and_positivity():
    rm = build_rate_matrix(chain(9, 2, offset=1))
    series = evolve_master(rm, 1, TimeGrid.from_span(50.0, 0.05))
    sums = series.values.sum(axis=1)
    assert np.max(np.abs(sums - 1.0)) < 1e-9
    assert series.values.min() > -1e-12


def test_detailed_balance():
    rm = build_rate_matrix(chain(9, 2, offset=1))
    grid = TimeGrid.from_span(10.0, 0.1)
    deg = rm.degrees
    for a, b in [(1, 9), (2, 5), (5, 11)]:
        p_ab = vertex_occupations(rm, a, (b,), grid)[0]
        p_ba = vertex_occupations(rm, b, (a,), grid)[0]
        assert np.max(np.abs(deg[a - 1] * p_ab - deg[b - 1] * p_ba)) < 1e-9


def test_vertex_occupations_matches_full_series():
    rm = build_rate_matrix(chain(9, 1))
    grid = TimeGrid.from_span(8.0, 0.02)
    series = evolve_master(rm, 1, grid)
    picked = vertex_occupations(rm, 1, (9, 5), grid)
    assert np.max(np.abs(picked[0] - series.vertex(9))) < 1e-12
    assert np.max(np.abs(picked[1] - series.vertex(5))) < 1e-12


# ---------------------------------------------------------------------------
# stationary state
# ---------------------------------------------------------------------------

def test_stationary_two_and_three_path():
    assert np.allclose(
        stationary_distribution(build_rate_matrix(path_graph(2))), [0.5, 0.5]
    )
    assert np.allclose(
        stationary_distribution(build_rate_matrix(path_graph(3))), [0.25, 0.5, 0.25]
    )


def test_stationary_center_weight_with_side_vertex():
    pi = stationary_distribution(build_rate_matrix(chain(9, 1)))
    assert pi[4] == pytest.approx(3.0 / 18.0, abs=1e-15)


def test_stationary_is_null_vector():
    rm = build_rate_matrix(chain(9, 2))
    pi = stationary_distribution(rm)
    assert np.max(np.abs(rm.matrix @ pi)) < 1e-14


def test_long_time_limit_reaches_stationary():
    n = 5
    rm = build_rate_matrix(path_graph(n))
    t_end = 50.0 * n * n
    series = evolve_master(rm, 1, TimeGrid(dt=t_end / 4, n=5))
    assert np.max(np.abs(series.values[-1] - stationary_distribution(rm))) < 1e-6


# ---------------------------------------------------------------------------
# linear-solve mean first-passage time
# ---------------------------------------------------------------------------

def test_mfpt_two_path():
    assert mfpt_linear_solve(path_graph(2), 1, 2) == pytest.approx(1.0, abs=1e-12)


def test_mfpt_three_path():
    # restricted system by hand: -m1 + m2 = -1, m1/2 - m2 = -1  =>  m1 = 4
    assert mfpt_linear_solve(path_graph(3), 1, 3) == pytest.approx(4.0, abs=1e-12)


def test_mfpt_end_to_end_grows_quadratically():
    # for a bare chain the end-to-end value is (N-1)^2
    for n in (2, 5, 9, 20):
        assert mfpt_linear_solve(path_graph(n), 1, n) == pytest.approx(
            (n - 1) ** 2, rel=1e-12
        )


def test_survival_horizon_brackets_eps():
    g = chain(9)
    t_eps = survival_horizon(g, 9, eps=1e-6)
    rm = build_rate_matrix(g)
    # survival at t_eps computed from the evolved series with target killed is
    # not directly available; check monotone bracketing via the mfpt scale
    assert t_eps > mfpt_linear_solve(g, 1, 9)
    tighter = survival_horizon(g, 9, eps=1e-3)
    assert tighter < t_eps
