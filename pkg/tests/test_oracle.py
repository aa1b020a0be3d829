import math

import numpy as np
import pytest

from graphamp import (
    ChainComplex,
    LadderSpec,
    QuadratureSpec,
    RankLimitError,
    RowSpaceError,
    build_J,
    build_K,
    build_ladder,
    direct_phi,
    exhaustive_scc_check,
    partition_function,
    phi_mixed,
    phi_spatial,
    phi_temporal,
    quadrature_log_z,
)
from graphamp.oracle import _log_grid_sum
from conftest import two_vertex_graph


def two_vertex_pair(e=1.0):
    cc = ChainComplex.from_graph(two_vertex_graph())
    return build_K(cc), build_J(cc, [e])


def ladder_pair(n, e):
    spec = LadderSpec(n)
    cc = ChainComplex.from_graph(build_ladder(spec))
    return build_K(cc), build_J(cc, e)


def test_quadrature_two_vertex_pinned():
    K, J = two_vertex_pair(1.0)
    result = quadrature_log_z(K, J)
    assert abs(result.log_z - (0.5 * math.log(math.pi) + 0.5)) <= 1e-8
    assert result.rank == 1


def test_quadrature_sourceless_matches_closed_form():
    K, _ = ladder_pair(4, np.zeros(4))
    amp = partition_function(K, np.zeros(4))
    for mode in ("gauss-hermite", "trapezoid"):
        result = quadrature_log_z(K, np.zeros(4), QuadratureSpec(mode=mode))
        assert abs(result.log_z - amp.log_z) <= 1e-6 * max(1.0, abs(amp.log_z))


def test_quadrature_ladder4_both_modes():
    K, J = ladder_pair(4, np.ones(4))
    amp = partition_function(K, J)
    for mode in ("gauss-hermite", "trapezoid"):
        result = quadrature_log_z(K, J, QuadratureSpec(mode=mode))
        assert abs(result.log_z - amp.log_z) <= 1e-6 * max(1.0, abs(amp.log_z))
        assert result.estimated_error <= 1e-6


def test_quadrature_large_source_stays_finite():
    # exponent ~ 500: the accumulation must survive in log space
    K, J = ladder_pair(4, np.array([31.0, -17.0, 23.0, -29.0]))
    amp = partition_function(K, J)
    result = quadrature_log_z(K, J)
    assert abs(result.log_z - amp.log_z) <= 1e-6 * max(1.0, abs(amp.log_z))


def test_quadrature_rank_guard():
    K, J = ladder_pair(6, np.ones(7))
    with pytest.raises(RankLimitError, match="rank 5"):
        quadrature_log_z(K, J)


def test_quadrature_rejects_gauge_component():
    K, _ = two_vertex_pair()
    with pytest.raises(RowSpaceError):
        quadrature_log_z(K, np.array([1.0, 0.0]))


def test_quadrature_deterministic():
    K, J = ladder_pair(4, np.array([2.0, -3.0, 5.0, 1.0]))
    a = quadrature_log_z(K, J)
    b = quadrature_log_z(K, J)
    assert a.log_z == b.log_z


def test_grid_sum_accumulation_order_stable():
    rng = np.random.default_rng(8)
    axes = [rng.standard_normal(33), rng.standard_normal(17), rng.standard_normal(9)]
    reference = _log_grid_sum(axes)
    for order in [(2, 1, 0), (1, 0, 2), (2, 0, 1)]:
        permuted = _log_grid_sum([axes[i] for i in order])
        assert abs(permuted - reference) <= 1e-12 * max(1.0, abs(reference))


def test_direct_phi_ladder4():
    K, J = ladder_pair(4, np.ones(4))
    assert math.isclose(direct_phi(K, J), 2.0, rel_tol=1e-12)


def test_direct_phi_zero():
    K, J = ladder_pair(4, np.zeros(4))
    assert direct_phi(K, J) == 0.0


def test_direct_phi_hbar_beta():
    K, J = ladder_pair(4, np.ones(4))
    assert math.isclose(direct_phi(K, J, hbar_beta=4.0), 0.5, rel_tol=1e-12)


@pytest.mark.parametrize("n", range(2, 42, 2))
def test_direct_phi_matches_closed_forms(n):
    spec = LadderSpec(n)
    rng = np.random.default_rng(n)
    for _ in range(5):
        e = rng.integers(-10, 11, size=spec.n_links).astype(float)
        K, J = ladder_pair(n, e)
        closed = (phi_spatial(spec, e) + phi_temporal(spec, e) + phi_mixed(spec, e)) / 2.0
        direct = direct_phi(K, J)
        assert abs(closed - direct) <= 1e-9 * max(1.0, abs(direct))


def test_scc_sweep_small():
    report = exhaustive_scc_check(max_vertices=4, n_graphs=40, seed=2)
    assert report.graphs_checked == 40
    assert report.all_pass
    assert report.failures == ()
    assert report.worst_scc_residual <= 1e-10


def test_scc_sweep_includes_degenerate_cases():
    # the first three records are the fixed single-vertex, single-link, and
    # path graphs; all must pass, including rank = |V| - 1 for the lone vertex
    report = exhaustive_scc_check(max_vertices=3, n_graphs=10, seed=0)
    assert report.all_pass


def test_scc_sweep_guard():
    with pytest.raises(ValueError, match="capped"):
        exhaustive_scc_check(max_vertices=9)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(mode="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(axis_bound=0)
    with pytest.raises(ValueError):
        QuadratureSpec(points_per_axis=1)
