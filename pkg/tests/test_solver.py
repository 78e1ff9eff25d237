import numpy as np
import pytest
import scipy.sparse as sp

from momentpde.models import Linear
from momentpde.relaxation import Block, ConicProblem, build_problem
from momentpde.solver import SolverSettings, project_psd, solve


def symmetric_variable_block(n, num_vars, var_of_entry):
    """Block whose matrix entries are single variables (upper triangle given)."""
    rows, cols, data = [], [], []
    for (r, c), var in var_of_entry.items():
        rows.append(r * n + c)
        cols.append(var)
        data.append(1.0)
        if r != c:
            rows.append(c * n + r)
            cols.append(var)
            data.append(1.0)
    coeffs = sp.coo_matrix((data, (rows, cols)), shape=(n * n, num_vars)).tocsr()
    return Block(name="X", size=n, coeffs=coeffs, const=np.zeros(n * n))


def min_trace_completion_problem():
    # min tr X, X PSD 2x2, X11 = 1  ->  X = diag(1, 0), objective 1
    return ConicProblem(
        num_vars=3,
        blocks=[symmetric_variable_block(2, 3, {(0, 0): 0, (0, 1): 1, (1, 1): 2})],
        eq_matrix=sp.csr_matrix(np.array([[1.0, 0.0, 0.0]])),
        eq_rhs=np.array([1.0]),
        objective=np.array([1.0, 0.0, 1.0]),
    )


def rank_one_forcing_problem():
    # min tr X, X PSD 2x2, X12 = 1, X11 = X22  ->  all-ones matrix, objective 2
    return ConicProblem(
        num_vars=3,
        blocks=[symmetric_variable_block(2, 3, {(0, 0): 0, (0, 1): 1, (1, 1): 2})],
        eq_matrix=sp.csr_matrix(np.array([[0.0, 1.0, 0.0], [1.0, 0.0, -1.0]])),
        eq_rhs=np.array([1.0, 0.0]),
        objective=np.array([1.0, 0.0, 1.0]),
    )


def test_min_trace_completion():
    x, report = solve(min_trace_completion_problem())
    assert report.status == "optimal"
    assert np.abs(x - np.array([1.0, 0.0, 0.0])).max() <= 1e-6
    assert report.primal_objective == pytest.approx(1.0, abs=1e-6)


def test_rank_one_forcing():
    x, report = solve(rank_one_forcing_problem())
    assert report.status == "optimal"
    assert np.abs(x - np.ones(3)).max() <= 1e-6
    assert report.primal_objective == pytest.approx(2.0, abs=1e-6)


def test_psd_projection_idempotent_and_metric():
    rng = np.random.default_rng(3)
    for _ in range(25):
        mat = rng.normal(size=(5, 5))
        mat = 0.5 * (mat + mat.T)
        proj = project_psd(mat)
        assert np.linalg.eigvalsh(proj).min() >= -1e-12
        assert np.abs(project_psd(proj) - proj).max() <= 1e-12
        # metric projection: no PSD point is closer to mat than proj
        for _ in range(5):
            g = rng.normal(size=(5, 5))
            psd_point = g @ g.T
            assert np.linalg.norm(mat - proj) <= np.linalg.norm(mat - psd_point) + 1e-12


def test_combined_residual_monotone_after_burn_in():
    for problem in (min_trace_completion_problem(), rank_one_forcing_problem()):
        _, report = solve(problem, SolverSettings(track_residuals=True))
        h = np.array(report.residual_history)
        assert len(h) > 51
        increases = h[51:] - h[50:-1]
        assert increases.max() <= 1e-12


def test_solver_is_deterministic():
    xa, ra = solve(rank_one_forcing_problem())
    xb, rb = solve(rank_one_forcing_problem())
    assert np.array_equal(xa, xb)
    assert ra.iterations == rb.iterations


def test_settings_validation():
    with pytest.raises(ValueError):
        SolverSettings(abs_tol=0)
    with pytest.raises(ValueError):
        SolverSettings(penalty=-1)
    with pytest.raises(ValueError):
        SolverSettings(over_relaxation=2.5)


def test_infeasible_problem_is_not_reported_optimal():
    # X11 = -1 contradicts PSD; the solver must not claim optimality
    problem = ConicProblem(
        num_vars=3,
        blocks=[symmetric_variable_block(2, 3, {(0, 0): 0, (0, 1): 1, (1, 1): 2})],
        eq_matrix=sp.csr_matrix(np.array([[1.0, 0.0, 0.0]])),
        eq_rhs=np.array([-1.0]),
        objective=np.array([1.0, 0.0, 1.0]),
    )
    _, report = solve(problem, SolverSettings(max_iters=2000))
    assert report.status != "optimal"
    assert report.min_block_eigenvalue < -1e-3


def test_linear_heat_222_feasibility(u0, deg222):
    problem = build_problem(Linear(), deg222, u0)
    x, report = solve(problem)
    assert report.status == "optimal"
    assert report.max_equality_residual <= 1e-6
    assert report.min_block_eigenvalue >= -1e-6
