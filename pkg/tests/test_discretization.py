import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from mfsor.discretization import (
    ProblemSpec,
    assemble,
    harmonic_mean,
    interior_mask,
    l1_error,
    nodal_field,
    residual_norm,
)
from mfsor.grid import StructuredGrid, build_uniform_grid


def _dense(stencil):
    """Dense interior operator and load built from the stencil arrays."""
    idx = np.flatnonzero(interior_mask(stencil.grid))
    pos = {p: r for r, p in enumerate(idx)}
    a = np.zeros((idx.size, idx.size))
    for r, p in enumerate(idx):
        a[r, r] = stencil.center[p]
        for s, off in enumerate(stencil.offsets):
            if p + off in pos:
                a[r, pos[p + off]] = -stencil.coef[s, p]
    return idx, a, stencil.rhs[idx]


def test_uniform_1d_coefficients():
    g = build_uniform_grid(1, [6], [1.0])
    s = assemble(ProblemSpec(1), g)
    h = 0.2
    idx = np.flatnonzero(interior_mask(g))
    np.testing.assert_allclose(s.links[:, idx], 1 / h ** 2, rtol=1e-13)
    np.testing.assert_allclose(s.center[idx], 2 / h ** 2, rtol=1e-13)


def test_harmonic_mean_two_four():
    assert harmonic_mean(2.0, 4.0) == pytest.approx(8 / 3, rel=1e-15)


def test_uniform_2d_coefficients():
    g = build_uniform_grid(2, [7, 7], [1.0, 1.0])
    s = assemble(ProblemSpec(2), g)
    idx = np.flatnonzero(interior_mask(g))
    np.testing.assert_allclose(s.links[:, idx], 36.0, rtol=1e-13)
    np.testing.assert_allclose(s.center[idx], 144.0, rtol=1e-13)


def test_variable_alpha_uses_harmonic_faces():
    g = StructuredGrid([np.array([0.0, 0.2, 0.5, 1.0])])
    alpha = lambda x: 1.0 + 3 * x  # noqa: E731
    s = assemble(ProblemSpec(1, alpha=alpha, beta=2.0), g)
    # node 1: dx_{i-1} = 0.2, dx_i = 0.3
    a0, a1, a2 = alpha(0.0), alpha(0.2), alpha(0.5)
    west = 2 * harmonic_mean(a0, a1) / (0.2 * 0.5)
    east = 2 * harmonic_mean(a1, a2) / (0.3 * 0.5)
    assert s.links[0, 1] == pytest.approx(west, rel=1e-14)
    assert s.links[1, 1] == pytest.approx(east, rel=1e-14)
    assert s.center[1] == pytest.approx(west + east + 2.0, rel=1e-14)


def test_boundary_folded_into_load():
    g = build_uniform_grid(1, [4], [1.0])
    s = assemble(ProblemSpec(1, boundary=lambda x: x), g)
    # u(1) = 1 enters the last interior row with weight 1/h^2 = 9
    assert s.rhs[2] == pytest.approx(9.0)
    assert s.coef[1, 2] == 0.0 and s.coef[0, 1] == 0.0


@pytest.mark.parametrize("bad", [dict(beta=-1.0), dict(alpha=0.0), dict(alpha=[1.0, 1.0])])
def test_assemble_rejects(bad):
    with pytest.raises(ValueError):
        assemble(ProblemSpec(1, **bad), build_uniform_grid(1, [5], [1.0]))


@given(st.integers(1, 3), st.integers(3, 6), st.floats(0.0, 5.0))
def test_operator_is_m_matrix(dim, res, beta):
    g = build_uniform_grid(dim, [res] * dim, [1.0] * dim)
    s = assemble(ProblemSpec(dim, alpha=lambda *x: 1 + sum(x), beta=beta), g)
    _, a, _ = _dense(s)
    off = a - np.diag(np.diag(a))
    assert np.all(off <= 0)
    assert np.all(np.diag(a) + off.sum(axis=1) >= beta - 1e-9 * np.abs(a).max())
    np.testing.assert_allclose(a, a.T, rtol=1e-12)  # uniform spacing keeps A symmetric


def test_l1_error_identity():
    assert l1_error([1.0, 2.0], [1.0, 2.0]) == 0.0


def test_l1_error_arithmetic():
    assert l1_error([0.0, 0.0], [1.0, 3.0]) == 2.0


@given(arrays(np.float64, st.integers(1, 200), elements=st.floats(-1e3, 1e3)),
       st.integers(0, 2 ** 31))
def test_l1_error_matches_loop(u, seed):
    exact = np.random.default_rng(seed).uniform(-1e3, 1e3, u.size)
    total = 0.0
    for x, y in zip(u.tolist(), exact.tolist()):
        total += abs(x - y)
    assert l1_error(u, exact) == pytest.approx(total / u.size, rel=1e-12, abs=1e-12)


def test_l1_error_shape_mismatch():
    with pytest.raises(ValueError):
        l1_error([1.0], [1.0, 2.0])


@pytest.mark.parametrize("dim,res", [(1, 12), (2, 4), (3, 4)])
def test_residual_zero_at_dense_solution(dim, res):
    g = build_uniform_grid(dim, [res] * dim, [1.0] * dim)
    s = assemble(ProblemSpec(dim, alpha=lambda *x: 2 + x[0], beta=0.5, f=lambda *x: np.sin(3 * x[0]),
                             boundary=lambda *x: 1 + x[0]), g)
    idx, a, f = _dense(s)
    assert idx.size <= 10
    u = s.initial_field(0.0)
    u[idx] = np.linalg.solve(a, f)
    assert residual_norm(s, u) < 1e-12 * max(1.0, np.abs(f).sum())


def test_residual_zero_problem():
    g = build_uniform_grid(2, [5, 5], [1.0, 1.0])
    s = assemble(ProblemSpec(2), g)
    assert residual_norm(s, s.initial_field(0.0)) == 0.0


def test_residual_matches_dense_operator(rng):
    g = build_uniform_grid(2, [6, 5], [1.0, 2.0])
    s = assemble(ProblemSpec(2, f=1.0, boundary=lambda x, y: x * y), g)
    idx, a, f = _dense(s)
    u = s.initial_field(0.0)
    u[idx] = rng.normal(size=idx.size)
    assert residual_norm(s, u) == pytest.approx(np.abs(f - a @ u[idx]).sum(), rel=1e-12)


def test_model_solution_is_discrete_exact():
    # bilinear data is reproduced exactly by the 5-point scheme
    g = build_uniform_grid(2, [9, 9], [1.0, 1.0])
    prod = lambda x, y: x * y  # noqa: E731
    s = assemble(ProblemSpec(2, boundary=prod), g)
    assert residual_norm(s, nodal_field(prod, g)) < 1e-10
