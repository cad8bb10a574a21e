"""Finite-difference stencils for -div(alpha grad u) + beta u = f on tensor grids.

Every interior node ``p`` carries a center coefficient ``center[p]`` and
one coefficient per neighbor slot. Slots are ordered minus/plus per axis,
i.e. W, E, S, N, B, F. Links to Dirichlet boundary nodes are folded into
the right-hand side and zeroed in ``coef``; ``links`` keeps the unfolded
values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numba as nb
import numpy as np

from .grid import StructuredGrid

__all__ = [
    "ProblemSpec",
    "Stencil",
    "assemble",
    "harmonic_mean",
    "l1_error",
    "convergence_error",
    "residual_norm",
    "nodal_field",
    "interior_view",
    "neighbor_offsets",
]

_NB = {"nogil": True, "cache": True}


@dataclass(frozen=True)
class ProblemSpec:
    """Model elliptic problem.

    ``alpha`` is a positive scalar, a callable of the coordinates, or a
    sequence with one such entry per axis. ``f``, ``boundary`` and
    ``exact`` are scalars or callables ``g(x, y, z)`` accepting broadcast
    coordinate arrays.
    """

    dim: int
    alpha: object = 1.0
    beta: float = 0.0
    f: object = 0.0
    boundary: object = 0.0
    exact: Callable | None = None


@dataclass(frozen=True)
class Stencil:
    grid: StructuredGrid
    center: np.ndarray
    coef: np.ndarray
    links: np.ndarray
    rhs: np.ndarray
    boundary_values: np.ndarray
    beta: float

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def offsets(self) -> np.ndarray:
        return neighbor_offsets(self.grid.shape)

    def initial_field(self, guess: float = 0.0) -> np.ndarray:
        """Full flat field: boundary ring at its Dirichlet values, interior at ``guess``."""
        u = self.boundary_values.copy()
        u[interior_mask(self.grid)] = guess
        return u


def neighbor_offsets(shape) -> np.ndarray:
    """Flat-index offsets for the W, E, S, N, B, F slots of a full array."""
    out, stride = [], 1
    for n in shape:
        out += [-stride, stride]
        stride *= n
    return np.array(out, dtype=np.int64)


def interior_mask(grid: StructuredGrid) -> np.ndarray:
    m = np.zeros(grid.shape[::-1], dtype=bool)
    m[(slice(1, -1),) * grid.dim] = True
    return m.ravel()


def interior_view(u: np.ndarray, grid: StructuredGrid) -> np.ndarray:
    """Interior block of a flat full field, shaped ``interior_shape[::-1]``."""
    return u.reshape(grid.shape[::-1])[(slice(1, -1),) * grid.dim]


def nodal_field(value, grid: StructuredGrid) -> np.ndarray:
    """Evaluate a scalar or callable at every node; returns a flat full array."""
    if callable(value):
        out = np.asarray(value(*grid.mesh()), dtype=np.float64)
        return np.broadcast_to(out, grid.shape[::-1]).ravel().copy()
    return np.full(grid.size, float(value))


def harmonic_mean(a, b):
    return 2.0 * a * b / (a + b)


def assemble(problem: ProblemSpec, grid: StructuredGrid) -> Stencil:
    """Per-node coefficients with harmonic-mean face diffusivities."""
    if problem.dim != grid.dim:
        raise ValueError("problem and grid dimensions differ")
    if problem.beta < 0:
        raise ValueError("beta must be nonnegative")
    d = grid.dim
    alphas = problem.alpha if isinstance(problem.alpha, (list, tuple)) else [problem.alpha] * d
    if len(alphas) != d:
        raise ValueError("need one diffusivity per axis")
    shape_r = grid.shape[::-1]
    n = grid.size
    links = np.zeros((2 * d, n))
    for axis in range(d):
        alpha = nodal_field(alphas[axis], grid).reshape(shape_r)
        if np.any(alpha <= 0):
            raise ValueError("diffusivity must be positive")
        ax = d - 1 - axis  # numpy axis of grid axis ``axis``
        h = grid.spacings[axis]
        view = [1] * d
        view[ax] = -1
        hm = h[:-1].reshape(view)  # delta x_{i-1} at interior node i
        hp = h[1:].reshape(view)  # delta x_i
        inner = [slice(1, -1)] * d
        lo = list(inner)
        lo[ax] = slice(0, -2)
        hi = list(inner)
        hi[ax] = slice(2, None)
        mid = alpha[tuple(inner)]
        a_minus = harmonic_mean(alpha[tuple(lo)], mid)
        a_plus = harmonic_mean(mid, alpha[tuple(hi)])
        minus = np.zeros(shape_r)
        plus = np.zeros(shape_r)
        minus[tuple(inner)] = 2.0 * a_minus / (hm * (hp + hm))
        plus[tuple(inner)] = 2.0 * a_plus / (hp * (hp + hm))
        links[2 * axis] = minus.ravel()
        links[2 * axis + 1] = plus.ravel()
    mask = interior_mask(grid)
    center = np.where(mask, links.sum(axis=0) + problem.beta, 0.0)
    ubnd = np.where(mask, 0.0, nodal_field(problem.boundary, grid))
    rhs = np.where(mask, nodal_field(problem.f, grid), 0.0)
    offsets = neighbor_offsets(grid.shape)
    coef = links.copy()
    idx = np.flatnonzero(mask)
    for s, off in enumerate(offsets):
        on_bnd = ~mask[idx + off]
        rows = idx[on_bnd]
        rhs[rows] += links[s, rows] * ubnd[rows + off]
        coef[s, rows] = 0.0
    folded = links.sum(axis=0) - coef.sum(axis=0)
    balance = center - coef.sum(axis=0) - folded - problem.beta
    scale = max(1.0, float(np.max(np.abs(center))))
    if np.any(np.abs(balance[mask]) > 1e-12 * scale):
        raise AssertionError("row-sum identity violated during assembly")
    for arr in (center, coef, links, rhs, ubnd):
        arr.setflags(write=False)
    return Stencil(grid, center, coef, links, rhs, ubnd, float(problem.beta))


def l1_error(u, exact) -> float:
    """Mean absolute difference of two equally shaped interior fields."""
    u = np.asarray(u, dtype=np.float64)
    exact = np.asarray(exact, dtype=np.float64)
    if u.shape != exact.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {exact.shape}")
    if u.size == 0:
        raise ValueError("empty field")
    return float(np.mean(np.abs(u - exact)))


@nb.njit(**_NB)
def _abs_diff_sum(u, exact):
    s = 0.0
    for i in range(u.size):
        s += abs(u[i] - exact[i])
    return s


def convergence_error(u: np.ndarray, exact: np.ndarray, divisor: float) -> float:
    """Absolute error summed over every node of two full flat fields, over ``divisor``.

    The stopping rule and the reported table errors use this measure; see
    :func:`mfsor.solvers_seq.error_divisor` for how ``divisor`` is chosen.
    """
    if u.shape != exact.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {exact.shape}")
    return _abs_diff_sum(u, exact) / divisor


@nb.njit(**_NB)
def _residual_l1(center, coef, offsets, rhs, u, idx):
    total = 0.0
    for p in idx:
        r = rhs[p] - center[p] * u[p]
        for s in range(offsets.size):
            r += coef[s, p] * u[p + offsets[s]]
        total += abs(r)
    return total


def residual_norm(stencil: Stencil, u: np.ndarray) -> float:
    """L1 norm of ``f - A u`` over the interior, applied through the stencil."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.shape != (stencil.grid.size,):
        raise ValueError(f"expected a flat full field of size {stencil.grid.size}")
    idx = np.flatnonzero(interior_mask(stencil.grid))
    return float(_residual_l1(stencil.center, stencil.coef, stencil.offsets, stencil.rhs, u, idx))
