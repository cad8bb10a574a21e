"""Parallel multi-frontal SOR over a Cartesian box decomposition.

Each box owns a window of the full field padded by a ghost ring of width
two. One iteration is three fork-join phases over boxes:

1. exchange: ghost cells are refreshed from the published field of the
   previous iteration (a snapshot, so the phase order across boxes is
   irrelevant);
2. sweep: coupled sets touching the box's starting corner, edges and
   faces are solved in wavefront order, then the remaining nodes are
   relaxed in a causal order (same values as the frontal traversal);
3. publish: owned values are written back to the shared full field.

A node on a starting face is coupled with its mirror images across every
interface it touches, because each of those images also treats it as an
already-updated upstream neighbor. Every participating box solves the
same small dense system from the same inputs in canonical node order, so
results are bitwise identical for any worker count.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .discretization import Stencil
from .grid import Decomposition, SweepDirection, SweepSchedule, frontal_order, schedule as make_schedule
from .solvers_seq import RelaxationSet, SolveReport, error_divisor

__all__ = [
    "CouplingSkeleton",
    "CoupledSystem",
    "SingularCoupledSystem",
    "HaloField",
    "ParallelEngine",
    "identify_coupling_sets",
    "assemble_coupled",
    "solve_coupled",
    "parallel_iteration",
    "solve_parallel",
    "box_omegas",
    "OMEGA_MODES",
    "GHOST_WIDTH",
    "PIVOT_FLOOR",
]

GHOST_WIDTH = 2
PIVOT_FLOOR = 1e-14
_NB = {"nogil": True, "cache": True}


class SingularCoupledSystem(RuntimeError):
    """A coupled system hit a pivot below :data:`PIVOT_FLOOR`."""

    def __init__(self, message, matrix=None, nodes=None):
        super().__init__(message)
        self.matrix = matrix
        self.nodes = nodes


@dataclass(frozen=True)
class CouplingSkeleton:
    """Geometry of one coupled set, seen from box ``box``.

    ``nodes`` are global flat indices in ascending order; ``owners`` are the
    owning boxes of those nodes; ``axes`` are the interface axes crossed.
    """

    box: int
    kind: str
    axes: tuple
    nodes: tuple
    owners: tuple
    directions: tuple

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass
class CoupledSystem:
    nodes: np.ndarray
    matrix: np.ndarray
    rhs: np.ndarray
    omegas: np.ndarray
    directions: tuple

    @property
    def size(self) -> int:
        return self.nodes.size


def _start_index(box, direction: SweepDirection) -> tuple:
    return tuple(l if s > 0 else h - 1 for l, h, s in zip(box.lo, box.hi, direction.signs))


def _full_flat(decomp: Decomposition, interior_nodes: np.ndarray) -> np.ndarray:
    strides = np.asarray(decomp.grid.strides, dtype=np.int64)
    return ((np.asarray(interior_nodes, dtype=np.int64) + 1) * strides).sum(axis=-1)


def _box_plan(decomp: Decomposition, sched: SweepSchedule, k: int, box):
    """(frontal order of box, coupled mask per node, skeletons in solve order)."""
    d = decomp.grid.dim
    direction = sched.direction(box.index, k)
    signs = np.asarray(direction.signs, dtype=np.int64)
    order = frontal_order(box, direction)
    on_face = order == np.asarray(_start_index(box, direction))
    # axes whose start face abuts another box
    live = np.array([0 <= box.index[a] - signs[a] < decomp.parts[a] for a in range(d)])
    coupled_axes = on_face & live
    is_coupled = coupled_axes.any(axis=1)
    rows = np.flatnonzero(is_coupled)
    strides = np.asarray(decomp.grid.strides, dtype=np.int64)
    flat = _full_flat(decomp, order[rows])
    faces = on_face[rows].sum(axis=1)
    pattern = coupled_axes[rows] @ (1 << np.arange(d))
    skeletons = [None] * rows.size
    for pat in np.unique(pattern):
        axes = tuple(a for a in range(d) if pat >> a & 1)
        # owner, orientation and flat shift of a mirror image depend only on the crossed axes
        shifts, owners, dirs = [], [], []
        for r in range(len(axes) + 1):
            for subset in itertools.combinations(axes, r):
                idx = list(box.index)
                for a in subset:
                    idx[a] -= int(signs[a])
                shifts.append(-sum(int(signs[a] * strides[a]) for a in subset))
                owners.append(decomp.box_id(idx))
                dirs.append(sched.direction(tuple(idx), k))
        sel = np.flatnonzero(pattern == pat)
        members = flat[sel, None] + np.asarray(shifts)
        rank = np.argsort(members, axis=1)
        nodes = np.take_along_axis(members, rank, axis=1).tolist()
        for t, row_nodes, perm, nf in zip(sel.tolist(), nodes, rank.tolist(), faces[sel].tolist()):
            kind = "corner" if nf == d else ("edge" if nf == d - 1 else "face")
            skeletons[t] = CouplingSkeleton(box.id, kind, axes, tuple(row_nodes),
                                            tuple(owners[i] for i in perm), tuple(dirs[i] for i in perm))
    return order, is_coupled, skeletons


def _causal_order(nodes: np.ndarray, signs) -> np.ndarray:
    """Lexicographic order along the sweep signs, last axis slowest.

    Every upstream neighbor precedes its node, so the result equals the
    frontal traversal while walking memory contiguously.
    """
    keys = [nodes[:, a] * s for a, s in enumerate(signs)]
    return nodes[np.lexsort(keys)]


def identify_coupling_sets(decomp: Decomposition, sched: SweepSchedule, k: int) -> dict:
    """Coupled-set skeletons per box in solve order (corner, then marching away)."""
    return {b.id: _box_plan(decomp, sched, k, b)[2] for b in decomp.boxes}


@nb.njit(**_NB)
def _gauss_solve(m, r):
    """Partial-pivoting elimination in place; returns the smallest pivot magnitude."""
    n = r.size
    smallest = np.inf
    for c in range(n):
        p = c
        best = abs(m[c, c])
        for i in range(c + 1, n):
            if abs(m[i, c]) > best:
                best = abs(m[i, c])
                p = i
        if best < smallest:
            smallest = best
        if best < 1e-14:
            return best
        if p != c:
            for j in range(n):
                tmp = m[c, j]
                m[c, j] = m[p, j]
                m[p, j] = tmp
            tmp = r[c]
            r[c] = r[p]
            r[p] = tmp
        for i in range(c + 1, n):
            f = m[i, c] / m[c, c]
            if f != 0.0:
                for j in range(c, n):
                    m[i, j] -= f * m[c, j]
                r[i] -= f * r[c]
    for i in range(n - 1, -1, -1):
        acc = r[i]
        for j in range(i + 1, n):
            acc -= m[i, j] * r[j]
        r[i] = acc / m[i, i]
    return smallest


def solve_coupled(system: CoupledSystem) -> np.ndarray:
    """Solve a coupled system by dense elimination with partial pivoting."""
    m = np.array(system.matrix, dtype=np.float64, copy=True)
    r = np.array(system.rhs, dtype=np.float64, copy=True)
    if m.shape != (r.size, r.size):
        raise ValueError("matrix and right-hand side sizes differ")
    pivot = _gauss_solve(m, r)
    if pivot < PIVOT_FLOOR:
        raise SingularCoupledSystem(
            f"coupled system at nodes {list(system.nodes)} is numerically singular "
            f"(pivot {pivot:.3e})", system.matrix, system.nodes)
    return r


@dataclass
class _Program:
    """Flattened per-box work lists for one position of the schedule cycle."""

    box_set_ptr: np.ndarray
    set_row_ptr: np.ndarray
    set_size: np.ndarray
    row_local: np.ndarray
    row_global: np.ndarray
    row_col: np.ndarray
    row_box: np.ndarray
    box_int_ptr: np.ndarray
    int_local: np.ndarray
    int_global: np.ndarray
    skeletons: dict = field(repr=False)


class ParallelEngine:
    """Window layout, halo maps and per-cycle work lists for one decomposition."""

    def __init__(self, stencil: Stencil, decomp: Decomposition, sched: SweepSchedule | None = None):
        if decomp.grid is not stencil.grid and decomp.grid.shape != stencil.grid.shape:
            raise ValueError("decomposition and stencil grids differ")
        self.stencil = stencil
        self.decomp = decomp
        self.schedule = sched or make_schedule(decomp)
        grid = decomp.grid
        d = grid.dim
        nbx = decomp.nboxes
        shape = np.asarray(grid.shape, dtype=np.int64)
        self.win_lo = np.zeros((nbx, d), dtype=np.int64)
        self.win_shape = np.zeros((nbx, d), dtype=np.int64)
        self.lstrides = np.zeros((nbx, d), dtype=np.int64)
        self.base = np.zeros(nbx + 1, dtype=np.int64)
        self.loc_off = np.zeros((nbx, 2 * d), dtype=np.int64)
        owner = decomp.owner_map()
        own_local, own_global, gh_local, gh_global, bd_local, bd_global = ([] for _ in range(6))
        for b in decomp.boxes:
            lo = np.maximum(np.asarray(b.lo) + 1 - GHOST_WIDTH, 0)
            hi = np.minimum(np.asarray(b.hi) + 1 + GHOST_WIDTH, shape)
            self.win_lo[b.id] = lo
            self.win_shape[b.id] = hi - lo
            st = np.cumprod(np.concatenate([[1], hi - lo]))[:-1]
            self.lstrides[b.id] = st
            self.loc_off[b.id] = np.ravel(np.column_stack([-st, st]))
            self.base[b.id + 1] = self.base[b.id] + int(np.prod(hi - lo))
            cells = np.indices(tuple((hi - lo)[::-1])).reshape(d, -1)[::-1].T + lo
            glob = (cells * np.asarray(grid.strides)).sum(axis=1)
            loc = np.arange(glob.size, dtype=np.int64)
            who = owner[glob]
            own_local.append(loc[who == b.id])
            own_global.append(glob[who == b.id])
            gh = (who >= 0) & (who != b.id)
            gh_local.append(loc[gh])
            gh_global.append(glob[gh])
            bd_local.append(loc[who < 0])
            bd_global.append(glob[who < 0])
        self.own_ptr, self.own_local, self.own_global = _pack(own_local, own_global)
        self.ghost_ptr, self.ghost_local, self.ghost_global = _pack(gh_local, gh_global)
        self.bnd_ptr, self.bnd_local, self.bnd_global = _pack(bd_local, bd_global)
        self._programs = {}

    @property
    def cycle_length(self) -> int:
        return self.schedule.cycle_length

    def local_index(self, box_id: int, glob) -> np.ndarray:
        grid = self.decomp.grid
        glob = np.asarray(glob, dtype=np.int64)
        coords = [(glob // s) % n for s, n in zip(grid.strides, grid.shape)]
        rel = np.stack(coords, axis=-1) - self.win_lo[box_id]
        if np.any(rel < 0) or np.any(rel >= self.win_shape[box_id]):
            raise LookupError(f"node outside the halo window of box {box_id}")
        return (rel * self.lstrides[box_id]).sum(axis=-1)

    def program(self, k: int) -> _Program:
        c = k % self.cycle_length
        if c not in self._programs:
            self._programs[c] = self._build_program(c)
        return self._programs[c]

    def _build_program(self, c: int) -> _Program:
        decomp, d = self.decomp, self.decomp.grid.dim
        offsets = self.stencil.offsets
        owner = decomp.owner_map()
        box_set_ptr, set_row_ptr, set_size = [0], [np.zeros(1, dtype=np.int64)], []
        nrows = 0
        row_local, row_global, row_col, row_box = [], [], [], []
        box_int_ptr, int_local, int_global = [0], [], []
        skel_by_box = {}
        for b in decomp.boxes:
            order, coupled, skels = _box_plan(decomp, self.schedule, c, b)
            skel_by_box[b.id] = skels
            if skels:
                sizes = np.array([sk.size for sk in skels], dtype=np.int64)
                nodes = np.fromiter(itertools.chain.from_iterable(sk.nodes for sk in skels), np.int64)
                set_of = np.repeat(np.arange(sizes.size), sizes)
                pos = np.arange(nodes.size) - np.repeat(np.cumsum(sizes) - sizes, sizes)
                padded = np.full((sizes.size, sizes.max()), -1, dtype=np.int64)
                padded[set_of, pos] = nodes
                cols = np.full((nodes.size, offsets.size), -1, dtype=np.int64)
                for q, off in enumerate(offsets):
                    hit = padded[set_of] == (nodes + off)[:, None]
                    has = hit.any(axis=1)
                    cols[has, q] = hit.argmax(axis=1)[has]
                set_size.append(sizes)
                set_row_ptr.append(nrows + np.cumsum(sizes))
                nrows += nodes.size
                row_local.append(self.local_index(b.id, nodes))
                row_global.append(nodes)
                row_col.append(cols)
                row_box.append(owner[nodes])
            box_set_ptr.append(box_set_ptr[-1] + len(skels))
            signs = self.schedule.direction(b.index, c).signs
            inner = _full_flat(decomp, _causal_order(order[~coupled], signs))
            int_global.append(inner)
            int_local.append(self.local_index(b.id, inner) if inner.size else inner)
            box_int_ptr.append(box_int_ptr[-1] + inner.size)
        as64 = lambda x: np.asarray(x, dtype=np.int64)
        cat = lambda parts, shape=(0,): np.concatenate(parts) if parts else np.zeros(shape, dtype=np.int64)
        return _Program(
            as64(box_set_ptr), as64(cat(set_row_ptr)), as64(cat(set_size)),
            as64(cat(row_local)), as64(cat(row_global)), as64(cat(row_col, (0, 2 * d))), as64(cat(row_box)),
            as64(box_int_ptr), as64(cat(int_local)), as64(cat(int_global)),
            skel_by_box,
        )

    def new_halo(self, u: np.ndarray) -> "HaloField":
        halo = HaloField(self, np.zeros(self.base[-1]))
        _fill(halo.buf, u, self.base, self.own_ptr, self.own_local, self.own_global)
        _fill(halo.buf, u, self.base, self.bnd_ptr, self.bnd_local, self.bnd_global)
        return halo

    def halo_bytes_per_exchange(self) -> int:
        return int(self.ghost_local.size * 8)


def _pack(locals_, globals_):
    ptr = np.concatenate([[0], np.cumsum([x.size for x in locals_])]).astype(np.int64)
    return ptr, np.concatenate(locals_).astype(np.int64), np.concatenate(globals_).astype(np.int64)


@dataclass
class HaloField:
    """Per-box padded windows stored back to back in one buffer.

    ``iteration`` counts completed parallel iterations; ghost cells hold
    neighbor values published at the end of iteration ``iteration - 1``.
    """

    engine: ParallelEngine
    buf: np.ndarray
    iteration: int = 0
    bytes_exchanged: int = 0

    def window(self, box_id: int) -> np.ndarray:
        """View of one box's window shaped like the full array (reversed axes)."""
        e = self.engine
        flat = self.buf[e.base[box_id]:e.base[box_id + 1]]
        return flat.reshape(tuple(e.win_shape[box_id][::-1]))

    def value(self, box_id: int, glob: int) -> float:
        e = self.engine
        return float(self.buf[e.base[box_id] + int(e.local_index(box_id, glob))])

    def gather(self, out: np.ndarray | None = None) -> np.ndarray:
        """Assemble the owned values into a full field."""
        e = self.engine
        if out is None:
            out = e.stencil.boundary_values.copy()
        _publish(out, self.buf, e.base, e.own_ptr, e.own_local, e.own_global)
        return out


@nb.njit(**_NB)
def _fill(buf, u, base, ptr, loc, glob):
    for b in range(ptr.size - 1):
        for t in range(ptr[b], ptr[b + 1]):
            buf[base[b] + loc[t]] = u[glob[t]]


@nb.njit(parallel=True, **_NB)
def _exchange(buf, u, base, ptr, loc, glob):
    for b in nb.prange(ptr.size - 1):
        for t in range(ptr[b], ptr[b + 1]):
            buf[base[b] + loc[t]] = u[glob[t]]


@nb.njit(parallel=True, **_NB)
def _publish(u, buf, base, ptr, loc, glob):
    for b in nb.prange(ptr.size - 1):
        for t in range(ptr[b], ptr[b + 1]):
            u[glob[t]] = buf[base[b] + loc[t]]


@nb.njit(**_NB)
def _box_sweep(b, buf, base, loc_off, center, coef, rhs, omega,
               box_set_ptr, set_row_ptr, set_size, row_local, row_global, row_col, row_box,
               box_int_ptr, int_local, int_global):
    o = base[b]
    nslot = loc_off.shape[1]
    worst = np.inf
    # scratch for the largest (8 x 8) coupled set, reused across sets
    mbuf = np.empty((8, 8))
    rbuf = np.empty(8)
    for s in range(box_set_ptr[b], box_set_ptr[b + 1]):
        r0 = set_row_ptr[s]
        n = set_size[s]
        m = mbuf[:n, :n]
        m[:, :] = 0.0
        r = rbuf[:n]
        for i in range(n):
            l = row_local[r0 + i]
            g = row_global[r0 + i]
            w = omega[row_box[r0 + i]]
            m[i, i] = 1.0
            acc = rhs[g]
            for q in range(nslot):
                col = row_col[r0 + i, q]
                if col >= 0:
                    m[i, col] -= w * (coef[q, g] / center[g])
                else:
                    acc += coef[q, g] * buf[o + l + loc_off[b, q]]
            r[i] = (1.0 - w) * buf[o + l] + w * (acc / center[g])
        piv = _gauss_solve(m, r)
        if piv < worst:
            worst = piv
        if piv < 1e-14:
            return piv
        for i in range(n):
            buf[o + row_local[r0 + i]] = r[i]
    w = omega[b]
    for t in range(box_int_ptr[b], box_int_ptr[b + 1]):
        l = int_local[t]
        g = int_global[t]
        acc = rhs[g]
        for q in range(nslot):
            acc += coef[q, g] * buf[o + l + loc_off[b, q]]
        buf[o + l] = (1.0 - w) * buf[o + l] + w * (acc / center[g])
    return worst


@nb.njit(parallel=True, **_NB)
def _sweep_all(buf, base, loc_off, center, coef, rhs, omega,
               box_set_ptr, set_row_ptr, set_size, row_local, row_global, row_col, row_box,
               box_int_ptr, int_local, int_global, pivots):
    for b in nb.prange(box_set_ptr.size - 1):
        pivots[b] = _box_sweep(b, buf, base, loc_off, center, coef, rhs, omega,
                               box_set_ptr, set_row_ptr, set_size, row_local, row_global, row_col, row_box,
                               box_int_ptr, int_local, int_global)


def assemble_coupled(stencil: Stencil, halo: HaloField, skeleton: CouplingSkeleton,
                     omega: RelaxationSet | float, k: int, omega_mode: str = "direction") -> CoupledSystem:
    """Matrix and right-hand side of one coupled set from box ``skeleton.box``'s window.

    Row ``i`` is node ``i``'s relaxation with its in-set neighbors moved to
    the left: unit diagonal, ``-w a_nb / a_P`` off the diagonal.
    """
    e = halo.engine
    if not isinstance(omega, RelaxationSet):
        omega = RelaxationSet(stencil.dim, omega)
    wbox = box_omegas(e.decomp, e.schedule, k, omega, omega_mode)
    owner = e.decomp.owner_map()
    nodes = np.asarray(skeleton.nodes, dtype=np.int64)
    n = nodes.size
    m = np.eye(n)
    r = np.empty(n)
    ws = wbox[owner[nodes]]
    for i, g in enumerate(nodes):
        w = ws[i]
        acc = stencil.rhs[g]
        for q, off in enumerate(stencil.offsets):
            hit = np.flatnonzero(nodes == g + off)
            if hit.size:
                m[i, hit[0]] -= w * (stencil.coef[q, g] / stencil.center[g])
            else:
                try:
                    acc += stencil.coef[q, g] * halo.value(skeleton.box, g + off)
                except LookupError:
                    raise LookupError(f"halo of box {skeleton.box} lacks neighbor {g + off} "
                                      f"of coupled node {g}") from None
        r[i] = (1.0 - w) * halo.value(skeleton.box, g) + w * (acc / stencil.center[g])
    return CoupledSystem(nodes, m, r, ws, skeleton.directions)


OMEGA_MODES = ("direction", "iteration")


def box_omegas(decomp: Decomposition, sched: SweepSchedule, k: int, omega: RelaxationSet,
               mode: str = "direction") -> np.ndarray:
    """Relaxation factor of every box at iteration ``k``.

    ``direction``: each box uses the factor of its own sweep orientation.
    ``iteration``: every box uses the factor of box 0's orientation, i.e.
    one factor per iteration.
    """
    if mode == "direction":
        return np.array([omega[sched.direction(b.index, k)] for b in decomp.boxes])
    if mode == "iteration":
        return np.full(decomp.nboxes, omega[sched.base(k)])
    raise ValueError(f"unknown omega mode {mode!r}; expected one of {OMEGA_MODES}")


def _set_threads(workers: int | None):
    if workers is None:
        return
    if workers < 1:
        raise ValueError("workers must be at least 1")
    nb.set_num_threads(min(int(workers), nb.config.NUMBA_NUM_THREADS))


def parallel_iteration(stencil: Stencil, halo: HaloField, decomp: Decomposition, sched: SweepSchedule,
                       k: int, omega, u: np.ndarray, omega_mode: str = "direction") -> HaloField:
    """One exchange/sweep/publish iteration; ``u`` is the shared published field."""
    e = halo.engine
    if e.decomp is not decomp or e.schedule.parts != sched.parts:
        raise ValueError("halo field belongs to a different decomposition")
    if not isinstance(omega, RelaxationSet):
        omega = RelaxationSet(stencil.dim, omega)
    w = box_omegas(decomp, sched, k, omega, omega_mode)
    prog = e.program(k)
    _exchange(halo.buf, u, e.base, e.ghost_ptr, e.ghost_local, e.ghost_global)
    halo.bytes_exchanged += e.halo_bytes_per_exchange()
    pivots = np.empty(decomp.nboxes)
    _sweep_all(halo.buf, e.base, e.loc_off, stencil.center, stencil.coef, stencil.rhs, w,
               prog.box_set_ptr, prog.set_row_ptr, prog.set_size, prog.row_local, prog.row_global,
               prog.row_col, prog.row_box, prog.box_int_ptr, prog.int_local, prog.int_global, pivots)
    if np.any(pivots < PIVOT_FLOOR):
        bad = int(np.argmin(pivots))
        raise SingularCoupledSystem(f"box {bad}: coupled system pivot {pivots[bad]:.3e} at iteration {k}")
    _publish(u, halo.buf, e.base, e.own_ptr, e.own_local, e.own_global)
    halo.iteration = k + 1
    return halo


@nb.njit(**_NB)
def _error_sum(u, exact):
    s = 0.0
    for i in range(u.size):
        s += abs(u[i] - exact[i])
    return s


def solve_parallel(stencil: Stencil, u0: np.ndarray, decomp: Decomposition, exact: np.ndarray,
                   omega=1.0, threshold: float = 1e-3, max_iters: int = 100000, workers: int | None = None,
                   normalization: float | None = None, method: str = "PGS",
                   engine: ParallelEngine | None = None, omega_mode: str = "direction") -> SolveReport:
    """Iterate :func:`parallel_iteration` over the schedule cycle until the error stop."""
    if not isinstance(omega, RelaxationSet):
        omega = RelaxationSet(stencil.dim, omega)
    if max_iters < 0:
        raise ValueError("max_iters must be nonnegative")
    engine = engine or ParallelEngine(stencil, decomp)
    sched = engine.schedule
    _set_threads(workers)
    u = np.array(u0, dtype=np.float64, copy=True)
    exact = np.ascontiguousarray(exact, dtype=np.float64)
    divisor = error_divisor(stencil.grid, normalization)
    for c in range(min(engine.cycle_length, max(max_iters, 1))):
        engine.program(c)
    halo = engine.new_halo(u)
    errors = np.empty(max_iters)
    halo_bytes = np.empty(max_iters, dtype=np.int64)
    k = 0
    t0 = time.perf_counter()
    while k < max_iters:
        before = halo.bytes_exchanged
        parallel_iteration(stencil, halo, decomp, sched, k, omega, u, omega_mode)
        halo_bytes[k] = halo.bytes_exchanged - before
        errors[k] = _error_sum(u, exact) / divisor
        k += 1
        if errors[k - 1] < threshold:
            break
    seconds = time.perf_counter() - t0
    errors = errors[:k].copy()
    converged = bool(k > 0 and errors[-1] < threshold)
    label = f"{method.upper()}({'x'.join(str(p) for p in decomp.parts)})"
    return SolveReport(label, k, errors, seconds, converged, u, omega.values, halo_bytes[:k].copy(),
                       {"workers": nb.get_num_threads(), "boxes": decomp.nboxes})
