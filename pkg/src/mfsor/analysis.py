"""Explicit-matrix analysis of the parallel sweeps.

Rows and columns are interior nodes in natural order (first axis fastest).
For iteration ``k`` of the schedule every node splits its stencil into the
upstream half (neighbors its box's sweep reaches first, across interfaces
too) and the downstream half. Collecting the upstream couplings gives
``G_up(k)`` with the upstream coefficient sums on its diagonal, so that

    A = G_up(k) + beta I + G_down(k),   G_down(k) = G_up(k + 1)

and one parallel iteration with node-wise relaxation ``W = diag(w)`` is

    (B + W (G_up - Lup)) u_new = ((I - W) B + W (Ldown - G_down)) u + W f

where ``B = diag(b)`` and ``Lup``/``Ldown`` are the diagonals of the two G
matrices. With a single shared ``w`` this is the familiar
``((b - w Lup) I + w G_up) u_new = (((1 - w) b + w Ldown) I - w G_down) u + w f``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .discretization import Stencil, interior_mask
from .grid import Decomposition, SweepSchedule, all_directions, schedule as make_schedule
from .solvers_par import OMEGA_MODES, ParallelEngine
from .solvers_seq import RelaxationSet

__all__ = [
    "DENSE_LIMIT",
    "StructuredMatrix",
    "SplitAnalysis",
    "TriangularCertificate",
    "IterationMatrixReport",
    "IluFactors",
    "assemble_matrix",
    "upstream_splitting",
    "build_splitting",
    "cycle_splittings",
    "is_alt_block_triangular",
    "greedy_splitting_set",
    "eigen_diag_check",
    "block_spectrum",
    "iteration_matrix",
    "matrix_iteration_step",
    "node_omegas",
    "spectral_radius",
    "ilu0_factor",
    "ssgs_vs_ilu0_report",
    "dump_matrix",
    "nine_point_matrix",
    "structured_splitting",
    "structured_radius",
]

DENSE_LIMIT = 4096


@dataclass
class StructuredMatrix:
    """Banded matrix: ``bands[offset]`` holds the diagonal ``A[i, i + offset]``."""

    n: int
    bands: dict

    @classmethod
    def from_sparse(cls, m) -> "StructuredMatrix":
        m = sp.dia_matrix(m)
        n = m.shape[0]
        bands = {}
        for off, data in zip(m.offsets, m.data):
            off = int(off)
            diag = sp.csr_matrix(m).diagonal(off)
            if np.any(diag != 0) or off == 0:
                bands[off] = diag.copy()
        return cls(n, dict(sorted(bands.items())))

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "StructuredMatrix":
        return cls.from_sparse(sp.csr_matrix(np.asarray(a, dtype=np.float64)))

    def tocsr(self) -> sp.csr_matrix:
        offs = list(self.bands)
        return sp.diags([self.bands[o] for o in offs], offs, shape=(self.n, self.n), format="csr")

    def dense(self, force: bool = False) -> np.ndarray:
        if self.n > DENSE_LIMIT and not force:
            raise MemoryError(f"dense conversion refused for N={self.n} > {DENSE_LIMIT}")
        return self.tocsr().toarray()

    def diagonal(self) -> np.ndarray:
        return self.bands.get(0, np.zeros(self.n)).copy()

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.tocsr() @ x

    @property
    def bandwidth(self) -> int:
        return max(abs(o) for o in self.bands)


def _interior_index(stencil: Stencil):
    """(interior flat positions in the full array, full -> interior index map)."""
    mask = interior_mask(stencil.grid)
    full = np.flatnonzero(mask)
    lookup = -np.ones(stencil.grid.size, dtype=np.int64)
    lookup[full] = np.arange(full.size)
    return full, lookup


def assemble_matrix(stencil: Stencil) -> StructuredMatrix:
    """Global matrix of the stencil; boundary links are folded and absent."""
    full, lookup = _interior_index(stencil)
    n = full.size
    rows, cols, vals = [np.arange(n)], [np.arange(n)], [stencil.center[full]]
    for s, off in enumerate(stencil.offsets):
        nb = lookup[full + off]
        keep = nb >= 0
        rows.append(np.flatnonzero(keep))
        cols.append(nb[keep])
        vals.append(-stencil.coef[s, full[keep]])
    m = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    return StructuredMatrix.from_sparse(m)


def upstream_splitting(stencil: Stencil, decomp: Decomposition, k: int,
                       sched: SweepSchedule | None = None) -> sp.csr_matrix:
    """``G_up(k)``: upstream couplings per node with their sums on the diagonal."""
    sched = sched or make_schedule(decomp)
    full, lookup = _interior_index(stencil)
    owner = decomp.owner_map()[full]
    d = stencil.dim
    signs = np.array([sched.direction(b.index, k).signs for b in decomp.boxes], dtype=np.int64)
    rows, cols, vals = [], [], []
    diag = np.zeros(full.size)
    for axis in range(d):
        s = signs[owner, axis]
        # upstream slot: minus side when the box sweeps upward on this axis
        slot = np.where(s > 0, 2 * axis, 2 * axis + 1)
        link = stencil.links[slot, full]
        diag += link
        nb = lookup[full + stencil.offsets[slot]]
        keep = nb >= 0
        rows.append(np.flatnonzero(keep))
        cols.append(nb[keep])
        vals.append(-link[keep])
    n = full.size
    rows.append(np.arange(n))
    cols.append(np.arange(n))
    vals.append(diag)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))


@dataclass
class TriangularCertificate:
    ok: bool
    xi: tuple
    choices: tuple
    violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_alt_block_triangular(m, xi) -> TriangularCertificate:
    """Check the multilevel block structure of ``m`` under block sizes ``xi``.

    Level ``i`` splits the trailing submatrix that starts at
    ``sum(xi[:i])`` into a leading ``xi[i]`` block and the rest; the level is
    ``lower`` when the block row to the right of the leading block is zero
    and ``upper`` when the block column below it is zero. The last level
    records whether the remaining block is itself triangular. On failure
    ``violation`` holds ``(level, (row, col))`` of an offending entry in each
    off-diagonal part.
    """
    a = m.toarray() if sp.issparse(m) else np.asarray(m)
    if isinstance(m, StructuredMatrix):
        a = m.dense(force=True)
    n = a.shape[0]
    xi = tuple(int(x) for x in xi)
    if sum(xi) != n or any(x < 1 for x in xi):
        raise ValueError(f"splitting set must be positive and sum to {n}")
    choices = []
    o = 0
    for level, size in enumerate(xi):
        e = o + size
        if e == n:
            blk = a[o:, o:]
            if not np.any(np.triu(blk, 1)):
                choices.append("lower")
            elif not np.any(np.tril(blk, -1)):
                choices.append("upper")
            else:
                choices.append("block")
            break
        right = a[o:e, e:]
        below = a[e:, o:e]
        if not np.any(right):
            choices.append("lower")
        elif not np.any(below):
            choices.append("upper")
        else:
            r = np.argwhere(right)[0]
            c = np.argwhere(below)[0]
            return TriangularCertificate(False, xi, tuple(choices),
                                         (level, (int(o + r[0]), int(e + r[1])), (int(e + c[0]), int(o + c[1]))))
        o = e
    return TriangularCertificate(True, xi, tuple(choices))


def greedy_splitting_set(m) -> tuple:
    """Finest splitting set found by taking the smallest admissible leading block per level."""
    a = m.toarray() if sp.issparse(m) else np.asarray(m)
    n = a.shape[0]
    nz = a != 0
    xi, o = [], 0
    while o < n:
        size = n - o
        for s in range(1, n - o):
            e = o + s
            if not nz[o:e, e:].any() or not nz[e:, o:e].any():
                size = s
                break
        xi.append(size)
        o += size
    return tuple(xi)


def _diagonal_blocks(a: np.ndarray, xi) -> list:
    out, o = [], 0
    for s in xi:
        out.append(a[o:o + s, o:o + s])
        o += s
    return out


@dataclass
class SplitAnalysis:
    """One diagonal's splitting ``A = G_first + beta I + G_second``."""

    dim: int
    diagonal: int
    iteration: int
    a: sp.csr_matrix
    beta: float
    g_first: sp.csr_matrix
    g_second: sp.csr_matrix
    lam_first: np.ndarray
    lam_second: np.ndarray
    perm_first: np.ndarray
    xi_first: tuple
    perm_second: np.ndarray
    xi_second: tuple
    identity_error: float
    slot_first: np.ndarray = field(repr=False, default=None)
    slot_second: np.ndarray = field(repr=False, default=None)
    certificates: dict = field(default_factory=dict)

    @property
    def cycle_length(self) -> int:
        return 2 ** self.dim

    @property
    def b(self) -> np.ndarray:
        return self.a.diagonal()

    @property
    def matrices(self) -> dict:
        return {"first": self.g_first, "second": self.g_second}


def _update_order(stencil: Stencil, engine: ParallelEngine, k: int):
    """Permutation (interior indices) following the parallel update order, with unit sizes.

    Coupled sets come first, layered by their position along each box's
    wavefront, then the remaining nodes box by box.
    """
    _, lookup = _interior_index(stencil)
    prog = engine.program(k)
    seen = np.zeros(lookup.max() + 1, dtype=bool)
    units = []
    for b in engine.decomp.boxes:
        for sk in prog.skeletons[b.id]:
            idx = lookup[np.asarray(sk.nodes)]
            if not seen[idx[0]]:
                units.append(idx)
                seen[idx] = True
    # sets only depend on shallower sets, so order them by wavefront depth
    order, xi = [], []
    for u in sorted(units, key=lambda u: _set_depth(stencil, engine, k, u)):
        order.extend(u.tolist())
        xi.append(u.size)
    for b in engine.decomp.boxes:
        inner = lookup[prog.int_global[prog.box_int_ptr[b.id]:prog.box_int_ptr[b.id + 1]]]
        order.extend(inner.tolist())
        xi.extend([1] * inner.size)
    return np.asarray(order, dtype=np.int64), tuple(xi)


def _set_depth(stencil, engine, k, unit):
    full, _ = _interior_index(stencil)
    grid = stencil.grid
    g = full[unit[0]]
    coords = [(g // s) % n - 1 for s, n in zip(grid.strides, grid.shape)]
    owner = engine.decomp.owner_map()[g]
    box = engine.decomp.boxes[owner]
    sig = engine.schedule.direction(box.index, k).signs
    depth = 0
    for c, lo, hi, s in zip(coords, box.lo, box.hi, sig):
        depth += (c - lo) if s > 0 else (hi - 1 - c)
    return depth


def _direction_slots(stencil, decomp, sched, k) -> np.ndarray:
    """Per interior node: position of its box's orientation in the cycle order."""
    full, _ = _interior_index(stencil)
    names = [d.name for d in all_directions(stencil.dim)]
    by_box = np.array([names.index(sched.direction(b.index, k).name) for b in decomp.boxes])
    return by_box[decomp.owner_map()[full]]


def build_splitting(stencil: Stencil, decomp: Decomposition, diagonal: int = 0,
                    sched: SweepSchedule | None = None, engine: ParallelEngine | None = None) -> SplitAnalysis:
    """Splitting for schedule iterations ``2*diagonal`` (first) and ``2*diagonal + 1`` (second)."""
    sched = sched or make_schedule(decomp)
    if not 0 <= diagonal < sched.cycle_length // 2:
        raise ValueError(f"diagonal must be in [0, {sched.cycle_length // 2})")
    if decomp.grid.shape != stencil.grid.shape:
        raise ValueError("decomposition is not aligned with the stencil grid")
    engine = engine or ParallelEngine(stencil, decomp, sched)
    k = 2 * diagonal
    a = assemble_matrix(stencil).tocsr()
    g1 = upstream_splitting(stencil, decomp, k, sched)
    g2 = upstream_splitting(stencil, decomp, k + 1, sched)
    n = a.shape[0]
    resid = a - g1 - g2 - stencil.beta * sp.identity(n, format="csr")
    scale = max(1.0, abs(a).max())
    p1, xi1 = _update_order(stencil, engine, k)
    p2, xi2 = _update_order(stencil, engine, k + 1)
    split = SplitAnalysis(stencil.dim, diagonal, k, a, stencil.beta, g1, g2, g1.diagonal(), g2.diagonal(),
                          p1, xi1, p2, xi2, float(abs(resid).max() / scale) if resid.nnz else 0.0,
                          _direction_slots(stencil, decomp, sched, k),
                          _direction_slots(stencil, decomp, sched, k + 1))
    for name, g, p, xi in (("first", g1, p1, xi1), ("second", g2, p2, xi2)):
        split.certificates[name] = is_alt_block_triangular(g[p][:, p], xi)
        split.certificates[name + "-natural"] = is_alt_block_triangular(g, greedy_splitting_set(g.toarray()))
    return split


def cycle_splittings(stencil: Stencil, decomp: Decomposition, sched: SweepSchedule | None = None) -> list:
    sched = sched or make_schedule(decomp)
    engine = ParallelEngine(stencil, decomp, sched)
    return [build_splitting(stencil, decomp, j, sched, engine) for j in range(sched.cycle_length // 2)]


def block_spectrum(m, perm, xi) -> np.ndarray:
    """Eigenvalues of ``m`` read off the diagonal blocks of its permuted form.

    Valid when ``m[perm][:, perm]`` is alt-block-triangular under ``xi``;
    otherwise falls back to a dense eigensolve. Reading the blocks avoids
    the large rounding errors dense solvers make on defective triangular
    matrices with repeated diagonal entries.
    """
    a = m.toarray() if sp.issparse(m) else np.asarray(m)
    pa = a[perm][:, perm]
    if not is_alt_block_triangular(pa, xi):
        return np.linalg.eigvals(a)
    return np.concatenate([np.diag(b).astype(complex) if b.shape[0] == 1 else np.linalg.eigvals(b)
                           for b in _diagonal_blocks(pa, xi)])


def eigen_diag_check(split: SplitAnalysis, tol: float = 1e-8) -> dict:
    """Compare each G's spectrum with its diagonal entries.

    The spectrum is taken from the diagonal blocks of the update-order
    certificate. ``diagonal_ok`` holds when it equals the diagonal multiset
    to ``tol`` (relative to the largest diagonal entry); this fails as soon
    as a G contains a coupled block, whose spectrum includes zero.
    """
    out = {}
    for name, g, p, xi in (("first", split.g_first, split.perm_first, split.xi_first),
                           ("second", split.g_second, split.perm_second, split.xi_second)):
        if g.shape[0] > DENSE_LIMIT:
            raise MemoryError("eigenvalue check needs N <= %d" % DENSE_LIMIT)
        ev = block_spectrum(g, p, xi)
        diag = g.diagonal()
        scale = max(1.0, float(np.max(np.abs(diag))))
        dev = _multiset_distance(ev, diag.astype(complex))
        out[name] = {
            "eigenvalues": ev,
            "diagonal": diag,
            "certified": bool(split.certificates[name]),
            "largest_block": max(xi),
            "diagonal_deviation": dev / scale,
            "diagonal_ok": dev <= tol * scale,
            "diagonal_positive": bool(np.all(diag > 0)),
        }
    return out


def _multiset_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Max deviation after matching sorted spectra (by real, then imaginary part)."""
    x = np.sort_complex(np.asarray(x, dtype=complex))
    y = np.sort_complex(np.asarray(y, dtype=complex))
    if x.size != y.size:
        return float("inf")
    return float(np.max(np.abs(x - y))) if x.size else 0.0


def _cycle_values(omega, ncyc: int) -> list:
    if isinstance(omega, RelaxationSet):
        ws = list(omega.values)
    else:
        ws = list(np.atleast_1d(np.asarray(omega, dtype=np.float64)))
        if len(ws) == 1:
            ws = ws * ncyc
    if len(ws) != ncyc:
        raise ValueError(f"need 1 or {ncyc} relaxation factors for this cycle")
    return ws


def node_omegas(split: SplitAnalysis, omega, second: bool = False, mode: str = "direction") -> np.ndarray:
    """Relaxation factor of every interior node for the first or second half-step."""
    return _node_omegas(split, _cycle_values(omega, split.cycle_length), second, mode)


def _node_omegas(split: SplitAnalysis, ws, second: bool, mode: str) -> np.ndarray:
    k = split.iteration + int(second)
    if mode == "direction":
        slots = split.slot_second if second else split.slot_first
        return np.asarray(ws, dtype=np.float64)[slots]
    if mode == "iteration":
        return np.full(split.a.shape[0], float(ws[k]))
    raise ValueError(f"unknown omega mode {mode!r}; expected one of {OMEGA_MODES}")


def _factors(split: SplitAnalysis, w: np.ndarray, second: bool):
    """(M, N) for the first or second half-step of one diagonal with node-wise factors ``w``."""
    b = split.b
    if second:
        gi, li, ge, le = split.g_second, split.lam_second, split.g_first, split.lam_first
    else:
        gi, li, ge, le = split.g_first, split.lam_first, split.g_second, split.lam_second
    wd = sp.diags(w)
    m = sp.diags(b - w * li) + wd @ gi
    n = sp.diags((1.0 - w) * b + w * le) - wd @ ge
    return m.tocsc(), n.tocsr()


def matrix_iteration_step(split: SplitAnalysis, omega, u: np.ndarray, f: np.ndarray,
                          second: bool = False, mode: str = "direction") -> np.ndarray:
    """Half-step of the splitting recurrence on interior vectors.

    ``omega`` is a :class:`RelaxationSet`, a shared scalar or values in
    schedule-cycle order.
    """
    w = _node_omegas(split, _cycle_values(omega, split.cycle_length), second, mode)
    m, n = _factors(split, w, second)
    return spla.spsolve(m, n @ u + w * f)


@dataclass
class IterationMatrixReport:
    t: np.ndarray | None
    rho: float
    bound: float
    converges: bool
    within_bound: bool
    factor_spectra: list
    identities_ok: bool
    identity_deviation: float


def spectral_radius(op, n: int, dense: np.ndarray | None = None, tol: float = 1e-10) -> float:
    if dense is not None:
        return float(np.max(np.abs(np.linalg.eigvals(dense))))
    lin = spla.LinearOperator((n, n), matvec=op, dtype=np.float64)
    vals = spla.eigs(lin, k=1, which="LM", tol=tol, return_eigenvectors=False, maxiter=20000)
    return float(np.max(np.abs(vals)))


def iteration_matrix(splits, omega, mode: str = "direction", dense: bool | None = None) -> IterationMatrixReport:
    """Cycle iteration matrix ``T`` (two factors per diagonal) and its spectral radius.

    ``omega`` is a :class:`RelaxationSet` or values in schedule-cycle order.
    The factor spectra are read from the certificate blocks and compared
    with ``b`` (implicit side) and ``(1 - w) b`` (explicit side).
    """
    splits = list(splits) if isinstance(splits, (list, tuple)) else [splits]
    n = splits[0].a.shape[0]
    ncyc = splits[0].cycle_length
    if len(splits) != ncyc // 2:
        raise ValueError(f"a full cycle needs {ncyc // 2} splittings")
    ws = _cycle_values(omega, ncyc)
    steps, spectra = [], []
    worst = 0.0
    for split in splits:
        for h in (0, 1):
            w = _node_omegas(split, ws, bool(h), mode)
            m, nn = _factors(split, w, bool(h))
            steps.append((m, nn))
            if n <= DENSE_LIMIT:
                if h:
                    pm, xm, pn, xn = split.perm_second, split.xi_second, split.perm_first, split.xi_first
                else:
                    pm, xm, pn, xn = split.perm_first, split.xi_first, split.perm_second, split.xi_second
                em = block_spectrum(m, pm, xm)
                en = block_spectrum(nn, pn, xn)
                b = split.b
                dev = max(_multiset_distance(em, b.astype(complex)),
                          _multiset_distance(en, ((1.0 - w) * b).astype(complex)))
                worst = max(worst, dev / max(1.0, float(np.max(np.abs(b)))))
                spectra.append({"plus": em, "minus": en, "omega": w})
    use_dense = n <= DENSE_LIMIT if dense is None else dense
    bound = float(np.prod([abs(1.0 - w) for w in ws]))
    if use_dense:
        t = np.eye(n)
        for m, nn in steps:
            t = scipy.linalg.solve(m.toarray(), nn.toarray() @ t)
        rho = spectral_radius(None, n, dense=t)
    else:
        t = None
        lus = [(spla.splu(m), nn) for m, nn in steps]

        def apply(x):
            for lu, nn in lus:
                x = lu.solve(nn @ x)
            return x

        rho = spectral_radius(apply, n)
    return IterationMatrixReport(t, rho, bound, rho < 1.0, rho <= bound + 1e-12, spectra,
                                 worst <= 1e-8, worst)


@dataclass
class IluFactors:
    lower: sp.csr_matrix
    upper: sp.csr_matrix
    zero_pivot: bool = False


def ilu0_factor(m) -> IluFactors:
    """Zero fill-in incomplete LU; ``lower`` has a unit diagonal."""
    a = (m.tocsr() if isinstance(m, StructuredMatrix) else sp.csr_matrix(m)).astype(np.float64)
    # the pattern is the set of nonzeros, not whatever the storage happens to hold
    a.eliminate_zeros()
    a.sort_indices()
    n = a.shape[0]
    indptr, indices = a.indptr, a.indices
    data = a.data.copy()
    diag_pos = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        row = indices[indptr[i]:indptr[i + 1]]
        hit = np.flatnonzero(row == i)
        if hit.size:
            diag_pos[i] = indptr[i] + hit[0]
    if np.any(diag_pos < 0):
        raise ValueError("matrix has a structurally zero diagonal")
    zero_pivot = False
    for i in range(1, n):
        start, end = indptr[i], indptr[i + 1]
        pos = {int(indices[t]): t for t in range(start, end)}
        for t in range(start, end):
            kcol = int(indices[t])
            if kcol >= i:
                break
            piv = data[diag_pos[kcol]]
            if piv == 0.0:
                zero_pivot = True
                continue
            data[t] /= piv
            lik = data[t]
            for s in range(diag_pos[kcol] + 1, indptr[kcol + 1]):
                j = int(indices[s])
                if j in pos:
                    data[pos[j]] -= lik * data[s]
    if np.any(data[diag_pos] == 0.0):
        zero_pivot = True
    lu = sp.csr_matrix((data, indices.copy(), indptr.copy()), shape=(n, n))
    lower = sp.tril(lu, -1, format="csr") + sp.identity(n, format="csr")
    upper = sp.triu(lu, 0, format="csr")
    return IluFactors(lower, upper, zero_pivot)


def _richardson(a, solve, b, tol=1e-8, max_iters=20000):
    x = np.zeros_like(b)
    nb = np.linalg.norm(b)
    for it in range(1, max_iters + 1):
        r = b - a @ x
        if np.linalg.norm(r) <= tol * nb:
            return it - 1, True
        x = x + solve(r)
        if not np.all(np.isfinite(x)):
            return it, False
    return max_iters, bool(np.linalg.norm(b - a @ x) <= tol * nb)


def ssgs_vs_ilu0_report(m, tol: float = 1e-8, max_iters: int = 20000, seed: int = 0) -> dict:
    """Compare ``(D + L) D^-1 (D + U)`` with the ILU(0) product and run both as Richardson preconditioners."""
    a = (m.tocsr() if isinstance(m, StructuredMatrix) else sp.csr_matrix(m)).astype(np.float64)
    d = sp.diags(a.diagonal())
    low = sp.tril(a, -1)
    up = sp.triu(a, 1)
    dl = (d + low).tocsr()
    du = (d + up).tocsr()
    m_ssgs = (dl @ sp.diags(1.0 / a.diagonal()) @ du).tocsr()
    f = ilu0_factor(a)
    m_ilu = (f.lower @ f.upper).tocsr()
    b = np.random.default_rng(seed).standard_normal(a.shape[0])

    def solve_ssgs(r):
        y = spla.spsolve_triangular(dl, r, lower=True)
        return spla.spsolve_triangular(du, a.diagonal() * y, lower=False)

    def solve_ilu(r):
        y = spla.spsolve_triangular(f.lower, r, lower=True, unit_diagonal=True)
        return spla.spsolve_triangular(f.upper, y, lower=False)

    it_s, ok_s = _richardson(a, solve_ssgs, b, tol, max_iters)
    it_i, ok_i = _richardson(a, solve_ilu, b, tol, max_iters)
    diff = m_ssgs - m_ilu
    return {
        "n": a.shape[0],
        "discrepancy_fro": float(sp.linalg.norm(diff)) if diff.nnz else 0.0,
        "discrepancy_max": float(abs(diff).max()) if diff.nnz else 0.0,
        "ssgs_vs_a_fro": float(sp.linalg.norm(m_ssgs - a)),
        "ilu0_vs_a_fro": float(sp.linalg.norm(m_ilu - a)),
        "ssgs_richardson_iterations": it_s,
        "ssgs_richardson_converged": ok_s,
        "ilu0_richardson_iterations": it_i,
        "ilu0_richardson_converged": ok_i,
        "zero_pivot": f.zero_pivot,
    }


def dump_matrix(m, path) -> None:
    """Write a matrix in MatrixMarket coordinate text format."""
    a = m.tocsr() if isinstance(m, StructuredMatrix) else sp.csr_matrix(m)
    scipy.io.mmwrite(str(path), sp.coo_matrix(a))


def nine_point_matrix(nx: int, ny: int, rng: np.random.Generator, margin: float = 0.1) -> sp.csr_matrix:
    """Random strictly diagonally dominant matrix with a nine-point molecule on an nx-by-ny grid."""
    n = nx * ny
    rows, cols, vals = [], [], []
    diag = np.zeros(n)
    for j in range(ny):
        for i in range(nx):
            p = i + nx * j
            for dj in (-1, 0, 1):
                for di in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    c = rng.uniform(0.1, 1.0)
                    diag[p] += c
                    ii, jj = i + di, j + dj
                    if 0 <= ii < nx and 0 <= jj < ny:
                        rows.append(p)
                        cols.append(ii + nx * jj)
                        vals.append(-c)
    rows += list(range(n))
    cols += list(range(n))
    vals += list(diag * (1.0 + margin))
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def structured_splitting(a: sp.csr_matrix, nx: int, ny: int, parts, k: int, sched: SweepSchedule):
    """Upstream/downstream split of a general molecule matrix under the box schedule.

    A coupling ``(p, q)`` is upstream when the grid offset from ``p`` to
    ``q`` points against ``p``'s sweep orientation on every axis where it is
    nonzero; mixed offsets (e.g. the NW neighbor during a SW sweep) go to
    the explicit side. Off-diagonal magnitudes are carried onto the
    diagonal of each half, and the remainder of the diagonal is the shift.
    """
    from .grid import balanced_sizes

    cuts = [np.concatenate([[0], np.cumsum(balanced_sizes(n, p))]) for n, p in zip((nx, ny), parts)]
    n = nx * ny
    bx = np.searchsorted(cuts[0], np.arange(nx), side="right") - 1
    by = np.searchsorted(cuts[1], np.arange(ny), side="right") - 1
    coo = a.tocoo()
    up_r, up_c, up_v = [], [], []
    lam_up = np.zeros(n)
    lam_dn = np.zeros(n)
    dn_r, dn_c, dn_v = [], [], []
    for p, q, v in zip(coo.row, coo.col, coo.data):
        if p == q:
            continue
        i, j = p % nx, p // nx
        di, dj = q % nx - i, q // nx - j
        sig = sched.direction((bx[i], by[j]), k).signs
        upstream = all(d == 0 or np.sign(d) == -s for d, s in zip((di, dj), sig))
        if upstream:
            up_r.append(p), up_c.append(q), up_v.append(v)
            lam_up[p] += -v
        else:
            dn_r.append(p), dn_c.append(q), dn_v.append(v)
            lam_dn[p] += -v
    g_up = sp.csr_matrix((up_v, (up_r, up_c)), shape=(n, n)) + sp.diags(lam_up)
    g_dn = sp.csr_matrix((dn_v, (dn_r, dn_c)), shape=(n, n)) + sp.diags(lam_dn)
    shift = a.diagonal() - lam_up - lam_dn
    return g_up.tocsr(), g_dn.tocsr(), shift


def structured_radius(a: sp.csr_matrix, nx: int, ny: int, parts, omega) -> float:
    """Spectral radius of the four-step cycle built from :func:`structured_splitting`.

    ``omega`` holds one factor per schedule iteration (or one shared value).
    Each half-step is ``(diag(b) + w U_k) x' = ((1 - w) diag(b) - w D_k) x``
    written through the Lambda-shifted G factors, with ``U_k``/``D_k`` the
    upstream/downstream off-diagonal parts.
    """
    sched = SweepSchedule(2, tuple(parts))
    ws = _cycle_values(omega, 4)
    b = a.diagonal()
    n = nx * ny
    if n > DENSE_LIMIT:
        raise MemoryError("structured_radius needs N <= %d" % DENSE_LIMIT)
    t = np.eye(n)
    for k, w in enumerate(ws):
        g_up, g_dn, _ = structured_splitting(a, nx, ny, parts, k, sched)
        m = np.diag(b - w * g_up.diagonal()) + w * g_up.toarray()
        nn = np.diag((1.0 - w) * b + w * g_dn.diagonal()) - w * g_dn.toarray()
        t = scipy.linalg.solve(m, nn @ t)
    return spectral_radius(None, n, dense=t)
