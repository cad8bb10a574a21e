"""Tensor-product grids, box decompositions, sweep schedules and frontal orders.

Index conventions used throughout the package:

* A grid of ``R`` nodes per axis has ``R - 2`` interior nodes per axis.
  Interior index ``i`` (0-based) lives at full-array position ``i + 1``.
* Full arrays are flattened with the first axis fastest, so node
  ``(i, j, k)`` sits at ``i + R0 * (j + R1 * k)``.
* A sweep orientation is ``+1`` along an axis when the sweep starts at the
  low-index side of a box and ``-1`` when it starts at the high side.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StructuredGrid",
    "Box",
    "Decomposition",
    "SweepDirection",
    "SweepSchedule",
    "build_uniform_grid",
    "decompose",
    "schedule",
    "frontal_order",
    "balanced_sizes",
]


@dataclass(frozen=True)
class StructuredGrid:
    """Cartesian tensor-product grid; ``coords[a]`` includes both boundary nodes."""

    coords: tuple

    def __post_init__(self):
        if not 1 <= len(self.coords) <= 3:
            raise ValueError("grid dimension must be 1, 2 or 3")
        fixed = []
        for axis, c in enumerate(self.coords):
            c = np.asarray(c, dtype=np.float64)
            if c.ndim != 1 or c.size < 3:
                raise ValueError(f"axis {axis} needs at least 3 nodes")
            if np.any(np.diff(c) <= 0.0):
                raise ValueError(f"axis {axis} coordinates must be strictly increasing")
            c.setflags(write=False)
            fixed.append(c)
        object.__setattr__(self, "coords", tuple(fixed))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def shape(self) -> tuple:
        """Total nodes per axis, boundary included."""
        return tuple(c.size for c in self.coords)

    @property
    def interior_shape(self) -> tuple:
        return tuple(c.size - 2 for c in self.coords)

    @property
    def spacings(self) -> tuple:
        return tuple(np.diff(c) for c in self.coords)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def interior_size(self) -> int:
        return int(np.prod(self.interior_shape))

    @property
    def strides(self) -> tuple:
        """Flat-index strides of the full array, first axis fastest."""
        out, s = [], 1
        for n in self.shape:
            out.append(s)
            s *= n
        return tuple(out)

    def mesh(self) -> list:
        """Per-axis coordinate arrays broadcast to the full (reversed-axis) shape."""
        return np.meshgrid(*self.coords[::-1], indexing="ij")[::-1]


def build_uniform_grid(dim: int, nodes_per_axis, extents) -> StructuredGrid:
    """Equispaced grid from 0 to ``extents[a]`` with ``nodes_per_axis[a]`` nodes."""
    nodes = list(nodes_per_axis)
    ext = list(extents)
    if dim not in (1, 2, 3) or len(nodes) != dim or len(ext) != dim:
        raise ValueError("dim must be 1..3 and match the per-axis lists")
    for n, L in zip(nodes, ext):
        if int(n) < 3:
            raise ValueError(f"need at least 3 nodes per axis, got {n}")
        if not L > 0:
            raise ValueError(f"extent must be positive, got {L}")
    return StructuredGrid(tuple(np.linspace(0.0, float(L), int(n)) for n, L in zip(nodes, ext)))


def balanced_sizes(n: int, parts: int) -> list:
    """Split ``n`` into ``parts`` sizes differing by at most one; earlier parts are larger."""
    if not 1 <= parts <= n:
        raise ValueError(f"cannot split {n} nodes into {parts} parts")
    q, r = divmod(n, parts)
    return [q + 1] * r + [q] * (parts - r)


@dataclass(frozen=True)
class Box:
    """Sub-domain box over interior indices: ``lo`` inclusive, ``hi`` exclusive."""

    id: int
    index: tuple
    lo: tuple
    hi: tuple

    @property
    def shape(self) -> tuple:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))


@dataclass(frozen=True)
class Decomposition:
    grid: StructuredGrid
    parts: tuple
    cuts: tuple
    boxes: tuple
    neighbors: dict = field(repr=False)

    @property
    def nboxes(self) -> int:
        return len(self.boxes)

    def box_id(self, index) -> int:
        return _box_id(index, self.parts)

    def owner_map(self) -> np.ndarray:
        """Box id for every full-array node (-1 on the boundary), flat order."""
        owner = -np.ones(self.grid.shape[::-1], dtype=np.int64)
        for b in self.boxes:
            sl = tuple(slice(l + 1, h + 1) for l, h in zip(b.lo, b.hi))[::-1]
            owner[sl] = b.id
        return owner.ravel()


def decompose(grid: StructuredGrid, parts_per_axis) -> Decomposition:
    """Cartesian split of the interior nodes into ``prod(parts)`` balanced boxes.

    Boxes are numbered with the first axis fastest, starting from the
    low corner.
    """
    parts = tuple(int(p) for p in parts_per_axis)
    if len(parts) != grid.dim:
        raise ValueError("one part count per axis is required")
    cuts = []
    for n, p in zip(grid.interior_shape, parts):
        cuts.append(tuple(int(c) for c in np.concatenate([[0], np.cumsum(balanced_sizes(n, p))])))
    boxes = []
    for bid, rev in enumerate(itertools.product(*[range(p) for p in parts[::-1]])):
        idx = rev[::-1]
        lo = tuple(cuts[a][idx[a]] for a in range(grid.dim))
        hi = tuple(cuts[a][idx[a] + 1] for a in range(grid.dim))
        boxes.append(Box(bid, idx, lo, hi))
    neighbors = {}
    for b in boxes:
        by_degree = {1: [], 2: [], 3: []}
        for off in itertools.product((-1, 0, 1), repeat=grid.dim):
            deg = sum(o != 0 for o in off)
            if deg == 0:
                continue
            nidx = tuple(i + o for i, o in zip(b.index, off))
            if all(0 <= i < p for i, p in zip(nidx, parts)):
                by_degree[deg].append(_box_id(nidx, parts))
        neighbors[b.id] = {d: tuple(v) for d, v in by_degree.items() if d <= grid.dim}
    return Decomposition(grid, parts, tuple(cuts), tuple(boxes), neighbors)


def _box_id(index, parts) -> int:
    bid, mul = 0, 1
    for i, p in zip(index, parts):
        bid += i * mul
        mul *= p
    return bid


_NAMES = {
    1: {(1,): "LR", (-1,): "RL"},
    2: {(1, 1): "SW", (-1, 1): "SE", (1, -1): "NW", (-1, -1): "NE"},
    3: {
        (1, 1, 1): "BSW", (-1, -1, -1): "FNE",
        (-1, -1, 1): "BNE", (1, 1, -1): "FSW",
        (1, -1, 1): "BNW", (-1, 1, -1): "FSE",
        (-1, 1, 1): "BSE", (1, -1, -1): "FNW",
    },
}
_BY_NAME = {name: signs for table in _NAMES.values() for signs, name in table.items()}

# Base orientation of box 0 over one schedule cycle; odd positions reverse
# the preceding even one.
_CYCLES = {
    1: ("LR", "RL"),
    2: ("NE", "SW", "NW", "SE"),
    3: ("FNE", "BSW", "FSW", "BNE", "FSE", "BNW", "FNW", "BSE"),
}


@dataclass(frozen=True)
class SweepDirection:
    """Signed orientation per axis, named after the corner the sweep starts from."""

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not 1 <= len(signs) <= 3 or any(s not in (-1, 1) for s in signs):
            raise ValueError(f"invalid orientation {self.signs}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def named(cls, name: str) -> "SweepDirection":
        try:
            return cls(_BY_NAME[name.upper()])
        except KeyError:
            raise ValueError(f"unknown sweep direction {name!r}") from None

    @property
    def name(self) -> str:
        return _NAMES[len(self.signs)][self.signs]

    @property
    def dim(self) -> int:
        return len(self.signs)

    def reversed(self) -> "SweepDirection":
        return SweepDirection(tuple(-s for s in self.signs))

    def flipped(self, axes) -> "SweepDirection":
        return SweepDirection(tuple(-s if a in axes else s for a, s in enumerate(self.signs)))

    def __str__(self) -> str:
        return self.name


def all_directions(dim: int) -> tuple:
    """The 2^d directions in schedule-cycle order."""
    return tuple(SweepDirection.named(n) for n in _CYCLES[dim])


@dataclass(frozen=True)
class SweepSchedule:
    """Parity schedule: box orientation flips on every axis where its box index is odd."""

    dim: int
    parts: tuple

    @property
    def cycle_length(self) -> int:
        return 2 ** self.dim

    def base(self, k: int) -> SweepDirection:
        return SweepDirection.named(_CYCLES[self.dim][k % self.cycle_length])

    def direction(self, box_index, k: int) -> SweepDirection:
        base = self.base(k).signs
        return SweepDirection(tuple(s if i % 2 == 0 else -s for s, i in zip(base, box_index)))

    def directions(self, decomp: Decomposition, k: int) -> list:
        return [self.direction(b.index, k) for b in decomp.boxes]


def schedule(decomp: Decomposition, dim: int | None = None) -> SweepSchedule:
    dim = decomp.grid.dim if dim is None else dim
    if dim != decomp.grid.dim:
        raise ValueError("schedule dimension must match the decomposition")
    return SweepSchedule(dim, decomp.parts)


def frontal_order(box, direction: SweepDirection) -> np.ndarray:
    """Nodes of ``box`` grouped by wavefronts from the direction's starting corner.

    ``box`` is a :class:`Box` or a ``(lo, hi)`` pair. Rows of the result are
    node indices in the same coordinates as ``lo``. Within a wavefront the
    order is ascending first-axis distance from the start corner, then
    second-axis distance.
    """
    lo, hi = (box.lo, box.hi) if isinstance(box, Box) else box
    shape = tuple(h - l for l, h in zip(lo, hi))
    if len(shape) != direction.dim or any(n < 1 for n in shape):
        raise ValueError("box must be non-empty and match the direction's dimension")
    frame = np.indices(shape).reshape(len(shape), -1).T
    keys = [frame[:, a] for a in reversed(range(len(shape)))] + [frame.sum(axis=1)]
    frame = frame[np.lexsort(keys)]
    out = np.empty_like(frame)
    for a, (l, n, s) in enumerate(zip(lo, shape, direction.signs)):
        out[:, a] = l + frame[:, a] if s > 0 else l + n - 1 - frame[:, a]
    return out
