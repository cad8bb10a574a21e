import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mfsor.grid import (
    StructuredGrid,
    SweepDirection,
    SweepSchedule,
    all_directions,
    balanced_sizes,
    build_uniform_grid,
    decompose,
    frontal_order,
    schedule,
)


def test_uniform_grid_three_nodes():
    g = build_uniform_grid(1, [3], [1.0])
    np.testing.assert_array_equal(g.coords[0], [0.0, 0.5, 1.0])


def test_uniform_spacing_41():
    g = build_uniform_grid(1, [41], [1.0])
    np.testing.assert_allclose(g.spacings[0], 1 / 40, rtol=0, atol=1e-15)


def test_interior_shape_51():
    assert build_uniform_grid(2, [51, 51], [1.0, 1.0]).interior_shape == (49, 49)


@pytest.mark.parametrize("coords", [([0.0, 1.0],), ([0.0, 0.5, 0.5, 1.0],), ([0.0, 0.7, 0.3],)])
def test_grid_rejects_bad_axes(coords):
    with pytest.raises(ValueError):
        StructuredGrid(coords)


def test_grid_rejects_four_axes():
    with pytest.raises(ValueError):
        build_uniform_grid(4, [3] * 4, [1.0] * 4)


def test_balanced_split_two_parts():
    assert balanced_sizes(39, 2) == [20, 19]


def test_balanced_split_fourteen_parts():
    # remainder 39 - 14*2 = 11 goes to the first boxes
    assert balanced_sizes(39, 14) == [3] * 11 + [2] * 3


def test_balanced_split_rejects_too_many_parts():
    with pytest.raises(ValueError):
        balanced_sizes(3, 4)


def test_two_by_two_of_six_by_six():
    g = build_uniform_grid(2, [8, 8], [1.0, 1.0])
    d = decompose(g, (2, 2))
    assert [b.shape for b in d.boxes] == [(3, 3)] * 4
    assert [b.index for b in d.boxes] == [(0, 0), (1, 0), (0, 1), (1, 1)]


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.just(d), st.lists(st.integers(3, 12), min_size=d, max_size=d),
    st.lists(st.integers(1, 4), min_size=d, max_size=d))))
def test_boxes_partition_interior(case):
    d, res, parts = case
    g = build_uniform_grid(d, res, [1.0] * d)
    parts = [min(p, n) for p, n in zip(parts, g.interior_shape)]
    dec = decompose(g, parts)
    owner = dec.owner_map()
    interior = owner >= 0
    assert interior.sum() == g.interior_size
    assert sum(b.size for b in dec.boxes) == g.interior_size
    for a in range(d):
        ext = {b.shape[a] for b in dec.boxes}
        assert max(ext) - min(ext) <= 1
    for b in dec.boxes:
        assert len(dec.neighbors[b.id].get(1, ())) <= 2 * d
        total = sum(len(v) for v in dec.neighbors[b.id].values())
        assert total <= 3 ** d - 1


def test_direction_names_distinct():
    for d in (1, 2, 3):
        names = {x.name for x in all_directions(d)}
        assert len(names) == 2 ** d


def test_direction_roundtrip():
    assert SweepDirection.named("ne").signs == (-1, -1)
    assert SweepDirection.named("SW").reversed().name == "NE"
    with pytest.raises(ValueError):
        SweepDirection.named("XY")


def test_two_by_two_schedule_first_two_iterations():
    g = build_uniform_grid(2, [8, 8], [1.0, 1.0])
    dec = decompose(g, (2, 2))
    s = schedule(dec)
    assert [x.name for x in s.directions(dec, 0)] == ["NE", "NW", "SE", "SW"]
    assert [x.name for x in s.directions(dec, 1)] == ["SW", "SE", "NW", "NE"]


def test_single_box_cycles_all_corners():
    s = SweepSchedule(2, (1, 1))
    assert [s.direction((0, 0), k).name for k in range(4)] == ["NE", "SW", "NW", "SE"]
    assert s.direction((0, 0), 4).name == "NE"


@pytest.mark.parametrize("dim,parts", [(1, (5,)), (2, (3, 4)), (3, (2, 3, 2))])
def test_schedule_invariants(dim, parts):
    s = SweepSchedule(dim, parts)
    for k in range(2 ** dim):
        for idx in itertools.product(*[range(p) for p in parts]):
            here = s.direction(idx, k).signs
            for a in range(dim):
                if idx[a] + 1 < parts[a]:
                    nb = list(idx)
                    nb[a] += 1
                    assert s.direction(tuple(nb), k).signs[a] == -here[a]
            if k % 2 == 0:
                assert s.direction(idx, k + 1).signs == tuple(-x for x in here)
    # the pairs visit every diagonal once
    diagonals = {frozenset([s.base(2 * j).signs, s.base(2 * j + 1).signs]) for j in range(2 ** (dim - 1))}
    assert len(diagonals) == 2 ** (dim - 1)


def test_frontal_singleton():
    out = frontal_order(((0, 0), (1, 1)), SweepDirection.named("NE"))
    np.testing.assert_array_equal(out, [[0, 0]])


def _wavefronts(order, start):
    fronts = {}
    for p in map(tuple, order):
        fronts.setdefault(sum(abs(a - b) for a, b in zip(p, start)), []).append(p)
    return [set(v) for _, v in sorted(fronts.items())]


def test_frontal_three_by_three_wavefronts():
    out = frontal_order(((0, 0), (3, 3)), SweepDirection.named("SW"))
    assert _wavefronts(out, (0, 0)) == [{(0, 0)}, {(1, 0), (0, 1)}, {(2, 0), (1, 1), (0, 2)},
                                        {(2, 1), (1, 2)}, {(2, 2)}]
    # fronts are contiguous in the list
    sums = out.sum(axis=1)
    assert np.all(np.diff(sums) >= 0)


def test_frontal_ne_mirrors_sw():
    sw = frontal_order(((0, 0), (2, 3)), SweepDirection.named("SW"))
    ne = frontal_order(((0, 0), (2, 3)), SweepDirection.named("NE"))
    np.testing.assert_array_equal(ne, np.array([1, 2]) - sw)


def _causal(order, signs):
    seen = set()
    lo = order.min(axis=0)
    hi = order.max(axis=0)
    for p in map(tuple, order):
        for a, s in enumerate(signs):
            up = list(p)
            up[a] -= s
            if lo[a] <= up[a] <= hi[a]:
                assert tuple(up) in seen
        seen.add(p)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_frontal_causal_exhaustive(dim):
    for shape in itertools.product(range(1, 6), repeat=dim):
        lo = tuple(range(dim))
        hi = tuple(l + n for l, n in zip(lo, shape))
        for direction in all_directions(dim):
            out = frontal_order((lo, hi), direction)
            assert out.shape == (int(np.prod(shape)), dim)
            assert len({tuple(p) for p in out}) == out.shape[0]
            _causal(out, direction.signs)


def test_frontal_rejects_empty_box():
    with pytest.raises(ValueError):
        frontal_order(((0, 0), (0, 2)), SweepDirection.named("SW"))
