"""Experiment driver: model problem, table runs, relaxation-factor search, cache study."""
from __future__ import annotations

import csv
import io
import itertools
import statistics
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numba as nb
import numpy as np

from .discretization import ProblemSpec, Stencil, assemble, nodal_field
from .grid import StructuredGrid, build_uniform_grid, decompose
from .solvers_par import OMEGA_MODES, ParallelEngine, SingularCoupledSystem, solve_parallel
from .solvers_seq import SEQUENTIAL_METHODS, RelaxationSet, SolveReport, solve_sequential

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "TableRow",
    "OmegaSearchResult",
    "model_problem",
    "model_grid",
    "prepare",
    "run_config",
    "run_table",
    "write_csv",
    "markdown_table",
    "omega_search",
    "cache_bench",
    "split_parts",
    "SUITES",
    "suite",
]

CSV_COLUMNS = ("method", "dim", "resolution", "topology", "omega_values", "iterations", "l1_error",
               "seconds", "converged")
PARALLEL_METHODS = ("PGS", "PSOR", "PSOUR")


def _parse_ints(text, sep="x") -> tuple:
    if isinstance(text, (tuple, list)):
        return tuple(int(v) for v in text)
    if isinstance(text, (int, np.integer)):
        return (int(text),)
    text = str(text).strip().lower()
    if not text:
        return ()
    return tuple(int(v) for v in text.replace(",", sep).split(sep))


def _parse_floats(text) -> tuple:
    if isinstance(text, (tuple, list)):
        return tuple(float(v) for v in text)
    if isinstance(text, (int, float, np.floating)):
        return (float(text),)
    return tuple(float(v) for v in str(text).split(";") if v.strip())


def _fmt_float(v: float) -> str:
    return format(float(v), ".10g")


@dataclass(frozen=True)
class ExperimentConfig:
    """One solver run. ``topology`` is empty for sequential methods."""

    dimension: int
    resolution: tuple
    method: str
    topology: tuple = ()
    omega: tuple = (1.0,)
    threshold: float | None = None
    max_iterations: int = 100000
    workers: int | None = None
    repetitions: int = 1
    omega_mode: str = "direction"

    def __post_init__(self):
        d = int(self.dimension)
        if d not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        res = _parse_ints(self.resolution)
        if len(res) == 1:
            res = res * d
        if len(res) != d or any(r < 3 for r in res):
            raise ValueError(f"resolution needs {d} values >= 3")
        topo = _parse_ints(self.topology)
        if len(topo) == 1 and d > 1:
            topo = topo + (1,) * (d - 1)
        method = str(self.method).upper()
        if method in PARALLEL_METHODS:
            topo = topo or (1,) * d
            if len(topo) != d or any(p < 1 for p in topo):
                raise ValueError(f"topology needs {d} positive part counts")
        elif method in SEQUENTIAL_METHODS[d]:
            if topo and any(p != 1 for p in topo):
                raise ValueError(f"sequential method {method} takes no decomposition")
            topo = ()
        else:
            raise ValueError(f"unknown method {self.method!r} for dimension {d}")
        omega = _parse_floats(self.omega)
        RelaxationSet(d, omega)
        threshold = (1e-2 if d == 3 else 1e-3) if self.threshold is None else float(self.threshold)
        if not threshold > 0:
            raise ValueError("threshold must be positive")
        if int(self.max_iterations) < 0:
            raise ValueError("max_iterations must be nonnegative")
        if self.workers is not None and int(self.workers) < 1:
            raise ValueError("workers must be at least 1")
        if int(self.repetitions) < 1:
            raise ValueError("repetitions must be at least 1")
        if self.omega_mode not in OMEGA_MODES:
            raise ValueError(f"omega_mode must be one of {OMEGA_MODES}")
        for name, value in (("dimension", d), ("resolution", res), ("method", method), ("topology", topo),
                            ("omega", omega), ("threshold", threshold),
                            ("max_iterations", int(self.max_iterations)),
                            ("workers", None if self.workers is None else int(self.workers)),
                            ("repetitions", int(self.repetitions))):
            object.__setattr__(self, name, value)

    @property
    def parallel(self) -> bool:
        return self.method in PARALLEL_METHODS

    @property
    def label(self) -> str:
        if not self.parallel:
            return self.method
        if self.dimension == 1:
            return f"{self.method}({self.topology[0]})"
        return f"{self.method}({'x'.join(map(str, self.topology))})"

    @property
    def relaxation(self) -> RelaxationSet:
        return RelaxationSet(self.dimension, self.omega)

    def to_text(self) -> str:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in ("resolution", "topology"):
                v = "x".join(map(str, v))
            elif f.name == "omega":
                v = ";".join(_fmt_float(w) for w in v)
            elif v is None:
                continue
            out.append(f"{f.name}={v}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str, **overrides) -> "ExperimentConfig":
        """Parse flat ``key=value`` lines; ``#`` starts a comment."""
        names = {f.name for f in fields(cls)}
        kv = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value")
            key, value = (p.strip() for p in line.split("=", 1))
            if key not in names:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            kv[key] = value
        kv.update({k: v for k, v in overrides.items() if v is not None})
        for key in ("dimension", "max_iterations", "repetitions", "workers"):
            if key in kv and isinstance(kv[key], str):
                kv[key] = int(kv[key])
        if "threshold" in kv and isinstance(kv["threshold"], str):
            kv["threshold"] = float(kv["threshold"])
        missing = {"dimension", "resolution", "method"} - kv.keys()
        if missing:
            raise ValueError(f"missing keys: {', '.join(sorted(missing))}")
        return cls(**kv)

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text(), **overrides)


@dataclass
class TableRow:
    method: str
    dim: int
    resolution: tuple
    topology: tuple
    omega_values: tuple
    iterations: int
    l1_error: float
    seconds: float
    converged: bool
    expected: int | None = None
    report: SolveReport | None = field(default=None, repr=False)

    @property
    def diff(self) -> int | None:
        return None if self.expected is None else self.iterations - self.expected

    def csv_fields(self) -> list:
        return [self.method, str(self.dim), "x".join(map(str, self.resolution)),
                "x".join(map(str, self.topology)) if self.topology else "1",
                ";".join(_fmt_float(w) for w in self.omega_values), str(self.iterations),
                f"{self.l1_error:.6e}", f"{self.seconds:.6f}", "true" if self.converged else "false"]


def _model_exact(*x):
    return np.prod(np.stack(np.broadcast_arrays(*x)), axis=0)


def model_grid(dim: int, resolution) -> StructuredGrid:
    res = _parse_ints(resolution)
    if len(res) == 1:
        res = res * dim
    return build_uniform_grid(dim, res, [1.0] * dim)


def model_problem(dim: int, resolution) -> tuple:
    """Laplace problem on the unit cube with boundary data ``prod(x_i)``.

    Returns the :class:`ProblemSpec` and the exact nodal solution on the
    uniform grid of the given resolution (a flat full field).
    """
    if dim not in (1, 2, 3):
        raise ValueError("dim must be 1, 2 or 3")
    problem = ProblemSpec(dim, alpha=1.0, beta=0.0, f=0.0, boundary=_model_exact, exact=_model_exact)
    return problem, nodal_field(_model_exact, model_grid(dim, resolution))


def prepare(config: ExperimentConfig):
    """(stencil, zero initial guess, exact field) for a config."""
    problem, exact = model_problem(config.dimension, config.resolution)
    stencil = assemble(problem, model_grid(config.dimension, config.resolution))
    return stencil, stencil.initial_field(0.0), exact


def _solve(config: ExperimentConfig, stencil: Stencil, u0, exact, engine=None) -> SolveReport:
    if config.parallel:
        decomp = engine.decomp if engine is not None else decompose(stencil.grid, config.topology)
        return solve_parallel(stencil, u0, decomp, exact, omega=config.relaxation, threshold=config.threshold,
                              max_iters=config.max_iterations, workers=config.workers, method=config.method,
                              engine=engine, omega_mode=config.omega_mode)
    return solve_sequential(stencil, u0, config.method, exact, omega=config.relaxation,
                            threshold=config.threshold, max_iters=config.max_iterations)


def run_config(config: ExperimentConfig, expected: int | None = None) -> TableRow:
    """Run one configuration; a singular coupled system is recorded as non-convergence."""
    stencil, u0, exact = prepare(config)
    try:
        report = _solve(config, stencil, u0, exact)
        its, err, secs, ok = report.iterations, report.final_error, report.seconds, report.converged
    except SingularCoupledSystem:
        report, its, err, secs, ok = None, 0, float("nan"), 0.0, False
    return TableRow(config.label, config.dimension, config.resolution, config.topology, config.omega, its,
                    err, secs, ok, expected, report)


def write_csv(rows, path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_fields())
    Path(path).write_text(buf.getvalue())


def markdown_table(rows, title: str | None = None) -> str:
    """Deterministic Markdown (no timings); expected counts and diffs when known."""
    with_expected = any(r.expected is not None for r in rows)
    head = ["method", "resolution", "omega", "iteration", "L1-error"]
    if with_expected:
        head += ["expected", "diff"]
    lines = [f"### {title}", ""] if title else []
    lines.append("| " + " | ".join(head) + " |")
    lines.append("|" + "---|" * len(head))
    for r in rows:
        cells = [r.method, "x".join(map(str, r.resolution)), ";".join(_fmt_float(w) for w in r.omega_values),
                 str(r.iterations) + ("" if r.converged else " (not converged)"), f"{r.l1_error:.5e}"]
        if with_expected:
            cells += ["-" if r.expected is None else str(r.expected),
                      "-" if r.expected is None else f"{r.diff:+d}"]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def run_table(configs, out_dir=None, name: str = "table", expected=None, progress=None) -> list:
    """Run every config in order and optionally write ``name.csv`` and ``name.md``.

    ``configs`` holds configs or ``(config, expected_iterations)`` pairs.
    """
    rows = []
    for i, item in enumerate(configs):
        cfg, exp = item if isinstance(item, tuple) else (item, None)
        if expected is not None:
            exp = expected[i]
        row = run_config(cfg, exp)
        rows.append(row)
        if progress is not None:
            progress(row)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(rows, out / f"{name}.csv")
        (out / f"{name}.md").write_text(markdown_table(rows, name))
    return rows


@dataclass
class OmegaSearchResult:
    omega: tuple
    iterations: int
    evaluations: int
    active: tuple


def _active_factors(config: ExperimentConfig) -> tuple:
    """Indices of the cycle-ordered factors that influence the method."""
    if config.dimension > 1:
        return (None,)  # one shared factor
    m = config.method
    if m in ("LRSOR", "LRGS", "RSOR", "RGS"):
        return (0,)
    if m in ("RLSOR", "RLGS"):
        return (1,)
    return (0, 1)


def omega_search(config: ExperimentConfig, space=None, coarse: float = 1e-2, fine: float = 1e-3,
                 exhaustive: bool = False, leaders: int = 8) -> OmegaSearchResult:
    """Minimize iterations over the relaxation factors the method uses.

    ``space`` is one ``(lo, hi)`` pair or explicit candidate array per
    active factor. A single factor is scanned at step ``fine``. Two factors
    are scanned jointly at step ``coarse``; the ``leaders`` best coarse
    points are then refined at step ``fine`` within a ``coarse``-wide
    window each (``exhaustive`` scans the full fine grid instead). The
    joint landscape is rugged, so the two-factor result is a heuristic
    optimum. Ties keep the first candidate in ascending order.
    """
    active = _active_factors(config)
    d = config.dimension
    ncyc = 2 ** d
    space = list(space) if space is not None else [(1.0, 2.0)] * len(active)
    if len(space) != len(active):
        raise ValueError(f"need {len(active)} search ranges")
    if leaders < 1:
        raise ValueError("leaders must be at least 1")
    stencil, u0, exact = prepare(config)
    engine = ParallelEngine(stencil, decompose(stencil.grid, config.topology)) if config.parallel else None
    base = list(config.omega) * (ncyc if len(config.omega) == 1 else 1)
    evals = [0]
    # converged (iterations, order, values); the cap is the worst kept count
    kept = []

    def grid_of(s, step):
        if isinstance(s, tuple) and len(s) == 2:
            lo, hi = s
            if not (0.0 <= lo <= hi <= 2.0):
                raise ValueError("search bounds must lie within [0, 2]")
            n = int(round((hi - lo) / step))
            pts = np.round(lo + step * np.arange(n + 1), 10)
            return pts[(pts > 0.0) & (pts < 2.0)]
        return np.asarray(s, dtype=np.float64)

    def to_omega(values):
        if active == (None,):
            return (float(values[0]),)
        omega = list(base)
        for idx, v in zip(active, values):
            omega[idx] = float(v)
        return tuple(omega)

    def evaluate(values, keep):
        cap = config.max_iterations
        if len(kept) >= keep:
            cap = min(cap, kept[-1][0])
        evals[0] += 1
        try:
            rep = _solve(replace(config, omega=to_omega(values), max_iterations=cap), stencil, u0, exact, engine)
        except SingularCoupledSystem:
            return
        if rep.converged and (len(kept) < keep or rep.iterations < kept[-1][0]):
            kept.append((rep.iterations, evals[0], tuple(float(v) for v in values)))
            kept.sort()
            del kept[keep:]

    grids = [grid_of(s, fine) for s in space]
    if len(active) == 1 or exhaustive:
        for values in itertools.product(*grids):
            evaluate(values, 1)
    else:
        for values in itertools.product(*[grid_of(s, coarse) for s in space]):
            evaluate(values, leaders)
        starts = [v for _, _, v in kept]
        del kept[1:]
        seen = set()
        for centre in starts:
            windows = [g[(g >= c - coarse - 1e-12) & (g <= c + coarse + 1e-12)] for g, c in zip(grids, centre)]
            for values in itertools.product(*windows):
                if values not in seen:
                    seen.add(values)
                    evaluate(values, 1)
    if not kept:
        return OmegaSearchResult(tuple(base), config.max_iterations, evals[0], active)
    return OmegaSearchResult(to_omega(kept[0][2]), kept[0][0], evals[0], active)


def split_parts(count: int, dim: int) -> tuple:
    """Most cubic factorization of ``count`` into ``dim`` part counts, larger first."""
    best = None
    for combo in itertools.product(range(1, count + 1), repeat=dim):
        if int(np.prod(combo)) != count or list(combo) != sorted(combo, reverse=True):
            continue
        key = max(combo) - min(combo)
        if best is None or key < best[0]:
            best = (key, combo)
    return best[1]


def cache_bench(dim: int = 3, resolutions=(51, 101), part_counts=(1, 8, 27, 64), repetitions: int = 5,
                method: str = "PGS", omega=1.0, threshold: float | None = None,
                max_iterations: int = 100000, out_dir=None) -> list:
    """Single-worker wall time of the decomposed solver relative to one box.

    Baseline: the undecomposed (one box) run of the same solver, i.e. the
    classic sequential sweep. Each row reports the median over
    ``repetitions`` runs, the factor ``median / baseline median``, the
    timed iteration count and the iteration count of an untimed run with
    the default worker count.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    previous = nb.get_num_threads()
    rows = []
    try:
        for res in resolutions:
            base_cfg = ExperimentConfig(dim, res, method, (1,) * dim, (omega,), threshold, max_iterations)
            stencil, u0, exact = prepare(base_cfg)
            cfgs = {p: replace(base_cfg, topology=split_parts(p, dim)) for p in part_counts}
            engines = {p: ParallelEngine(stencil, decompose(stencil.grid, c.topology)) for p, c in cfgs.items()}
            base_engine = ParallelEngine(stencil, decompose(stencil.grid, (1,) * dim))
            untimed = {}
            for p, c in cfgs.items():
                nb.set_num_threads(previous)
                untimed[p] = _solve(replace(c, workers=None), stencil, u0, exact, engines[p]).iterations
            nb.set_num_threads(1)
            one = replace(base_cfg, workers=1)
            _solve(one, stencil, u0, exact, base_engine)  # compile and warm caches
            times = {p: [] for p in cfgs}
            counts = {p: set() for p in cfgs}
            base_times = []
            for _ in range(repetitions):
                t0 = time.perf_counter()
                _solve(one, stencil, u0, exact, base_engine)
                base_times.append(time.perf_counter() - t0)
                for p, c in cfgs.items():
                    t0 = time.perf_counter()
                    rep = _solve(replace(c, workers=1), stencil, u0, exact, engines[p])
                    times[p].append(time.perf_counter() - t0)
                    counts[p].add(rep.iterations)
            base_med = statistics.median(base_times)
            for p, c in cfgs.items():
                med = statistics.median(times[p])
                timed = sorted(counts[p])
                rows.append({
                    "resolution": res, "parts": p, "topology": "x".join(map(str, c.topology)),
                    "iterations": timed[0] if len(timed) == 1 else -1,
                    "untimed_iterations": untimed[p], "median_seconds": med,
                    "baseline_seconds": base_med, "efficiency_factor": med / base_med,
                    "repetitions": repetitions,
                })
    finally:
        nb.set_num_threads(previous)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        keys = list(rows[0]) if rows else []
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in r.items()})
        (out / "cache_bench.csv").write_text(buf.getvalue())
    return rows


# Tabulated reference runs: (label, resolution) -> iterations, with relaxation
# factors where the run used them.
_GS_1D = {
    41: {"LRGS": 979, "RLGS": 960, "SGS": 976, 2: 975, 4: 974, 6: 974, 8: 973, 10: 973, 14: 972, 18: 970},
    81: {"LRGS": 3905, "RLGS": 3866, "SGS": 3892, 2: 3891, 4: 3890, 6: 3890, 8: 3890, 10: 3889, 14: 3888,
         18: 3887, 24: 3885, 30: 3884, 36: 3882},
    161: {"LRGS": 15598, "RLGS": 15519, "SGS": 15565, 2: 15563, 4: 15561, 6: 15559, 8: 15557, 10: 15555,
          14: 15551, 18: 15547, 24: 15541, 30: 15535, 36: 15529},
}

# (label, iterations, omega_L, omega_R); None marks an unused factor.
_SOR_1D = {
    41: [("LRSOR", 51, 1.86887, None), ("RLSOR", 31, None, 1.86637), ("SSOR", 62, 1.0, 1.87776),
         (2, 31, 1.84970, 1.92084), (4, 76, 1.0, 1.94890), (6, 78, 1.0, 1.94890), (8, 72, 1.0, 1.89379),
         (10, 71, 1.0, 1.88577), (14, 87, 1.0, 1.95591), (18, 71, 1.0, 1.90080)],
    81: [("LRSOR", 103, 1.93193, None), ("RLSOR", 61, None, 1.93143), ("SSOR", 120, 1.0, 1.93487),
         (2, 80, 1.90982, 1.95691), (4, 164, 1.0, 1.97194), (6, 129, 1.0, 1.96092), (8, 141, 1.0, 1.94589),
         (10, 140, 1.0, 1.94088), (14, 129, 1.0, 1.95992), (18, 138, 1.0, 1.95090), (24, 141, 1.0, 1.94790),
         (30, 180, 1.0, 1.97094), (36, 143, 1.0, 1.94389)],
    161: [("LRSOR", 208, 1.96593, None), ("RLSOR", 122, None, 1.96493), ("SSOR", 236, 1.19840, 1.96693),
          (2, 233, 1.0, 1.96593), (4, 342, 1.0, 1.98497), (6, 253, 1.0, 1.97996), (8, 279, 1.0, 1.97194),
          (10, 277, 1.0, 1.96994), (14, 280, 1.0, 1.96994), (18, 269, 1.0, 1.97495), (24, 277, 1.0, 1.97395),
          (30, 278, 1.0, 1.96894), (36, 281, 1.0, 1.97194)],
}
_SOUR_1D = [("LRSOR", 51, 1.86887, None), ("RLSOR", 31, None, 1.86637), ("SSOUR", 58, 0.24825, 1.87087),
            (2, 33, 1.84785, 1.91892), (4, 57, 0.17317, 1.87588), (6, 57, 0.11712, 1.87387),
            (8, 58, 0.09910, 1.87087), (10, 57, 0.18118, 1.87287), (14, 52, 0.36837, 1.89590),
            (18, 53, 0.33233, 1.87988)]

_RES_2D = (51, 101, 151)
_TABLE_2D = {
    1.0: {"RGS": (1018, 4065, 9139), "SGS": (1006, 4038, 9097), "FGS": (1006, 4037, 9097),
          (4, 1): (1020, 4066, 9140), (2, 2): (1020, 4065, 9138), (9, 1): (1038, 4103, 9195),
          (3, 3): (1029, 4082, 9163), (25, 1): (1088, 4219, 9371), (5, 5): (1049, 4116, 9213)},
    1.25: {"RSOR": (616, 2450, 5501), "SSOR": (606, 2425, 5461), "FSOR": (605, 2424, 5460),
           (4, 1): (626, 2467, 5524), (2, 2): (626, 2465, 5521), (9, 1): (652, 2520, 5605),
           (3, 3): (637, 2487, 5556), (16, 1): (685, 2593, 5718), (4, 4): (648, 2512, 5590),
           (25, 1): (715, 2688, 5863), (5, 5): (662, 2535, 5624)},
    1.5: {"RSOR": (348, 1373, 3074), "SSOR": (341, 1351, 3038), "FSOR": (339, 1349, 3036),
          (4, 1): (369, 1415, 3133), (2, 2): (369, 1410, 3127), (9, 1): (407, 1498, 3259),
          (3, 3): (382, 1443, 3179), (16, 1): (453, 1606, 3432), (4, 4): (396, 1474, 3227),
          (25, 1): (477, 1736, 3645), (5, 5): (407, 1504, 3274)},
}

# The first decomposed row of each 3D table repeats the 3x3x3 label of the
# last one with different counts; it is left out as ambiguous.
_RES_3D = (25, 51, 101)
_TABLE_3D = {
    1.0: {"RGS": (110, 480, 1921), "SGS": (104, 466, 1893), "FGS": (104, 466, 1893),
          (2, 2, 1): (105, 469, 1898), (7, 1, 1): (107, 472, 1905), (2, 2, 2): (106, 470, 1901),
          (11, 1, 1): (108, 475, 1911), (3, 2, 2): (107, 472, 1904), (5, 3, 1): (108, 474, 1907),
          (4, 2, 2): (108, 473, 1906), (3, 3, 3): (109, 475, 1909)},
    1.25: {"RSOR": (69, 293, 1164), "SSOR": (63, 281, 1137), "FSOR": (62, 280, 1136),
           (2, 2, 1): (65, 284, 1144), (7, 1, 1): (67, 289, 1154), (2, 2, 2): (66, 287, 1149),
           (11, 1, 1): (69, 293, 1164), (3, 2, 2): (67, 288, 1152), (5, 3, 1): (68, 291, 1157),
           (4, 2, 2): (68, 290, 1155), (3, 3, 3): (69, 292, 1159)},
    1.5: {"RSOR": (41, 169, 659), "SSOR": (36, 157, 633), "FSOR": (35, 155, 631),
          (2, 2, 1): (38, 162, 644), (7, 1, 1): (41, 170, 659), (2, 2, 2): (40, 166, 651),
          (11, 1, 1): (44, 178, 675), (3, 2, 2): (41, 169, 655), (5, 3, 1): (42, 172, 662),
          (4, 2, 2): (42, 170, 660), (3, 3, 3): (43, 173, 664)},
}


def _suite_1d_gs(resolutions=(41, 81, 161)):
    out = []
    for res in resolutions:
        for key, its in _GS_1D[res].items():
            if isinstance(key, str):
                out.append((ExperimentConfig(1, res, key), its))
            else:
                out.append((ExperimentConfig(1, res, "PGS", (key,)), its))
    return out


def _sor_rows(table, parallel_label):
    out = []
    for res, rows in table:
        for key, its, wl, wr in rows:
            omega = (1.0 if wl is None else wl, 1.0 if wr is None else wr)
            if isinstance(key, str):
                out.append((ExperimentConfig(1, res, key, (), omega), its))
            else:
                out.append((ExperimentConfig(1, res, parallel_label, (key,), omega), its))
    return out


def _suite_table(dim, table, resolutions, all_res, omega):
    out = []
    for res in resolutions:
        col = all_res.index(res)
        for key, counts in table[omega].items():
            if isinstance(key, str):
                cfg = ExperimentConfig(dim, res, key, (), (omega,))
            else:
                cfg = ExperimentConfig(dim, res, "PGS" if omega == 1.0 else "PSOR", key, (omega,))
            out.append((cfg, counts[col]))
    return out


SUITES = {
    "1d-gs": lambda: _suite_1d_gs(),
    "1d-sor-41": lambda: _sor_rows([(41, _SOR_1D[41])], "PSOR"),
    "1d-sor-81": lambda: _sor_rows([(81, _SOR_1D[81])], "PSOR"),
    "1d-sor-161": lambda: _sor_rows([(161, _SOR_1D[161])], "PSOR"),
    "1d-sour-41": lambda: _sor_rows([(41, _SOUR_1D)], "PSOUR"),
    "2d-gs": lambda: _suite_table(2, _TABLE_2D, _RES_2D, _RES_2D, 1.0),
    "2d-sor-1.25": lambda: _suite_table(2, _TABLE_2D, _RES_2D, _RES_2D, 1.25),
    "2d-sor-1.5": lambda: _suite_table(2, _TABLE_2D, _RES_2D, _RES_2D, 1.5),
    "3d-gs": lambda: _suite_table(3, _TABLE_3D, (25, 51), _RES_3D, 1.0),
    "3d-sor-1.25": lambda: _suite_table(3, _TABLE_3D, (25, 51), _RES_3D, 1.25),
    "3d-sor-1.5": lambda: _suite_table(3, _TABLE_3D, (25, 51), _RES_3D, 1.5),
    "3d-gs-101": lambda: _suite_table(3, _TABLE_3D, (101,), _RES_3D, 1.0),
    "3d-sor-1.25-101": lambda: _suite_table(3, _TABLE_3D, (101,), _RES_3D, 1.25),
    "3d-sor-1.5-101": lambda: _suite_table(3, _TABLE_3D, (101,), _RES_3D, 1.5),
}


def suite(name: str, resolutions=None) -> list:
    """``(config, expected iterations)`` pairs of a named reference table."""
    try:
        rows = SUITES[name]()
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}") from None
    if resolutions is not None:
        keep = {int(r) for r in resolutions}
        rows = [(c, e) for c, e in rows if c.resolution[0] in keep]
    return rows
