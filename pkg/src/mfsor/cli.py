"""Command-line driver: ``mfsor {solve,analyze,bench,omega-search,cache-bench}``.

Exit codes: 0 success, 1 usage error, 2 guard violation. Standard output
is deterministic for a given invocation; wall times go to stderr and CSV.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_USAGE, EXIT_GUARD = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, method: bool = True) -> None:
    p.add_argument("--config", help="flat key=value experiment file; flags override its values")
    p.add_argument("--dim", type=int, choices=(1, 2, 3))
    p.add_argument("--res", help="nodes per axis including boundary: INT or INTxINT[xINT]")
    if method:
        p.add_argument("--method", help="method label, e.g. LRGS, FSOR, PGS, PSOR")
    p.add_argument("--topo", "--parts", dest="topo", help="parts per axis, e.g. 4 or 2x2 or 2x2x2")
    p.add_argument("--omega", help="relaxation factor(s), ';'-separated in sweep-cycle order")
    p.add_argument("--omega-mode", choices=("direction", "iteration"), default=None,
                   help="per-box orientation factors (default) or one factor per iteration")
    p.add_argument("--threshold", type=float)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output directory for CSV/Markdown files")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mfsor", description="Parallel multi-frontal SOR experiments")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("solve", help="run one solve and report iterations and error")
    _common(p)

    p = sub.add_parser("analyze", help="splitting, triangularity and spectral-radius report")
    _common(p, method=False)
    p.add_argument("--force", action="store_true", help="allow dense analysis above the size guard")
    p.add_argument("--dump", help="directory for MatrixMarket dumps of A and the G matrices")

    p = sub.add_parser("bench", help="run a reference table")
    p.add_argument("--suite", required=True)
    p.add_argument("--res", help="restrict to these resolutions (comma-separated)")
    p.add_argument("--out")

    p = sub.add_parser("omega-search", help="minimize iterations over the relaxation factors")
    _common(p)
    p.add_argument("--lo", type=float, default=1.0)
    p.add_argument("--hi", type=float, default=2.0)

    p = sub.add_parser("cache-bench", help="single-worker efficiency factors of decomposed runs")
    p.add_argument("--dim", type=int, default=3, choices=(1, 2, 3))
    p.add_argument("--res", default="51,101", help="comma-separated resolutions")
    p.add_argument("--parts", default="1,8,27,64", help="comma-separated box counts")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--threshold", type=float)
    p.add_argument("--max-iters", type=int, default=100000)
    p.add_argument("--out")
    return parser


def _config(args, default_method: str | None = None):
    from .harness import ExperimentConfig

    over = {
        "dimension": args.dim,
        "resolution": args.res,
        "method": getattr(args, "method", None) or None,
        "topology": args.topo,
        "omega": args.omega,
        "threshold": args.threshold,
        "max_iterations": args.max_iters,
        "workers": args.workers,
        "omega_mode": args.omega_mode,
    }
    if over["method"] is None and default_method is not None and not args.config:
        over["method"] = default_method
    try:
        if args.config:
            return ExperimentConfig.from_file(args.config, **over)
        return ExperimentConfig(**{k: v for k, v in over.items() if v is not None})
    except (TypeError, ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None


def cmd_solve(args) -> int:
    from .harness import run_table

    cfg = _config(args)
    row = run_table([cfg], out_dir=args.out, name="solve")[0]
    print(f"method={row.method}")
    print(f"iterations={row.iterations}")
    print(f"l1_error={row.l1_error:.6e}")
    print(f"converged={'true' if row.converged else 'false'}")
    if not row.converged:
        print("WARNING: stopping threshold not reached")
    print(f"seconds={row.seconds:.6f}", file=sys.stderr)
    return EXIT_OK


def _fmt_vec(v, limit: int = 12) -> str:
    v = np.asarray(v)
    body = ", ".join(f"{x:.6g}" for x in v[:limit])
    return f"[{body}{', ...' if v.size > limit else ''}] (n={v.size})"


def cmd_analyze(args) -> int:
    from . import analysis
    from .discretization import assemble
    from .grid import decompose, schedule
    from .harness import model_grid, model_problem

    if args.dim is None or args.res is None:
        raise UsageError("analyze needs --dim and --res")
    from .harness import _parse_floats, _parse_ints

    res = _parse_ints(args.res)
    res = res * args.dim if len(res) == 1 else res
    if len(res) != args.dim:
        raise UsageError("--res does not match --dim")
    topo = _parse_ints(args.topo) if args.topo else (1,) * args.dim
    topo = topo + (1,) * (args.dim - len(topo)) if len(topo) < args.dim else topo
    grid = model_grid(args.dim, res)
    n = grid.interior_size
    if n > analysis.DENSE_LIMIT and not args.force:
        print(f"refusing dense analysis of N={n} > {analysis.DENSE_LIMIT} without --force", file=sys.stderr)
        return EXIT_GUARD
    try:
        decomp = decompose(grid, topo)
        omega = _parse_floats(args.omega) if args.omega else (1.0,)
        stencil = assemble(model_problem(args.dim, res)[0], grid)
        sched = schedule(decomp)
        splits = analysis.cycle_splittings(stencil, decomp, sched)
        report = analysis.iteration_matrix(splits, omega, mode=args.omega_mode or "direction")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"N={n} dim={args.dim} parts={'x'.join(map(str, topo))} omega={';'.join(f'{w:g}' for w in omega)}")
    for split in splits:
        i1, i2 = 2 * split.diagonal + 1, 2 * split.diagonal + 2
        ok = split.identity_error <= 1e-15
        print(f"splitting G{i1} + beta I + G{i2} = A: max deviation {split.identity_error:.3e} "
              f"{'OK' if ok else 'FAIL'}")
        eig = analysis.eigen_diag_check(split)
        for idx, name in ((i1, "first"), (i2, "second")):
            cert = split.certificates[name]
            state = "OK" if cert else f"REFUTED at {cert.violation}"
            print(f"G{idx}: alt-block-triangular {state} (levels={len(cert.xi)}, largest block={max(cert.xi)})")
            print(f"G{idx}: Lambda = {_fmt_vec(split.lam_first if name == 'first' else split.lam_second)}")
            e = eig[name]
            print(f"G{idx}: diagonal positive {'OK' if e['diagonal_positive'] else 'FAIL'}; "
                  f"eigenvalues equal diagonal: {'PASS' if e['diagonal_ok'] else 'FAIL'} "
                  f"(deviation {e['diagonal_deviation']:.3e})")
        if args.dump:
            out = Path(args.dump)
            out.mkdir(parents=True, exist_ok=True)
            analysis.dump_matrix(split.g_first, out / f"G{i1}.mtx")
            analysis.dump_matrix(split.g_second, out / f"G{i2}.mtx")
    if args.dump:
        analysis.dump_matrix(splits[0].a, Path(args.dump) / "A.mtx")
    verdict = "< 1: PASS" if report.converges else ">= 1: FAIL"
    print(f"rho(T)={report.rho:.6f} {verdict}")
    print(f"bound prod|1-w|={report.bound:.6f}; rho(T) <= bound: {'yes' if report.within_bound else 'no'}")
    print(f"factor spectra equal b and (1-w)b: {'PASS' if report.identities_ok else 'FAIL'} "
          f"(deviation {report.identity_deviation:.3e})")
    return EXIT_OK


def cmd_bench(args) -> int:
    from .harness import markdown_table, run_table, suite

    try:
        res = [int(r) for r in args.res.split(",")] if args.res else None
        rows_in = suite(args.suite, res)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    rows = run_table(rows_in, out_dir=args.out, name=args.suite)
    sys.stdout.write(markdown_table(rows, args.suite))
    return EXIT_OK


def cmd_omega_search(args) -> int:
    from .harness import omega_search

    cfg = _config(args)
    if not 0.0 <= args.lo < args.hi <= 2.0:
        raise UsageError("search bounds must satisfy 0 <= lo < hi <= 2")
    from .harness import _active_factors

    result = omega_search(cfg, space=[(args.lo, args.hi)] * len(_active_factors(cfg)))
    print(f"method={cfg.label}")
    print(f"omega={';'.join(f'{w:.3f}' for w in result.omega)}")
    print(f"iterations={result.iterations}")
    print(f"evaluations={result.evaluations}")
    return EXIT_OK


def cmd_cache_bench(args) -> int:
    from .harness import cache_bench

    try:
        res = [int(r) for r in str(args.res).replace("x", ",").split(",") if r]
        parts = [int(p) for p in args.parts.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.reps < 1 or any(p < 1 for p in parts):
        raise UsageError("repetitions and part counts must be positive")
    rows = cache_bench(args.dim, res, parts, args.reps, threshold=args.threshold,
                       max_iterations=args.max_iters, out_dir=args.out)
    print("resolution,parts,topology,iterations,untimed_iterations")
    for r in rows:
        print(f"{r['resolution']},{r['parts']},{r['topology']},{r['iterations']},{r['untimed_iterations']}")
    for r in rows:
        print(f"res={r['resolution']} parts={r['parts']} median={r['median_seconds']:.4f}s "
              f"factor={r['efficiency_factor']:.3f}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "analyze": cmd_analyze,
    "bench": cmd_bench,
    "omega-search": cmd_omega_search,
    "cache-bench": cmd_cache_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mfsor {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
