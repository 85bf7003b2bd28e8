"""Command-line entry point: ``gurlab check|example|sweep|selftest``.

Exit codes: 0 success or satisfied, 1 usage/IO/parse error, 2 inequality
violated (check only), 3 selftest invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from contextlib import contextmanager
from typing import Iterable, Sequence

import numpy as np

from . import scan, scenarios, selftest
from .errors import GurError
from .gur import INEQUALITIES, evaluate, robertson, schrodinger
from .problem import dump_problem, load_problem

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED, EXIT_SELFTEST = 0, 1, 2, 3
EXAMPLE3_SEED = 35
EXAMPLE3_SAMPLES = 1000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 means "violated" here
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def fmt(v) -> str:
    """%.12g, locale independent; complex values become ``re+imj`` only if nonreal."""
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    if isinstance(v, complex):
        return "%.12g" % v.real if v.imag == 0 else "%.12g%+.12gj" % (v.real, v.imag)
    return str(v)


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N1xN2, got {text!r}") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("grid sizes must be >= 1")
    return a, b


def parse_axis(text: str) -> scan.Axis:
    try:
        name, lo, hi, n = text.split(":")
        return scan.Axis(name, float(lo), float(hi), int(n))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected name:lo:hi:n, got {text!r}") from None
    except GurError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_binding(text: str) -> tuple[str, complex]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=re[,im], got {text!r}")
    return name, parse_complex(value)


@contextmanager
def _sink(path):
    """CSV destination: a file when ``path`` is given, otherwise stdout."""
    if path is None:
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    with fh:
        yield fh


def _write_csv(out, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _summary(lines: list[str], to_stdout_csv: bool) -> None:
    prefix = "# " if to_stdout_csv else ""
    for line in lines:
        print(prefix + line)


# -- check --------------------------------------------------------------------------


def _pick_observables(problem, xname, yname):
    names = list(problem.observables)
    if xname is None and yname is None:
        if "X" in problem.observables and "Y" in problem.observables:
            xname, yname = "X", "Y"
        elif len(names) >= 2:
            xname, yname = names[0], names[1]
        else:
            raise UsageError("problem file needs two observables (or pass --x/--y)")
    for n in (xname, yname):
        if n not in problem.observables:
            raise UsageError(f"no observable named {n!r}; file has {names}")
    return problem.observables[xname], problem.observables[yname]


def cmd_check(args) -> int:
    problem = load_problem(args.problem)
    x, y = _pick_observables(problem, args.x, args.y)
    s = args.s if args.s is not None else problem.params.get("s", 1 + 0j)
    t = args.t if args.t is not None else problem.params.get("t", 1 + 0j)
    eps = args.eps if args.eps is not None else problem.params.get("eps", 0.05 + 0j).real
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = evaluate(args.inequality, problem.state, x, y, s, t, eps, tol=args.tol)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    d = rep.to_dict()
    if args.json:
        print(json.dumps(d))
    elif args.csv:
        _write_csv(sys.stdout, list(d), [[rep.name, rep.lhs, rep.rhs, rep.margin, rep.s, rep.t,
                                          rep.satisfied, rep.tol, rep.unproven_regime, rep.note or ""]])
    else:
        for k in ("name", "lhs", "rhs", "margin", "s", "t", "satisfied", "tol", "unproven_regime", "note"):
            print(f"{k}: {fmt(getattr(rep, k))}")
    return EXIT_OK if rep.satisfied else EXIT_VIOLATED


# -- examples -----------------------------------------------------------------------


def example1(args) -> int:
    n1, n2 = args.grid or (100, 100)
    grid = scan.GridSpec(scan.Axis("theta", 0.0, math.pi, n1), scan.Axis("phi", 0.0, 2 * math.pi, n2))
    res = scan.sweep("classical_ur", grid, "psi1", workers=args.workers)
    with _sink(args.out) as out:
        _write_csv(out, ("theta", "phi", "lhs", "rhs", "margin"), ((*r.coords, r.lhs, r.rhs, r.margin) for r in res.rows))
    lhs, rhs = scenarios.example1_surfaces(math.pi / 2, math.pi)
    lines = [
        f"at (pi/2, pi): lhs={fmt(lhs)} rhs={fmt(rhs)} margin={fmt(lhs - rhs)}",
        f"violation cells: {len(res.violation_cells)} in {len(scan.violation_regions(res))} regions",
    ]
    for k, region in enumerate(scan.violation_regions(res)):
        pts = np.array([[grid.var1.values()[i], grid.var2.values()[j]] for i, j in region])
        c = pts.mean(axis=0)
        lines.append(f"region {k}: {len(region)} cells, centre theta={fmt(c[0])} phi={fmt(c[1])}")
    _summary(lines, args.out is None)
    return EXIT_OK


def example2(args) -> int:
    n1, n2 = args.grid or (20, 20)
    state = scenarios.psi2()
    lx, ly, _ = scenarios.angular_momenta_L1()
    ss = np.linspace(0.69 / n1, 0.69, n1)
    ts = np.linspace(0.69 / n2, 0.69, n2)
    rows = []
    for s in ss:
        for t in ts:
            rep = evaluate("exp_ratio_ur", state, lx, ly, s, t)
            rows.append((s, t, rep.lhs, rep.rhs, rep.margin))
    with _sink(args.out) as out:
        _write_csv(out, ("s", "t", "lhs", "rhs", "margin"), rows)
    diag = np.linspace(0.69 / 20, 0.69, 20)
    min_rhs = min(evaluate("exp_ratio_ur", state, lx, ly, v, v).rhs for v in diag)
    lines = [
        f"schrodinger rhs={fmt(schrodinger(state, lx, ly).rhs)} robertson rhs={fmt(robertson(state, lx, ly).rhs)}",
        f"min exp_ratio_ur rhs over s=t in (0, 0.69]: {fmt(min_rhs)} (> 1: {min_rhs > 1})",
    ]
    _summary(lines, args.out is None)
    return EXIT_OK


def example3(args) -> int:
    rng = np.random.default_rng(args.seed if args.seed is not None else EXAMPLE3_SEED)
    singlet = scenarios.collective_variance_sum(scenarios.psi3())
    sums = [scenarios.collective_variance_sum(scenarios.random_separable_state(rng)) for _ in range(EXAMPLE3_SAMPLES)]
    if args.out is not None:
        with _sink(args.out) as out:
            _write_csv(out, ("sample", "kappa2_sum"), ((i, v) for i, v in enumerate(sums)))
    print(f"singlet kappa2 sum: {singlet:.6f}")
    print(f"separable minimum over {EXAMPLE3_SAMPLES} samples: {min(sums):.6f} (>= 2: {min(sums) >= 2 - 1e-9})")
    return EXIT_OK


def example4(args) -> int:
    n1 = (args.grid or (101, 1))[0]
    etas = np.linspace(0.0, 1.0, n1) if n1 > 1 else np.array([1.0])
    with _sink(args.out) as out:
        _write_csv(out, ("eta", "max_abs_kappa3"), ((e, scan.max_abs_kappa3(e)) for e in etas))
    bound = scenarios.lhvt_k3_bound()
    eta_star = scan.threshold_bisect(lambda e: scan.max_abs_kappa3(e) - bound, 0.3, 0.6, tol=1e-7)
    kmax = scan.maximize_1d("kappa3_S_eta1", 0.0, 2 * math.pi)[1]
    _summary([f"eta_star={eta_star:.6f} max_kappa3={kmax:.5f}"], args.out is None)
    return EXIT_OK


EXAMPLES = {1: example1, 2: example2, 3: example3, 4: example4}


def cmd_example(args) -> int:
    return EXAMPLES[args.n](args)


# -- sweep --------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    if args.problem:
        problem = load_problem(args.problem)
        x, y = _pick_observables(problem, args.x, args.y)
        scen = scan.fixed_problem(problem.state, x, y)
    else:
        scen = args.scenario
    grid = scan.GridSpec(args.var[0], args.var[1] if len(args.var) > 1 else None, dict(args.fix or []))
    res = scan.sweep(args.inequality, grid, scen, tol=args.tol, workers=args.workers)
    with _sink(args.out) as out:
        _write_csv(out, (*res.names, "lhs", "rhs", "margin"), ((*r.coords, r.lhs, r.rhs, r.margin) for r in res.rows))
    coords, worst = res.extremum
    lines = [
        f"points: {len(res.rows)} violation cells: {len(res.violation_cells)} regions: {len(scan.violation_regions(res))}",
        "worst margin " + fmt(worst) + " at " + " ".join(f"{n}={fmt(c)}" for n, c in zip(res.names, coords)),
    ]
    _summary(lines, args.out is None)
    return EXIT_OK


# -- selftest -----------------------------------------------------------------------


def cmd_selftest(args) -> int:
    print(f"seed: {args.seed}")
    results = selftest.run_selftest(args.seed, args.n)
    for r in results:
        print(f"{r.name}: {r.passed}/{r.total} passed, {r.skipped} skipped")
    failed = [r for r in results if not r.ok]
    if not failed:
        return EXIT_OK
    r = failed[0]
    inst, why = r.failures[0]
    print(f"FAIL {r.name}: {why}")
    print("counterexample problem file:")
    print(dump_problem(inst.state, {"X": inst.x, "Y": inst.y}, {"s": inst.s, "t": inst.t}))
    return EXIT_SELFTEST


# -- wiring -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gurlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="evaluate one inequality on a problem file")
    c.add_argument("problem")
    c.add_argument("inequality", choices=sorted(INEQUALITIES))
    c.add_argument("--s", type=parse_complex, help="re,im (default: file params or 1)")
    c.add_argument("--t", type=parse_complex)
    c.add_argument("--eps", type=float)
    c.add_argument("--x", help="observable name for X")
    c.add_argument("--y", help="observable name for Y")
    c.add_argument("--tol", type=float)
    fmt_group = c.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true")
    fmt_group.add_argument("--csv", action="store_true")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("example", help="reproduce a worked example")
    e.add_argument("n", type=int, choices=sorted(EXAMPLES))
    e.add_argument("--out")
    e.add_argument("--grid", type=parse_grid)
    e.add_argument("--seed", type=int, help="sampling seed (example 3)")
    e.add_argument("--workers", type=int)
    e.set_defaults(func=cmd_example)

    w = sub.add_parser("sweep", help="grid sweep of an inequality")
    w.add_argument("inequality", choices=sorted(INEQUALITIES))
    w.add_argument("--var", type=parse_axis, action="append", required=True, help="name:lo:hi:n (once or twice)")
    w.add_argument("--fix", type=parse_binding, action="append", help="name=re[,im]")
    w.add_argument("--scenario", default="psi1", choices=sorted(scan.SCENARIOS))
    w.add_argument("--problem", help="sweep on a problem file instead of a scenario")
    w.add_argument("--x")
    w.add_argument("--y")
    w.add_argument("--tol", type=float, default=1e-9)
    w.add_argument("--workers", type=int)
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    t = sub.add_parser("selftest", help="random-instance invariant suites")
    t.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED)
    t.add_argument("--n", type=int, default=1000)
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "var", None) is not None and len(args.var) > 2:
        print("gurlab: error: at most two --var axes", file=sys.stderr)
        return EXIT_ERROR
    if args.cmd == "selftest" and args.n < 0:
        print("gurlab: error: --n must be >= 0", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (GurError, UsageError) as exc:
        print(f"gurlab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
