"""Command line interface.

Subcommands:

* ``solve`` decides or enumerates a problem file (DIMACS CNF or the
  equation-per-line system format, auto-detected).  Exit code 10 means
  satisfiable, 20 unsatisfiable, 1 usage or parse error.
* ``enumerate`` is ``solve --mode enumerate``.
* ``verify`` runs the expansion identity suite on random functions and
  ON sets, or on a user-supplied pair.  Exit 0 when every identity
  holds.
* ``curve`` enumerates the points of a Weierstrass curve over GF(2^k)
  by either method.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from . import boolalg, cnf, expansion, gf2k, onset, solver
from .boolalg import ParseError, VarTable


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="onsat",
        description="Boolean equation and CNF solver based on orthonormal-term decomposition",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_flags(p):
        p.add_argument("input", nargs="?", default="-",
                       help="problem file, - for stdin")
        p.add_argument("--mode", choices=[solver.DECIDE, solver.ENUMERATE],
                       default=None)
        p.add_argument("--n0", type=int, default=16,
                       help="brute-force threshold (variables)")
        p.add_argument("--split-depth", type=int, default=3,
                       help="variables per decomposition chain")
        p.add_argument("--workers", type=int, default=None,
                       help="worker count (default: ONSAT_WORKERS or all cores)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed reserved for randomized components")
        p.add_argument("--format",
                       choices=["auto", "dimacs", "system", "json"],
                       default="auto",
                       help="input format / output flavor")
        p.add_argument("--strict-dimacs", action="store_true",
                       help="treat DIMACS header mismatches as errors")
        p.add_argument("--expand-dont-cares", action="store_true",
                       help="emit every total assignment instead of cubes")

    p_solve = sub.add_parser("solve", help="decide satisfiability")
    add_solver_flags(p_solve)
    p_enum = sub.add_parser("enumerate", help="enumerate all solutions")
    add_solver_flags(p_enum)

    p_verify = sub.add_parser("verify", help="check expansion identities")
    p_verify.add_argument("--n", type=int, default=4,
                          help="number of variables for random cases")
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--func", default=None,
                          help="check one expression instead of random ones")
    p_verify.add_argument("--onset", default=None,
                          help="ON set: 'chain: x1,~x2' or 'funcs: <e>, <e>'")

    p_curve = sub.add_parser("curve", help="enumerate curve points over GF(2^k)")
    p_curve.add_argument("--modulus", required=True,
                         help="irreducible modulus bits in hex, e.g. 0xb")
    for name in ("a1", "a2", "a3", "a4", "a6"):
        p_curve.add_argument(f"--{name}", default="0",
                             help=f"curve coefficient {name} in hex")
    p_curve.add_argument("--method",
                         choices=[gf2k.FIELD_DIRECT, gf2k.BOOLEAN_SOLVER],
                         default=gf2k.FIELD_DIRECT)
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _looks_like_dimacs(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        return line.startswith("p cnf") or line.startswith("p ")
    return False


def _solution_json(solution, names) -> str:
    assignment = {names(v): b for v, b in solution.assignment}
    dont_care = [names(v) for v in solution.dont_care]
    return json.dumps({"assignment": assignment, "dont_care": dont_care},
                      sort_keys=True)


def _emit_solutions(outcome, names, args, dimacs_style: bool) -> None:
    solutions = outcome.solutions
    if args.expand_dont_cares:
        expanded = []
        for s in solutions:
            for total in s.expand():
                expanded.append(solver.Solution.make(total, ()))
        solutions = expanded
    if dimacs_style:
        print("s SATISFIABLE" if outcome.sat else "s UNSATISFIABLE")
        for s in solutions:
            lits = [(v + 1) if b else -(v + 1) for v, b in s.assignment]
            print("v " + " ".join(str(l) for l in sorted(lits, key=abs)) + " 0")
    else:
        for s in solutions:
            print(_solution_json(s, names))


def _run_solve(args, mode: str) -> int:
    text = _read_input(args.input)
    if args.format in ("dimacs", "system"):
        input_fmt = args.format
    else:
        input_fmt = "dimacs" if _looks_like_dimacs(text) else "system"
    workers = args.workers if args.workers is not None else solver.default_workers()
    cfg = solver.SolverConfig(
        n0=args.n0, split_depth=args.split_depth, workers=workers, mode=mode
    )
    if input_fmt == "dimacs":
        problem = cnf.parse_dimacs(text, strict=args.strict_dimacs)
        outcome = cnf.solve_sat(problem, cfg)
        # decide mode speaks the usual s/v protocol; enumerate mode
        # reports solution cubes as JSON lines
        dimacs_style = args.format != "json" and mode == solver.DECIDE
        _emit_solutions(outcome, lambda v: f"x{v + 1}", args,
                        dimacs_style=dimacs_style)
    else:
        system, table = solver.parse_system(text)
        outcome = solver.bool_solve(system, cfg)
        _emit_solutions(outcome, table.name_of, args, dimacs_style=False)
    return 10 if outcome.sat else 20


def _verify_identities(args) -> int:
    rng = random.Random(args.seed)
    table = VarTable()
    failures = []

    def report(name: str, ok: bool) -> None:
        print(f"{'ok' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    if args.func or args.onset:
        if not (args.func and args.onset):
            print("verify: --func and --onset go together", file=sys.stderr)
            return 1
        f = boolalg.parse_expr(args.func, table)
        base = onset.parse_onset_spec(args.onset, table)
        e = expansion.expand(f, base)
        report("reconstruction", boolalg.semantically_equal(
            e.reconstruct(), f, over=f.vars | base.vars))
        ok_range = True
        for a, phi in zip(e.coefficients, base.members):
            low, high = f & phi, f | ~phi
            over = f.vars | base.vars
            if not (boolalg.semantically_equal(low & a, low, over=over)
                    and boolalg.semantically_equal(a & high, a, over=over)):
                ok_range = False
        report("coefficient-range", ok_range)
        return 1 if failures else 0

    n = args.n
    ids = [table.intern(f"x{i + 1}") for i in range(n)]

    def random_func():
        def build(depth):
            if depth == 0 or rng.random() < 0.3:
                choice = rng.random()
                if choice < 0.1:
                    return boolalg.const(rng.randint(0, 1))
                v = boolalg.var(rng.choice(ids))
                return v if rng.random() < 0.5 else ~v
            op = rng.choice(["and", "or", "xor", "not"])
            if op == "not":
                return ~build(depth - 1)
            a, b = build(depth - 1), build(depth - 1)
            return {"and": a & b, "or": a | b, "xor": a ^ b}[op]

        return build(3)

    def random_base():
        depth = rng.randint(1, min(3, n))
        lits = [(v, rng.random() < 0.5)
                for v in rng.sample(ids, depth)]
        return onset.term_chain(lits)

    names = [
        "reconstruction", "coefficient-range", "combine-ops",
        "composition", "dual-star", "eliminant-projection",
        "minterm-consistency",
    ]
    ok = dict.fromkeys(names, True)
    for _ in range(args.trials):
        f, g = random_func(), random_func()
        base = random_base()
        over = f.vars | g.vars | base.vars | set(ids)
        ef = expansion.expand(f, base)
        eg = expansion.expand(g, base)
        if not boolalg.semantically_equal(ef.reconstruct(), f, over=over):
            ok["reconstruction"] = False
        for a, phi in zip(ef.coefficients, base.members):
            low = f & phi
            if not boolalg.semantically_equal(low & a, low, over=over):
                ok["coefficient-range"] = False
            if not boolalg.semantically_equal(a & (f | ~phi), a, over=over):
                ok["coefficient-range"] = False
        for op, pyop in (("and", lambda x, y: x & y),
                         ("or", lambda x, y: x | y),
                         ("xor", lambda x, y: x ^ y)):
            got = expansion.combine(ef, eg, op)
            if not boolalg.semantically_equal(
                    got.reconstruct(), pyop(f, g), over=over):
                ok["combine-ops"] = False
        if not boolalg.semantically_equal(
                expansion.negate(ef).reconstruct(), ~f, over=over):
            ok["combine-ops"] = False
        outer = boolalg.var(0) ^ boolalg.var(1)
        comp = expansion.compose(outer, [ef, eg])
        if not boolalg.semantically_equal(comp.reconstruct(), f ^ g, over=over):
            ok["composition"] = False
        if not boolalg.semantically_equal(
                boolalg.dual(boolalg.dual(f)), f, over=over):
            ok["dual-star"] = False
        if f.vars:
            x = min(f.vars)
            elim = expansion.eliminant(f, x)
            zeros = {tuple(sorted(a.items()))
                     for a in boolalg.zero_set(elim, over=f.vars - {x})}
            projected = set()
            for a in boolalg.zero_set(f, over=f.vars):
                projected.add(tuple(sorted(
                    (v, b) for v, b in a.items() if v != x)))
            if zeros != projected:
                ok["eliminant-projection"] = False
            x1 = {x}
            consistent = expansion.minterm_consistency(f, x1)
            truly = len(boolalg.zero_set(f, over=f.vars)) > 0
            if consistent != truly:
                ok["minterm-consistency"] = False
    for name in names:
        report(f"{name} ({args.trials} trials)", ok[name])
    return 1 if failures else 0


def _run_curve(args) -> int:
    field = gf2k.Field(int(args.modulus, 16))
    curve = gf2k.Curve(
        a1=int(args.a1, 16), a2=int(args.a2, 16), a3=int(args.a3, 16),
        a4=int(args.a4, 16), a6=int(args.a6, 16),
    )
    points = gf2k.enumerate_curve(curve, field, args.method)
    for x, y in sorted(points):
        print(f"{x:#x} {y:#x}")
    print(f"c {len(points)} points", file=sys.stderr)
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        if args.command == "solve":
            mode = args.mode or solver.DECIDE
            return _run_solve(args, mode)
        if args.command == "enumerate":
            mode = args.mode or solver.ENUMERATE
            return _run_solve(args, mode)
        if args.command == "verify":
            return _verify_identities(args)
        if args.command == "curve":
            return _run_curve(args)
    except (ParseError, OSError, ValueError) as exc:
        print(f"onsat: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
