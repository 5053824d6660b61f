"""Command line interface: ``tdikit <subcommand> ...``.

Exit status 0 means a verdict was computed (whatever it is), 1 an input
error, 2 an internal invariant violation.  Text output uses 1-based
column and vertex numbers; JSON output uses 0-based indices.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import io
from .exact import RankDeficientError, format_rational
from .geometry import Problem, ProblemError, lp_solve, regular_subdivision
from .setpacking import InvariantError

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


def _fmt_vec(v) -> str:
    return "(" + ", ".join(format_rational(x) if isinstance(x, Fraction) else str(x) for x in v) + ")"


def _fmt_set(ix) -> str:
    return "{" + " ".join(str(j + 1) for j in ix) + "}"


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise io.InputError(f"cannot read {path}: {e.strerror}") from None


def _load_system(path: str) -> Problem:
    try:
        rows, cost = io.parse_system(_read(path))
    except io.InputError as e:
        raise e.at(path) from None
    return Problem(rows, cost)


def _variable_names(p: Problem) -> list[str]:
    """a, b, ... then v1..vd for set-packing systems; x1..xn otherwise."""
    from .setpacking import clique_names

    d, n = p.d, p.n
    k = n - d
    cols = p.columns
    sp = k >= 1 and all(cols[k + i] == tuple(-int(r == i) for r in range(d)) for i in range(d)) and all(
        set(cols[j]) <= {0, 1} for j in range(k)
    )
    if sp:
        return clique_names(k) + [f"v{i + 1}" for i in range(d)]
    return [f"x{j + 1}" for j in range(n)]


def _monomial(u, names) -> str:
    parts = []
    for e, name in zip(u, names):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


# -- subcommands ---------------------------------------------------------------

def cmd_subdivide(args, out):
    from .geometry import lexicographic_subdivision
    from .setpacking import perturb

    p = _load_system(args.system)
    if args.perturb:
        if args.method == "pivot":
            s = lexicographic_subdivision(p, args.sign)
        else:
            s = regular_subdivision(p.with_cost(perturb(p, args.sign)), method=args.method)
    else:
        s = regular_subdivision(p, method=args.method)
    out.line(f"cells: {len(s)}")
    for cell in s.cells:
        out.line(_fmt_set(cell.indices))
    out.data = {"cells": [list(c.indices) for c in s.cells], "count": len(s)}


def cmd_hilbert(args, out):
    from .exact import as_matrix
    from .hilbert import Cone, is_hilbert_basis

    try:
        rows = io.parse_matrix(_read(args.matrix))
    except io.InputError as e:
        raise e.at(args.matrix) from None
    try:
        C = Cone(as_matrix(rows))
    except ValueError as e:
        raise io.InputError(str(e), source=args.matrix) from None
    v = is_hilbert_basis(C)
    out.line("HILBERT BASIS" if v.is_basis else "NOT A HILBERT BASIS")
    data = {"is_basis": v.is_basis, "pointed": C.pointed}
    if v.witness is not None:
        out.line(f"witness: {_fmt_vec(v.witness)}")
        data["witness"] = list(v.witness)
    if C.pointed:
        from .hilbert import hilbert_basis

        hb = hilbert_basis(C)
        out.line(f"minimal Hilbert basis ({len(hb)}):")
        for h in hb:
            out.line("  " + _fmt_vec(h))
        data["minimal_basis"] = [list(h) for h in hb]
    out.data = data


def _print_certificate(cert, out):
    out.line(cert.verdict)
    w = cert.witness
    if "b" in w:
        out.line(f"witness b: {_fmt_vec(w['b'])}")
        out.line(f"LP value: {format_rational(w['lp_value'])}")
        ip = w.get("ip_value")
        out.line(f"IP value: {'infeasible' if ip is None else format_rational(ip)}")
    if "cell" in w:
        out.line(f"failing cell: {_fmt_set(w['cell'])}")
    if "point" in w:
        out.line(f"point outside the semigroup: {_fmt_vec(w['point'])}")
    out.data = cert.to_json()


def cmd_testset(args, out):
    from .testset import Certificate, NotHilbertError, build_test_set

    p = _load_system(args.system)
    try:
        res = build_test_set(p)
    except NotHilbertError as e:
        out.line("NOT_TDI")
        out.line(str(e))
        out.data = {"verdict": "NOT_TDI", "reason": str(e)}
        return
    if isinstance(res, Certificate):
        _print_certificate(res, out)
        return
    names = _variable_names(p)
    out.line(f"test set: {len(res)} vectors")
    for v in res:
        out.line(f"  {_monomial(v.plus, names)} -> {_monomial(v.minus, names)}  [{v.tag} {_fmt_set(v.support)}]")
    out.data = {"verdict": "TDI", "test_set": res.to_json()}


def cmd_ipsolve(args, out):
    from .testset import ipsolve

    p = _load_system(args.system)
    b = io.parse_vector(args.b)
    if len(b) != p.d:
        raise io.InputError(f"--b has {len(b)} entries, expected {p.d}")
    value, x = ipsolve(p, b, method=args.method)
    if value is None:
        out.line("INFEASIBLE")
        out.data = {"status": "infeasible"}
        return
    out.line(f"optimum: {format_rational(value)}")
    out.line(f"x: {_fmt_vec(x)}")
    lp = lp_solve(p, b)
    out.line(f"LP value: {format_rational(lp.value)}")
    out.data = {"status": "optimal", "value": value, "x": list(x), "lp_value": lp.value}


def cmd_groebner(args, out):
    from .setpacking import perturb
    from .toric import BudgetExceeded, initial_ideal, is_squarefree, mono_of_initial, toric_groebner

    p = _load_system(args.system)
    names = _variable_names(p)
    c = perturb(p, args.sign) if args.perturb else p.c
    try:
        gb, order = toric_groebner(p.A, c, tiebreak=args.order, budget=args.budget)
        data = {"groebner": [[list(g.lead), None if g.trail is None else list(g.trail)] for g in gb]}
        out.line(f"reduced Groebner basis ({len(gb)}):")
        for g in gb:
            rhs = "0" if g.trail is None else _monomial(g.trail, names)
            tie = "  (tied)" if g.tied else ""
            out.line(f"  {_monomial(g.lead, names)} - {rhs}{tie}")
        init = initial_ideal(gb, order)
        out.line(f"initial ideal ({len(init)}):")
        for g in init:
            out.line("  " + (_monomial(g.lead, names) if g.is_monomial else
                             f"{_monomial(g.lead, names)} - {_monomial(g.trail, names)}"))
        data["initial"] = [list(g.lead) if g.is_monomial else [list(g.lead), list(g.trail)] for g in init]
        if args.mono:
            monos = mono_of_initial(init, order, budget=args.budget)
            out.line(f"mono of initial ideal ({len(monos)}):")
            for m in monos:
                out.line("  " + _monomial(m, names))
            out.line("square-free: " + ("yes" if is_squarefree(monos) else "no"))
            data["mono"] = [list(m) for m in monos]
            data["squarefree"] = is_squarefree(monos)
    except BudgetExceeded as e:
        out.line(f"budget exceeded: {e}")
        data = {"status": "budget exceeded"}
    out.data = data


def cmd_perfect(args, out):
    from .setpacking import Graph, build_system, lam, perfectness_check

    try:
        d, edges = io.parse_graph(_read(args.graph))
    except io.InputError as e:
        raise e.at(args.graph) from None
    g = Graph(d, edges)
    sp = build_system(g)
    if args.emit_system:
        with open(args.emit_system, "w", encoding="utf-8") as fh:
            fh.write(io.format_system(sp.problem.A.rows, sp.problem.c))
    cert = perfectness_check(g, sign=args.sign, sys=sp)
    out.line(cert.verdict)
    out.line(f"cliques: {len(sp.cliques)}")
    out.line(f"cells of the perturbed triangulation: {len(cert.refinement)}")
    data = cert.to_json()
    w = cert.witness
    if "cell" in w:
        out.line(f"non-unimodular cell: {_fmt_set(w['cell'])} (det {w['det']})")
    if "vertex" in w:
        out.line(f"fractional vertex of Q_c: {_fmt_vec(w['vertex'])}")
    if args.lambda_samples:
        rng = random.Random(args.seed)
        bad = None
        for _ in range(args.lambda_samples):
            b = [rng.randint(-3, 3) for _ in range(d)]
            res = lp_solve(sp.problem, b)
            for i in range(sp.problem.n):
                v = lam(sp, b, i, res)
                if v.denominator != 1:
                    bad = (b, i, v)
                    break
            if bad:
                break
        if bad:
            out.line(f"non-integral lambda: b={_fmt_vec(bad[0])} i={bad[1] + 1} value={format_rational(bad[2])}")
            data["lambda_witness"] = {"b": bad[0], "i": bad[1], "value": bad[2]}
        else:
            out.line(f"lambda integral on {args.lambda_samples} samples")
        data["lambda_samples"] = args.lambda_samples
    out.data = data


def cmd_tdi(args, out):
    from .testset import brute_force_tdi, tdi_check_via_cells, tdi_check_via_testset, tdi_check_via_toric

    p = _load_system(args.system)
    if args.method == "testset":
        cert = tdi_check_via_testset(p)
    elif args.method == "cells":
        cert = tdi_check_via_cells(p)
        s = regular_subdivision(p)
        _print_certificate(cert, out)
        if cert.is_tdi:
            out.line(f"{len(s)} cells, all Hilbert bases")
        out.data["cells"] = len(s)
        return
    elif args.method == "toric":
        cert = tdi_check_via_toric(p, budget=args.budget)
    else:
        cert = brute_force_tdi(p, args.box)
    _print_certificate(cert, out)
    if args.method == "brute" and cert.is_tdi:
        out.line(f"checked {cert.witness['checked']} right-hand sides with |b_i| <= {cert.witness['box']}")


def cmd_perturb(args, out):
    from .setpacking import perturb

    p = _load_system(args.system)
    cp = perturb(p, args.sign)
    out.line(" ".join(format_rational(v) for v in cp))
    out.data = {"c_prime": list(cp)}


# -- plumbing ------------------------------------------------------------------

class _Output:
    def __init__(self, stream):
        self.stream = stream
        self.data = {}

    def line(self, text: str = ""):
        self.stream.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write a JSON record to PATH")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")

    ap = argparse.ArgumentParser(prog="tdikit", description="Exact TDI, Hilbert basis and toric tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("subdivide", parents=[common], help="regular subdivision of a system")
    s.add_argument("system")
    s.add_argument("--perturb", action="store_true", help="use the perturbed cost c + eps")
    s.add_argument("--sign", type=int, choices=(-1, 1), default=-1, help="sign of eps (default -1)")
    s.add_argument("--method", choices=("auto", "bases", "pivot"), default="auto")
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("hilbert", parents=[common], help="Hilbert basis test for a matrix")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_hilbert)

    s = sub.add_parser("testset", parents=[common], help="build the 0-1 test set")
    s.add_argument("system")
    s.set_defaults(func=cmd_testset)

    s = sub.add_parser("ipsolve", parents=[common], help="solve min{cx : Ax = b, x in N^n}")
    s.add_argument("system")
    s.add_argument("--b", required=True, help="right-hand side, e.g. \"3 1 0\"")
    s.add_argument("--method", choices=("auto", "testset", "groebner"), default="auto")
    s.set_defaults(func=cmd_ipsolve)

    s = sub.add_parser("groebner", parents=[common], help="toric Groebner basis and initial ideal")
    s.add_argument("system")
    s.add_argument("--perturb", action="store_true")
    s.add_argument("--sign", type=int, choices=(-1, 1), default=-1)
    s.add_argument("--mono", action="store_true", help="also compute mono of the initial ideal")
    s.add_argument("--order", choices=("lex", "grevlex"), default="lex", help="tie-break order")
    s.add_argument("--budget", type=int, default=None, help="cap on S-pair reductions")
    s.set_defaults(func=cmd_groebner)

    s = sub.add_parser("perfect", parents=[common], help="perfectness certificate for a graph")
    s.add_argument("graph")
    s.add_argument("--emit-system", metavar="PATH")
    s.add_argument("--sign", type=int, choices=(-1, 1), default=-1)
    s.add_argument("--lambda-samples", type=int, default=0, metavar="N",
                   help="spot-check lambda integrality on N seeded random b")
    s.set_defaults(func=cmd_perfect)

    s = sub.add_parser("tdi", parents=[common], help="decide TDI")
    s.add_argument("system")
    s.add_argument("--method", choices=("testset", "cells", "toric", "brute"), default="testset")
    s.add_argument("--box", type=int, default=None, help="coordinate bound for --method brute")
    s.add_argument("--budget", type=int, default=None, help="cap on S-pair reductions (toric)")
    s.set_defaults(func=cmd_tdi)

    s = sub.add_parser("perturb", parents=[common], help="print c + eps")
    s.add_argument("system")
    s.add_argument("--sign", type=int, choices=(-1, 1), default=-1)
    s.set_defaults(func=cmd_perturb)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    out = _Output(sys.stdout)
    try:
        args.func(args, out)
    except (io.InputError, ProblemError, RankDeficientError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError) as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.json:
        record = {"command": args.command, "seed": args.seed, "result": _jsonable(out.data)}
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(record, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
