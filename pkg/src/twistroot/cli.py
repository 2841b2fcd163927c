"""Command-line front end.  Every command reads and writes JSON.

Exit codes: 0 success, 1 verification failure (witness on stdout),
2 malformed input (JSON pointer to the offending field on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from itertools import product

from ._schema import SchemaError, child, expect_dict, expect_int, expect_list, require
from .checks import loop_twists, run_all
from .cylsets import CylinderSet
from .functionals import Functional, PipelineError, parabolic, pipeline, solve_zeta, tri_decompose
from .quadratic import (GradedSuperAlgebra, antisymmetry_check, centrality_check, derivation_check,
                        form_invariance_check, gl_superalgebra, loop_algebra, q_algebra, sigma_from_json,
                        super_jacobi_check)
from .rootspace import RootSystem, Weight, root_system_from_json
from .shadow import (InvalidAssignment, PreconditionError, ShadowAssignment, build_T, hybrid_direction,
                     random_assignment, saturate, scenario_from_json, verify_main_i)

DEFAULT_DEPTH = 12


class Failure(Exception):
    """Verification failed; ``payload`` is written to stdout."""

    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


def _default_depth():
    raw = os.environ.get("TWISTROOT_DEPTH")
    if raw is None:
        return DEFAULT_DEPTH, "default"
    try:
        return int(raw), "env:TWISTROOT_DEPTH"
    except ValueError:
        raise SchemaError("/env/TWISTROOT_DEPTH", f"not an integer: {raw!r}") from None


def _header(args):
    return {"command": args.command, "depth": args.depth, "depth_source": args.depth_source}


def _read_input(args):
    path = getattr(args, "input", None)
    if path is None or path == "-":
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from None


def _root_system(args, obj=None):
    if obj is not None and isinstance(obj, dict) and ("family" in obj or "kind" in obj):
        return root_system_from_json(obj)
    if args.family is None or args.m is None or args.n is None:
        raise SchemaError("", "family, m and n are required (flags or input fields)")
    try:
        return RootSystem.of(args.family, args.m, args.n)
    except ValueError as exc:
        raise SchemaError("/family", str(exc)) from None


def _weights(rs, obj, path):
    """A single weight object or a list of them under ``weights``/``weight``."""
    if isinstance(obj, dict) and "weights" in obj:
        wp = child(path, "weights")
        return [Weight.from_json(w, rs.m, rs.n, child(wp, i)) for i, w in enumerate(expect_list(obj["weights"], wp))]
    if isinstance(obj, dict) and "weight" in obj:
        return [Weight.from_json(obj["weight"], rs.m, rs.n, child(path, "weight"))]
    if isinstance(obj, list):
        return [Weight.from_json(w, rs.m, rs.n, child(path, i)) for i, w in enumerate(obj)]
    return [Weight.from_json(obj, rs.m, rs.n, path)]


# ---------------------------------------------------------------------------
# commands


def cmd_roots(args):
    rs = _root_system(args)
    out = _header(args)
    out.update(rs.to_json())
    out["roots"] = [w.to_json() for w in rs.enumerate(args.depth)]
    return out


def cmd_classify(args):
    obj = _read_input(args)
    rs = _root_system(args, obj)
    rows = []
    for w in _weights(rs, obj, ""):
        row = {"weight": w.to_json(), "class": rs.classify(w)}
        if row["class"] != "NotARoot":
            row["parity"] = rs.parity(w)
        rows.append(row)
    out = _header(args)
    out.update(rs.to_json())
    out["results"] = rows
    return out


def cmd_string_data(args):
    rs = _root_system(args)
    rows = []
    for c in rs.finite_root_coords:
        if not any(c):
            continue
        r, k = rs.string_data_coords(c)
        rows.append({"root": rs.weight(c).to_json(), "shape": rs.shape(c), "r": r, "k": k})
    out = _header(args)
    out.update(rs.to_json())
    out["kappa"] = rs.kappa
    out["cosets"] = rows
    return out


_SUBSET_OPS = ("union", "intersect", "difference", "negate", "minkowski", "closure", "symmetric",
               "parts", "elements", "tri", "parabolic")


def cmd_subset(args):
    obj = _read_input(args)
    expect_dict(obj, "")
    rs = _root_system(args, obj)
    op = require(obj, "op", "")
    if op not in _SUBSET_OPS:
        raise SchemaError("/op", f"unknown op {op!r}; expected one of {', '.join(_SUBSET_OPS)}")
    out = _header(args)
    out.update(rs.to_json())
    out["op"] = op
    if op == "parabolic":
        lam = Functional.from_json(require(obj, "lambda", ""), rs.m, rs.n, "/lambda")
        mu = Functional.from_json(obj["mu"], rs.m, rs.n, "/mu") if "mu" in obj else None
        out["result"] = parabolic(rs, lam, mu).to_json()
        return out
    a = CylinderSet.from_json(rs, require(obj, "a", ""), "/a")
    if op in ("union", "intersect", "difference", "minkowski"):
        b = CylinderSet.from_json(rs, require(obj, "b", ""), "/b")
        out["result"] = getattr(a, op)(b).to_json()
    elif op == "negate":
        out["result"] = a.negate().to_json()
    elif op == "closure":
        out["result"] = a.closure_report().to_json(rs)
    elif op == "symmetric":
        out["result"] = a.is_symmetric()
    elif op == "parts":
        out["result"] = dict(zip(("re", "ns", "im", "cross"), (p.to_json() for p in a.parts())))
    elif op == "elements":
        out["result"] = [w.to_json() for w in a.elements(args.depth)]
    elif op == "tri":
        z = Functional.from_json(require(obj, "zeta", ""), rs.m, rs.n, "/zeta")
        out["result"] = tri_decompose(a, z).to_json()
    return out


def _assignment(args, obj):
    rs = _root_system(args, obj)
    try:
        return ShadowAssignment.from_json(rs, obj)
    except InvalidAssignment as exc:
        raise SchemaError("/cosets", f"{exc}: {json.dumps(exc.witness)}") from None


def cmd_shadow_build(args):
    if args.input is None:
        rs = _root_system(args)
        sa = random_assignment(rs, random.Random(args.seed), need_both=True)
    else:
        sa = _assignment(args, _read_input(args))
    ts = build_T(sa)
    out = _header(args)
    out["assignment"] = sa.to_json()
    out["ln"] = sa.ln_set().to_json()
    out["in"] = sa.in_set().to_json()
    out.update(ts.to_json())
    return out


def cmd_verify_main_i(args):
    sa = _assignment(args, _read_input(args))
    out = _header(args)
    try:
        rep = verify_main_i(sa)
    except PreconditionError as exc:
        out.update({"ok": False, "error": str(exc), "witness": exc.witness})
        raise Failure(out) from None
    ts = build_T(sa)
    rep["direction"] = hybrid_direction(sa, ts.T2) if rep["ok"] else None
    out.update(rep)
    if not rep["ok"]:
        raise Failure(out)
    return out


def cmd_solve_zeta(args):
    obj = _read_input(args)
    expect_dict(obj, "")
    rs = _root_system(args, obj)
    S = CylinderSet.from_json(rs, require(obj, "S", ""), "/S")
    P = CylinderSet.from_json(rs, require(obj, "P", ""), "/P")
    out = _header(args)
    try:
        zeta = solve_zeta(S, P)
    except PreconditionError as exc:
        out.update({"ok": False, "error": str(exc), "witness": exc.witness})
        raise Failure(out) from None
    if zeta is None:
        out.update({"ok": False, "error": "infeasible"})
        raise Failure(out)
    out.update({"ok": True, "zeta": zeta.to_json()})
    return out


def cmd_pipeline(args):
    sa = _assignment(args, _read_input(args))
    out = _header(args)
    try:
        out.update(pipeline(sa, random.Random(args.seed)))
    except PipelineError as exc:
        out.update({"ok": False, "stage": exc.stage, "error": str(exc), "witness": exc.witness})
        raise Failure(out) from None
    return out


def cmd_jacobi(args):
    if args.algebra == "q":
        alg = q_algebra(args.window)
    elif args.algebra == "gl":
        alg = gl_superalgebra(args.m or 1, args.n or 1)
    else:
        alg = GradedSuperAlgebra.from_json(_read_input(args))
    rep = super_jacobi_check(alg)
    anti = antisymmetry_check(alg)
    out = _header(args)
    out.update({"algebra": args.algebra, "window": args.window if args.algebra == "q" else alg.window})
    out.update(rep.to_json(alg))
    out["antisymmetry_violations"] = len(anti)
    if not rep.ok or anti:
        raise Failure(out)
    return out


def cmd_loop(args):
    window = args.window
    if args.input is not None:
        obj = _read_input(args)
        expect_dict(obj, "")
        m, n = expect_int(require(obj, "m", ""), "/m"), expect_int(require(obj, "n", ""), "/n")
        base = gl_superalgebra(m, n)
        order = expect_int(require(obj, "order", ""), "/order")
        twists = [("input", sigma_from_json(require(obj, "sigma", ""), len(base), "/sigma"), order)]
    elif (args.m, args.n) in ((None, None), (2, 1)):
        base, twists = loop_twists()
    else:
        base = gl_superalgebra(args.m, args.n)
        twists = [("identity", {i: {i: 1} for i in range(len(base))}, 2)]
    results = []
    ok = True
    for name, sigma, l in twists:
        try:
            L = loop_algebra(base, sigma, l, window)
        except ValueError as exc:
            raise Failure({**_header(args), "ok": False, "twist": name, "error": str(exc)}) from None
        idx = range(len(L))
        jac = super_jacobi_check(L)
        row = {
            "twist": name,
            "order": l,
            "dimension": len(L),
            "jacobi": jac.to_json(L),
            "form_invariance_violations": len(form_invariance_check(L, product(idx, repeat=3))),
            "derivation_violations": len(derivation_check(L, L.d_index, product(idx, repeat=2))),
            "c_central": centrality_check(L, [{L.c_index: 1}])[0]["central"],
        }
        row["ok"] = (jac.ok and not row["form_invariance_violations"] and not row["derivation_violations"]
                     and row["c_central"])
        ok &= row["ok"]
        results.append(row)
    out = _header(args)
    out.update({"window": window, "ok": ok, "twists": results})
    if not ok:
        raise Failure(out)
    return out


def cmd_saturate(args):
    obj = _read_input(args)
    rs, sa, state, budget = scenario_from_json(obj)
    res = saturate(state, sa, budget)
    out = _header(args)
    out.update(rs.to_json())
    out.update(res.to_json(rs.m))
    return out


def cmd_sweep(args):
    results = run_all(per_family=args.per_family, seed=args.seed, quick=args.quick)
    out = _header(args)
    out["seed"] = args.seed
    out["matrix"] = [{k: r[k] for k in ("criterion", "name", "passed", "failures", "seconds")} for r in results]
    out["witnesses"] = {str(r["criterion"]): r["witnesses"] for r in results if r["witnesses"]}
    out["ok"] = all(r["passed"] for r in results)
    if not out["ok"]:
        raise Failure(out)
    return out


COMMANDS = {
    "roots": cmd_roots,
    "classify": cmd_classify,
    "string-data": cmd_string_data,
    "subset": cmd_subset,
    "shadow-build": cmd_shadow_build,
    "verify-main-i": cmd_verify_main_i,
    "solve-zeta": cmd_solve_zeta,
    "pipeline": cmd_pipeline,
    "jacobi": cmd_jacobi,
    "loop": cmd_loop,
    "saturate": cmd_saturate,
    "sweep": cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="family label, e.g. 'Dm+1,n^2' or 'A2m,2n-1^2'")
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--depth", type=int, help=f"delta window (default {DEFAULT_DEPTH} or $TWISTROOT_DEPTH)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--in", dest="input", help="input JSON file ('-' for stdin)")
    common.add_argument("--out", dest="output", help="output file (default stdout)")
    parser = argparse.ArgumentParser(prog="twistroot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "jacobi":
            p.add_argument("--algebra", choices=("q", "gl", "file"), default="q")
            p.add_argument("--window", type=int, default=21)
        if name == "loop":
            p.add_argument("--window", type=int, default=4)
        if name == "sweep":
            p.add_argument("--per-family", type=int, default=200)
            p.add_argument("--quick", action="store_true")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    code = 0
    try:
        if args.depth is None:
            args.depth, args.depth_source = _default_depth()
        else:
            args.depth_source = "flag"
        payload = COMMANDS[args.command](args)
    except SchemaError as exc:
        print(json.dumps({"error": "schema", "path": exc.path, "message": str(exc)}), file=sys.stderr)
        return 2
    except (OSError, PreconditionError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except Failure as exc:
        payload, code = exc.payload, 1
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
