"""Command-line front end with stable JSON input/output.

Blocking sets travel as JSON documents:

    {"q": 2, "n": 3, "k": 1,
     "field": {"p": 2, "e": 1, "modulus": [0, 1]},
     "points": [[0, 0, 1, 1], ...],
     "hyperplanes": [[1, 0, 0, 0], ...]}

Points are arrays of field codes, normalized so the leftmost nonzero
coordinate is 1 (unnormalized input is accepted, normalized, and noted on
stderr).  Hyperplanes are given by their dual coordinate vector a, meaning
the hyperplane {x : sum a_i x_i = 0}.  Exact bound values are rendered as
decimal strings so they survive 64-bit JSON consumers.

Exit codes: 0 computed and any checked property holds; 1 computed and the
property fails; 2 invalid input; 3 enumeration or time budget exceeded.
All diagnostics go to stderr, stdout carries only JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import blocking, constructions, search
from .blocking import BlockingSet
from .counting import (BoundReport, HypothesisViolated, InvalidQ, gaussian,
                       heger_nagy_upper_bound, metsch_dual_lower_bound,
                       metsch_lower_bound, minimum_size_bound, theta)
from .gf import FieldError, field_for_order
from .pgkernel import (BadFrame, BudgetExceeded, DimensionMismatch,
                       GeometryContext, PointInCenter, Subspace)

EXIT_OK = 0
EXIT_PROPERTY_FAILS = 1
EXIT_INVALID_INPUT = 2
EXIT_BUDGET = 3

_INPUT_ERRORS = (FieldError, DimensionMismatch, BadFrame, PointInCenter,
                 InvalidQ, HypothesisViolated, blocking.NotBlocking,
                 constructions.BadPencil, constructions.EmptyPart,
                 constructions.WrongAnchorDim, constructions.WrongParameters,
                 ValueError, KeyError, TypeError, json.JSONDecodeError,
                 OSError)


def _emit(payload: dict):
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _warn(message: str):
    print(f"pgblock: {message}", file=sys.stderr)


def _read_blocking_set(path: str) -> BlockingSet:
    if path == "-":
        data = json.load(sys.stdin)
    else:
        with open(path) as handle:
            data = json.load(handle)
    return BlockingSet.from_dict(data, warn=_warn)


def _context(args) -> GeometryContext:
    return GeometryContext(field_for_order(args.q), args.n)


def _subspace_json(ctx: GeometryContext, space: Subspace) -> dict:
    return {"dim": space.dim, "basis": [list(r) for r in space.basis]}


def _element_json(ctx: GeometryContext, element) -> dict:
    if hasattr(element, "coords"):
        return {"type": "point", "coords": list(element.coords)}
    dual = ctx.hyperplane_dual_point(element)
    return {"type": "hyperplane", "dual": list(dual.coords)}


def _default_budget(args) -> float | None:
    if args.budget_seconds is not None:
        return args.budget_seconds
    env = os.environ.get("PGBLOCK_BUDGET_SECONDS")
    return float(env) if env else None


# -- subcommands ---------------------------------------------------------------


def _cmd_verify(args) -> int:
    bset = _read_blocking_set(args.input)
    ok, witness = blocking.is_blocking(bset)
    payload = {"blocking": ok}
    if witness is not None:
        payload["witness"] = _subspace_json(bset.ctx, witness)
    _emit(payload)
    return EXIT_OK if ok else EXIT_PROPERTY_FAILS


def _cmd_minimal(args) -> int:
    bset = _read_blocking_set(args.input)
    ok, removable = blocking.is_minimal(bset)
    payload = {"minimal": ok}
    if removable is not None:
        payload["removable"] = _element_json(bset.ctx, removable)
    _emit(payload)
    return EXIT_OK if ok else EXIT_PROPERTY_FAILS


def _cmd_dual(args) -> int:
    bset = _read_blocking_set(args.input)
    _emit(blocking.dual_set(bset).to_dict())
    return EXIT_OK


def _parse_subspace(ctx: GeometryContext, rows) -> Subspace:
    if not rows:
        return ctx.span()
    raw = Subspace(len(rows) - 1, tuple(tuple(int(c) for c in r) for r in rows))
    return ctx.span(raw)


def _cmd_construct(args) -> int:
    ctx = _context(args)
    params_doc = None
    if args.params:
        with open(args.params) as handle:
            params_doc = json.load(handle)
    if args.kind == "pencil-partition":
        if params_doc is not None:
            hull = _parse_subspace(ctx, params_doc["hull"])
            axis = _parse_subspace(ctx, params_doc["axis"])
            members = constructions.pencil(ctx, axis, hull)
            point_part = frozenset(_parse_subspace(ctx, rows)
                                   for rows in params_doc["point_spaces"])
            hyp_part = frozenset(members) - point_part
            params = constructions.PencilPartitionParams(hull, axis, point_part, hyp_part)
        else:
            params = constructions.canonical_pencil_partition(ctx, args.k, args.t)
        bset = constructions.pencil_partition(ctx, params)
    elif args.kind == "bose-burton-points":
        anchor = (_parse_subspace(ctx, params_doc["anchor"]) if params_doc
                  else constructions.canonical_anchor(ctx, ctx.n - args.k))
        bset = constructions.bose_burton(ctx, args.k, "points", anchor)
    elif args.kind == "bose-burton-hyperplanes":
        anchor = (_parse_subspace(ctx, params_doc["anchor"]) if params_doc
                  else constructions.canonical_anchor(ctx, ctx.n - args.k - 2))
        bset = constructions.bose_burton(ctx, args.k, "hyperplanes", anchor)
    elif args.kind == "q2-even":
        if args.k != ctx.n // 2:
            raise ValueError(f"q2-even needs k = n/2 = {ctx.n // 2}, got {args.k}")
        bset = constructions.q2_even_mixed_set(ctx)
    else:
        raise ValueError(f"unknown construction kind {args.kind!r}")
    _emit(bset.to_dict())
    return EXIT_OK


def _cmd_bounds(args) -> int:
    if args.formula == "main-theorem":
        value = minimum_size_bound(args.n, args.k, args.q)
        report = BoundReport("main_theorem_bound",
                             {"n": args.n, "k": args.k, "q": args.q}, value)
    elif args.formula == "gaussian":
        report = BoundReport("gaussian", {"a": args.a, "b": args.b, "q": args.q},
                             gaussian(args.a, args.b, args.q))
    elif args.formula == "theta":
        report = BoundReport("theta", {"m": args.m, "q": args.q},
                             theta(args.m, args.q))
    elif args.formula == "metsch":
        report = BoundReport(
            "metsch_lower_bound",
            {"n": args.n, "q": args.q, "d": args.d, "s": args.s, "b_size": args.b_size},
            metsch_lower_bound(args.n, args.q, args.d, args.s, args.b_size))
    elif args.formula == "metsch-dual":
        report = BoundReport(
            "metsch_dual_lower_bound",
            {"n": args.n, "q": args.q, "d": args.d, "s": args.s, "b_size": args.b_size},
            metsch_dual_lower_bound(args.n, args.q, args.d, args.s, args.b_size))
    elif args.formula == "heger-nagy":
        report = BoundReport("heger_nagy_upper_bound",
                             {"a": args.a, "b": args.b, "q": args.q},
                             heger_nagy_upper_bound(args.a, args.b, args.q),
                             comparison=(gaussian(args.a, args.b, args.q),
                                         gaussian(args.a, args.b, args.q)
                                         < heger_nagy_upper_bound(args.a, args.b, args.q)))
    else:
        raise ValueError(f"unknown formula {args.formula!r}")
    _emit(report.to_dict())
    return EXIT_OK


def _cmd_search(args) -> int:
    ctx = _context(args)
    report = search.min_blocking_search(ctx, args.k, args.cap, mode=args.mode,
                                        workers=args.workers,
                                        budget_seconds=_default_budget(args))
    _emit(report.to_dict())
    return EXIT_OK


def _cmd_classify(args) -> int:
    ctx = _context(args)
    verdict = search.classify_minimum(ctx, args.k, size_cap=args.cap,
                                      mode=args.mode, workers=args.workers,
                                      budget_seconds=_default_budget(args))
    _emit(verdict.to_dict())
    if verdict.all_minima_match_theorem is False:
        return EXIT_PROPERTY_FAILS
    if verdict.method == "fallback" and verdict.observed_minimum is None:
        return EXIT_PROPERTY_FAILS
    return EXIT_OK


def _lemma_suite(bset: BlockingSet) -> dict:
    """The equality-case diagnostics, reported check by check."""
    ctx, k = bset.ctx, bset.k
    q = ctx.q
    checks: dict[str, dict] = {}
    blocking_ok = blocking.is_blocking(bset)[0]
    size_bound = q ** k * (q + 1)
    at_equality = blocking_ok and bset.size == size_bound
    point_idx = {p.index for p in bset.points}

    checks["size_bound"] = {
        "applicable": blocking_ok and ctx.n == 2 * k + 1,
        "pass": (not blocking_ok) or ctx.n != 2 * k + 1 or bset.size >= size_bound,
        "bound": size_bound,
        "size": bset.size,
    }

    if ctx.n == 2 * k + 1 and k >= 1:
        failures = []
        count = 0
        for flat in ctx.subspaces(k - 1):
            if any(p.index in point_idx for p in ctx.subspace_points(flat)):
                continue
            count += 1
            profile = blocking.skew_space_profile(bset, flat)
            bound_ok = (not blocking_ok) or profile.count >= profile.bound
            conclusions_ok = ((not blocking_ok) or (not profile.equality)
                              or (profile.single_point_per_kspace
                                  and profile.point_count_multiple))
            if not (bound_ok and conclusions_ok):
                failures.append(_subspace_json(ctx, flat))
        checks["skew_cospace_bound"] = {
            "applicable": blocking_ok,
            "pass": not failures,
            "flats_checked": count,
            "counterexamples": failures[:3],
        }
    incident = [(p, hp) for p in bset.points for hp in bset.hyperplanes
                if ctx.contains(hp, p)]
    checks["no_incident_pair"] = {
        "applicable": at_equality,
        "pass": (not at_equality) or not incident,
        "counterexamples": [
            {"point": list(p.coords),
             "hyperplane": list(ctx.hyperplane_dual_point(hp).coords)}
            for p, hp in incident[:3]],
    }
    checks["point_part_multiple"] = {
        "applicable": at_equality,
        "pass": (not at_equality) or len(bset.points) % q ** k == 0,
        "points": len(bset.points),
    }
    if bset.points:
        closure = blocking.tangent_closure(ctx, bset.points)
        separation_ok = closure.hypothesis_ok or not at_equality
        checks["tangent_secant_separation"] = {
            "applicable": at_equality,
            "pass": separation_ok,
            "violator": list(closure.violator.coords) if closure.violator else None,
        }
        checks["tangent_closure_dimension"] = {
            "applicable": closure.hypothesis_ok,
            "pass": (not closure.hypothesis_ok)
                    or (closure.is_subspace and closure.dim == closure.expected_dim),
            "dim": closure.dim,
            "expected_dim": closure.expected_dim,
        }
        if at_equality and closure.hypothesis_ok and closure.is_subspace \
                and closure.dim <= k + 1 and ctx.n == 2 * k + 1:
            hull = ctx.span(*bset.points)
            if hull.dim < k + 1:
                for pt in ctx.points():
                    if not ctx.contains(hull, pt):
                        hull = ctx.span(hull, pt)
                        if hull.dim == k + 1:
                            break
            failures = []
            pins = 0
            for pt in ctx.subspace_points(hull):
                if pt.index in point_idx:
                    continue
                pins += 1
                rep = blocking.pinned_hyperplanes(bset, hull, pt)
                if rep.case != blocking.VACUOUS and not rep.bound_ok:
                    failures.append(list(pt.coords))
            checks["pinned_hyperplane_dichotomy"] = {
                "applicable": True,
                "pass": not failures,
                "pins_checked": pins,
                "counterexamples": failures[:3],
            }
    return checks


def _cmd_lemma_check(args) -> int:
    bset = _read_blocking_set(args.input)
    checks = _lemma_suite(bset)
    all_ok = all(c["pass"] for c in checks.values())
    _emit({"checks": checks, "all_pass": all_ok})
    return EXIT_OK if all_ok else EXIT_PROPERTY_FAILS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgblock",
        description="Exact workbench for mixed blocking sets in PG(n, q)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_geometry(p):
        p.add_argument("--q", type=int, required=True, help="field order (prime power)")
        p.add_argument("--n", type=int, required=True, help="projective dimension")
        p.add_argument("--k", type=int, required=True, help="dimension being blocked")

    def add_search_flags(p):
        p.add_argument("--mode", choices=("branch_and_bound", "exhaustive"),
                       default="branch_and_bound")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--budget-seconds", type=float, default=None,
                       help="wall-clock budget (or env PGBLOCK_BUDGET_SECONDS)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved for randomized drivers; sampling order only")

    p = sub.add_parser("verify", help="check the blocking property")
    p.add_argument("input", help="blocking-set JSON path, or - for stdin")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("minimal", help="check minimality of a blocking set")
    p.add_argument("input")
    p.set_defaults(func=_cmd_minimal)

    p = sub.add_parser("dual", help="emit the dual blocking set")
    p.add_argument("input")
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("construct", help="emit a construction instance")
    add_geometry(p)
    p.add_argument("--kind", default="pencil-partition",
                   choices=("pencil-partition", "bose-burton-points",
                            "bose-burton-hyperplanes", "q2-even"))
    p.add_argument("--t", type=int, default=1,
                   help="pencil members contributing points (1 <= t <= q)")
    p.add_argument("--params", default=None,
                   help="JSON file with explicit subspace bases")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("bounds", help="evaluate a bound formula exactly")
    p.add_argument("--formula", default="main-theorem",
                   choices=("main-theorem", "gaussian", "theta", "metsch",
                            "metsch-dual", "heger-nagy"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--b-size", type=int, default=0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("search", help="find all minimum blocking sets up to a cap")
    add_geometry(p)
    p.add_argument("--cap", type=int, required=True)
    add_search_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("classify", help="search and compare with the classification")
    add_geometry(p)
    p.add_argument("--cap", type=int, default=None)
    add_search_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("lemma-check", help="equality-case diagnostics for a set")
    p.add_argument("input")
    p.set_defaults(func=_cmd_lemma_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        _warn(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except _INPUT_ERRORS as exc:
        _warn(f"invalid input: {exc}")
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
