"""Command-line front end.

Exit codes: 0 success, 1 verification failure (a JSON witness goes to
stdout), 2 usage or configuration error, 3 ball-soundness or braid-search
overflow (the offending element is named on stderr).

System files are JSON: {"generators": [...], "m": [[...]], "weights":
[...], "family": "complete"|"right-angled"} with 0 in the matrix meaning
an infinite bond.  The KL-row cache (--cache) is JSON with a format
version and a system hash; a stale or foreign cache is rebuilt with a
warning, never trusted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys

from . import conjectures, dihedral, kl, quotient, strata
from .coxeter import CoxeterSystem
from .errors import (
    BraidOverflowError,
    ConfigError,
    InvariantViolationError,
    OutOfBallError,
)
from .hecke import mul_T, t_element


def _load_system(args) -> CoxeterSystem:
    if not getattr(args, "system", None):
        raise ConfigError(f"'{args.command}' needs --system FILE")
    try:
        with open(args.system) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"system file not found: {args.system}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{args.system}:{exc.lineno}: invalid JSON ({exc.msg})"
        ) from None
    return CoxeterSystem.from_config(cfg)


def _word(sys, text: str):
    """Parse a space-separated word; '' and 'e' mean the identity."""
    stripped = text.strip()
    if stripped == "e" and "e" not in sys.generators:
        stripped = ""
    return sys.element(stripped)


def _table(sys, args) -> kl.KLTable:
    table = kl.get_table(sys)
    cache = getattr(args, "cache", None)
    if cache and os.path.exists(cache):
        try:
            n = table.load_cache(cache)
            print(f"loaded {n} cached rows from {cache}", file=_sys.stderr)
        except ConfigError as exc:
            print(f"warning: ignoring cache ({exc}); rebuilding", file=_sys.stderr)
    return table


def _save_cache(table, args) -> None:
    cache = getattr(args, "cache", None)
    if cache:
        table.save_cache(cache)


def _need_radius(args) -> int:
    if args.radius is None:
        raise ConfigError(f"'{args.command}' needs --radius N")
    if args.radius < 0:
        raise ConfigError("--radius must be >= 0")
    return args.radius


def _emit(args, lines, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


# -- subcommands -----------------------------------------------------------------


def cmd_mul(args) -> int:
    sys = _load_system(args)
    table = _table(sys, args)
    els = [_word(sys, w) for w in args.words]
    acc = t_element(sys, els[0])
    for el in els[1:]:
        acc = mul_T(sys, acc, t_element(sys, el))
    lhs = " * ".join(f"T[{sys.word_str(el)}]" for el in els)
    terms = [(sys.word_str(w), str(p)) for w, p in sorted(acc.terms.items())]
    _emit(
        args,
        [f"{lhs} = {acc.pretty(sys)}"],
        {"product": [sys.word_str(el) for el in els], "basis": "T", "terms": terms},
    )
    _save_cache(table, args)
    return 0


def cmd_klpoly(args) -> int:
    sys = _load_system(args)
    table = _table(sys, args)
    w = _word(sys, args.w)
    if args.y is not None:
        y = _word(sys, args.y)
        p = table.p(y, w)
        _emit(
            args,
            [f"p[{sys.word_str(y)}, {sys.word_str(w)}] = {p}"],
            {"w": sys.word_str(w), "y": sys.word_str(y), "p": str(p)},
        )
    else:
        row = sorted(table.kl_row(w).items())
        _emit(
            args,
            [f"p[{sys.word_str(y)}, {sys.word_str(w)}] = {p}" for y, p in row],
            {"w": sys.word_str(w), "row": [(sys.word_str(y), str(p)) for y, p in row]},
        )
    _save_cache(table, args)
    return 0


def cmd_afn(args) -> int:
    sys = _load_system(args)
    st = strata.get_stratification(sys)
    w = _word(sys, args.word)
    rec = st.a_structural(w)
    factor = sys.word_str(rec.factor) if rec.factor is not None else "?"
    lines = [f"a({sys.word_str(w)}) = {rec.a}  [structural, witness d = {factor}]"]
    payload = {
        "w": sys.word_str(w),
        "a": rec.a,
        "method": rec.method,
        "witness_d": factor,
    }
    status = 0
    if args.oracle:
        table = _table(sys, args)
        radius = args.search_radius
        if radius is None:
            radius = w.length + max(de.element.length for de in st.D)
        elif radius < w.length:
            raise ConfigError("--search-radius must be at least l(w)")
        orec = kl.a_oracle(sys, table, w, radius)
        lines.append(f"a({sys.word_str(w)}) = {orec.a}  [oracle, radius {radius}]")
        payload["a_oracle"] = orec.a
        payload["oracle_radius"] = radius
        if orec.a != rec.a:
            lines.append("MISMATCH between structural and oracle values")
            payload["status"] = "fail"
            status = 1
        _save_cache(table, args)
    _emit(args, lines, payload)
    if status:
        print(json.dumps(payload))
    return status


def cmd_strata(args) -> int:
    sys = _load_system(args)
    st = strata.get_stratification(sys)
    if args.d is not None:
        radius = _need_radius(args)
        d = _word(sys, args.d)
        try:
            rec = st.d_record(d)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        ud = [sys.word_str(y) for y in st.compute_Ud(d, radius)]
        bd = [sys.word_str(b) for b in st.compute_Bd(d, radius)]
        _emit(
            args,
            [
                f"d = {sys.word_str(d)}  (a' = {rec.a_prime}, {rec.kind})",
                f"U_d ball({radius}): {ud}",
                f"B_d ball({radius}): {bd}",
            ],
            {"d": sys.word_str(d), "a_prime": rec.a_prime, "kind": rec.kind,
             "radius": radius, "U_d": ud, "B_d": bd},
        )
        return 0
    levels = st.levels if args.list is None else [args.list]
    lines = []
    payload = {"levels": levels, "D": []}
    for lvl in levels:
        lines.append(f"level {lvl}:")
        for de in st.d_at_level(lvl):
            lines.append(f"  {sys.word_str(de.element)}  ({de.kind})")
            payload["D"].append(
                {"d": sys.word_str(de.element), "a_prime": de.a_prime, "kind": de.kind}
            )
    _emit(args, lines, payload)
    return 0


def cmd_cells(args) -> int:
    sys = _load_system(args)
    radius = _need_radius(args)
    st = strata.get_stratification(sys)
    table = _table(sys, args)
    rep = conjectures.compute_cells(sys, st, radius)
    dot = rep.to_dot(sys)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(dot)
    if args.format == "dot":
        print(dot, end="")
    else:
        lines = [f"ball radius {radius}: {sum(len(v) for v in rep.two_sided.values())} elements"]
        for lvl, members in rep.two_sided.items():
            lines.append(f"two-sided a={lvl}: {[sys.word_str(w) for w in members]}")
        for (b, d), members in rep.right_cells.items():
            lines.append(
                f"right cell (b={sys.word_str(b)}, d={sys.word_str(d)}): "
                f"{[sys.word_str(w) for w in members]}"
            )
        lines.append(f"empirical edges: {len(rep.empirical_edges)}")
        lines.append(f"discrepancies: {len(rep.discrepancies)}")
        payload = {
            "radius": radius,
            "two_sided": {
                str(lvl): [sys.word_str(w) for w in ms]
                for lvl, ms in rep.two_sided.items()
            },
            "right_cells": [
                {"b": sys.word_str(b), "d": sys.word_str(d),
                 "members": [sys.word_str(w) for w in ms]}
                for (b, d), ms in rep.right_cells.items()
            ],
            "left_cells": [
                {"b": sys.word_str(b), "d": sys.word_str(d),
                 "members": [sys.word_str(w) for w in ms]}
                for (b, d), ms in rep.left_cells.items()
            ],
            "edges": len(rep.empirical_edges),
            "discrepancies": rep.discrepancies,
        }
        _emit(args, lines, payload)
    _save_cache(table, args)
    if rep.discrepancies:
        print(json.dumps({"discrepancies": rep.discrepancies}))
        return 1
    return 0


def cmd_decomp(args) -> int:
    sys = _load_system(args)
    table = _table(sys, args)
    d = _word(sys, args.d)
    b = _word(sys, args.b)
    y = _word(sys, args.y)
    radius = args.radius
    if radius is None:
        radius = 2 * (b.length + d.length + y.length) + 2
    ctx = quotient.QuotientContext(sys, args.N, radius, table=table)
    try:
        ok, report = ctx.verify_decomposition(d, b, y)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = [
        f"N = {args.N}, d = {sys.word_str(d)}, b = {sys.word_str(b)}, "
        f"y = {sys.word_str(y)}  (ball radius {radius})",
        f"eta_d = {report.pair.eta_d}",
        *report.lines(),
    ]
    payload = {
        "N": args.N,
        "d": sys.word_str(d), "b": sys.word_str(b), "y": sys.word_str(y),
        "eta_d": str(report.pair.eta_d),
        "ok": ok,
        "checked": report.checked,
        "failures": [
            {"identity": n, "at": w, "got": g, "expected": e}
            for n, w, g, e in report.failures
        ],
    }
    _emit(args, lines, payload)
    _save_cache(table, args)
    if not ok:
        print(json.dumps({"failures": payload["failures"]}))
        return 1
    return 0


def cmd_dihedral(args) -> int:
    p = dihedral.DihedralParams(args.m, args.a, args.b)
    sys = p.system
    if args.action == "cells":
        lines = []
        cells = []
        for members, a in p.cells():
            words = sorted(sys.word_str(w) for w in members)
            lines.append(f"a={a}: {words}")
            cells.append({"a": a, "members": words})
        _emit(args, lines, {"m": args.m, "weights": [p.a, p.b], "cells": cells})
        return 0
    if args.action == "Fuv":
        if args.u is None or args.v is None:
            raise ConfigError("Fuv needs --u WORD and --v WORD")
        u, v = _word(sys, args.u), _word(sys, args.v)
        try:
            val = p.F_uv(u, v)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        _emit(
            args,
            [f"F({sys.word_str(u)}, {sys.word_str(v)}) = {val}"],
            {"u": sys.word_str(u), "v": sys.word_str(v), "F": str(val)},
        )
        return 0
    if args.action == "degp":
        if args.v is None:
            raise ConfigError("degp needs --v WORD")
        v = _word(sys, args.v)
        try:
            deg = p.deg_p_to_dI(v)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        _emit(
            args,
            [f"deg p[{sys.word_str(v)}, {sys.word_str(p.d_I)}] = {deg}"],
            {"v": sys.word_str(v), "d_I": sys.word_str(p.d_I), "deg": deg},
        )
        return 0
    raise ConfigError(f"unknown dihedral action {args.action!r}")


def _parse_props(spec: str) -> list[str]:
    out = []
    for part in spec.replace(" ", "").split(","):
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            if not (lo.startswith("P") and hi.startswith("P")):
                raise ConfigError(f"bad property range {part!r}")
            for i in range(int(lo[1:]), int(hi[1:]) + 1):
                out.append(f"P{i}")
        else:
            out.append(part)
    for p in out:
        if p not in conjectures.PROPERTIES and p not in ("DN", "gamma-core"):
            raise ConfigError(f"unknown property {p!r}")
    return out


def cmd_verify(args) -> int:
    sys = _load_system(args)
    radius = _need_radius(args)
    st = strata.get_stratification(sys)
    table = _table(sys, args)
    levels = None
    if args.N is not None:
        levels = {int(x) for x in str(args.N).split(",")}
    props = _parse_props(args.props)
    ver = conjectures.Verifier(sys, radius, table=table, strat=st, levels=levels)
    results = []
    core = [p for p in props if p in conjectures.PROPERTIES]
    results.extend(ver.check_all(core, jobs=args.jobs))
    if "DN" in props:
        results.append(conjectures.dn_involutions_check(sys, st, table, radius))
    if "gamma-core" in props:
        results.append(conjectures.check_gamma_core_factorization(sys, st, table, radius))
    lines = []
    for r in results:
        lines.append(
            f"{r.prop:<14} {r.status:<8} checked={r.checked:<6} skips={len(r.skipped)}"
        )
    _emit(args, lines, [r.to_dict() for r in results])
    _save_cache(table, args)
    failures = [r for r in results if r.status == "fail"]
    if failures:
        print(json.dumps({"failures": [r.to_dict() for r in failures]}))
        return 1
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckecells",
        description="Canonical bases, a-function strata, quotient factorizations, "
        "cell partitions, and property verification for weighted Coxeter systems.",
    )
    parser.add_argument("--system", metavar="FILE", help="system config (JSON)")
    parser.add_argument("--radius", type=int, default=None, help="ball radius")
    parser.add_argument("--cache", metavar="FILE", help="KL-row cache (JSON)")
    parser.add_argument(
        "--format", choices=("text", "json", "dot"), default="text",
        help="output format (dot only for 'cells')",
    )
    parser.add_argument("--jobs", type=int, default=1, help="parallel check workers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", help="multiply standard-basis elements")
    p.add_argument("words", nargs="+", metavar="WORD")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("klpoly", help="canonical-basis row p[y, w]")
    p.add_argument("w", metavar="WORD")
    p.add_argument("y", nargs="?", default=None, metavar="LOWER")
    p.set_defaults(func=cmd_klpoly)

    p = sub.add_parser("afn", help="a-function value with witness")
    p.add_argument("word", metavar="WORD")
    p.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    p.add_argument("--search-radius", type=int, default=None)
    p.set_defaults(func=cmd_afn)

    p = sub.add_parser("strata", help="distinguished elements and their levels")
    p.add_argument("--list", type=int, default=None, metavar="N",
                   help="only the level-N distinguished elements")
    p.add_argument("--d", metavar="WORD", help="show U_d and B_d in the ball")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("cells", help="cell partition of a ball")
    p.add_argument("--dot", metavar="FILE", help="also write a DOT graph")
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("decomp", help="verify the factorization at (b, d, y)")
    p.add_argument("--N", type=int, required=True, help="stratum level")
    p.add_argument("--d", required=True, metavar="WORD")
    p.add_argument("--b", required=True, metavar="WORD")
    p.add_argument("--y", required=True, metavar="WORD")
    p.set_defaults(func=cmd_decomp)

    p = sub.add_parser("dihedral", help="closed-form checks for rank 2")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("action", choices=("cells", "Fuv", "degp"))
    p.add_argument("--u", metavar="WORD")
    p.add_argument("--v", metavar="WORD")
    p.set_defaults(func=cmd_dihedral)

    p = sub.add_parser("verify", help="run property checks over a ball")
    p.add_argument(
        "--props", default="P1..P15",
        help="comma list / P-ranges, e.g. 'P1..P15' or 'P6,P13,DN,gamma-core'",
    )
    p.add_argument("--N", default=None, help="restrict to these a-levels (comma list)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except (OutOfBallError, BraidOverflowError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 3
    except InvariantViolationError as exc:
        print(json.dumps({"invariant_violation": str(exc)}))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
