"""Command-line front end: ``ufam <verb> ...`` prints JSON (or a table with ``--table``).

Exit codes: 0 success, 2 DSL parse error, 3 rejected ground set,
4 precondition violation (including ``limit`` on members with ``min(t) <= 1``).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from .adequacy import DEFAULT_WINDOW, is_adequate, is_omega_adequate
from .derivative import (
    LimitReason,
    cb_index_pow,
    finite_derivative_member_pow,
    finite_derivative_sufficient,
    is_limit_point,
    nash_williams_demo,
    witness_oracle,
)
from .errors import DSLError, PreconditionError, RejectedGroundSet
from .family import Pow, enumerate_members, fam_member, lex_rank_parts, parse_family, t_min
from .ftree import FTreeSchema, et_adequate_certificate, et_expand, et_groundset, validate_ftree
from .ordinal import OMEGA, ord_add
from .setcore import ALL, contains_all, parse_finset, parse_groundset

EXIT_DSL = 2
EXIT_REJECTED = 3
EXIT_PRECONDITION = 4


def _ground(text: str | None):
    g = parse_groundset(text) if text is not None else ALL
    g.normal  # normalize now so rejection surfaces before any work
    return g


def cmd_rank(a) -> dict:
    fam = parse_family(a.family)
    return {"family": str(fam), "rank": str(fam.rank)}


def cmd_member(a) -> dict:
    fam = parse_family(a.family)
    t = parse_finset(a.finset)
    M = _ground(a.ground)
    return {"member": fam_member(fam, t) and contains_all(M, t)}


def cmd_tmin(a) -> dict:
    return {"t": list(t_min(parse_family(a.family), a.n))}


def cmd_enum(a) -> dict:
    fam = parse_family(a.family)
    M = _ground(a.restrict)
    return {"members": [list(t) for t in enumerate_members(fam, M, a.count)]}


def cmd_lexrank(a) -> dict:
    fam = parse_family(a.family)
    t = parse_finset(a.finset)
    head, inner = lex_rank_parts(fam, t, _ground(a.restrict))
    return {"rank": str(ord_add(head, inner)), "block": str(head), "inner": str(inner)}


def cmd_limit(a) -> dict:
    fam = parse_family(a.family)
    M = _ground(a.ground)
    t = parse_finset(a.finset)
    v = is_limit_point(fam, M, t)
    out = {"is_limit": v.is_limit, "u": list(v.u), "p": v.p, "m": v.m, "reason": v.reason.value}
    if a.witnesses:
        out["witnesses"] = [list(w) for w in witness_oracle(fam, M, t, a.witnesses)]
    if v.reason is LimitReason.MIN_TOO_SMALL_UNSUPPORTED:
        raise PreconditionError(f"min(t) <= 1 is outside the limit-point characterization: {json.dumps(out)}")
    return out


def cmd_deriv(a) -> dict:
    fam = parse_family(a.family)
    M = _ground(a.ground)
    t = parse_finset(a.finset)
    out: dict[str, Any] = {"level": a.level, "sufficient": finite_derivative_sufficient(fam, M, t, a.level)}
    if isinstance(fam.expr, Pow) and fam.base == 0 and 2 <= a.level < fam.expr.k:
        out["member"] = finite_derivative_member_pow(fam.expr.k, M, t, a.level)
    return out


def cmd_cbindex(a) -> dict:
    fam = parse_family(a.family)
    M = _ground(a.ground)
    if isinstance(fam.expr, Pow) and fam.base == 0 and fam.expr.k > 2:
        return cb_index_pow(fam.expr.k, M).to_json()
    if fam.rank == OMEGA:
        ok = is_omega_adequate(M)
        return {"index": "w" if ok else None, "omega_adequate": ok}
    tr = is_adequate(fam, M, a.window)
    return {"index": str(fam.rank) if tr.verdict else None, "adequate": tr.verdict, "certified": tr.certified}


def cmd_adequate(a) -> dict:
    return is_adequate(parse_family(a.family), _ground(a.ground), a.window).to_json()


def cmd_etree(a) -> dict:
    fam = parse_family(a.family)
    schema = FTreeSchema.load(a.schema)
    report = validate_ftree(fam, schema)
    out: dict[str, Any] = report.to_json()
    if report.valid:
        out["contributions"] = [list(c) for c in et_expand(fam, schema, a.budget)]
        out["ground"] = str(et_groundset(fam, schema))
        out["certificate"] = et_adequate_certificate(fam, schema).to_json()
    return out


def cmd_nwdemo(a) -> dict:
    t, v = nash_williams_demo(parse_family(a.family), _ground(a.ground))
    return {"t": list(t), "verdict": v.to_json()}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", action="store_true", help="aligned table instead of JSON")

    p = argparse.ArgumentParser(prog="ufam", description="Uniform families, fronts and adequate sets.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("rank", cmd_rank, "uniform rank of a family")
    sp.add_argument("family")

    sp = verb("member", cmd_member, "membership of a finite set in F|M")
    sp.add_argument("family")
    sp.add_argument("finset")
    sp.add_argument("ground", nargs="?")

    sp = verb("tmin", cmd_tmin, "the member that is an initial segment of {n, n+1, ...}")
    sp.add_argument("family")
    sp.add_argument("n", type=int)

    sp = verb("enum", cmd_enum, "members in lexicographic order")
    sp.add_argument("family")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--restrict")

    sp = verb("lexrank", cmd_lexrank, "ordinal position of a member")
    sp.add_argument("family")
    sp.add_argument("finset")
    sp.add_argument("--restrict")

    sp = verb("limit", cmd_limit, "is a member a limit point of F|M")
    sp.add_argument("family")
    sp.add_argument("ground")
    sp.add_argument("finset")
    sp.add_argument("--witnesses", type=int, default=0, metavar="N")

    sp = verb("deriv", cmd_deriv, "finite derivative membership")
    sp.add_argument("family")
    sp.add_argument("ground")
    sp.add_argument("finset")
    sp.add_argument("level", type=int)

    sp = verb("cbindex", cmd_cbindex, "Cantor-Bendixson index of F|M")
    sp.add_argument("family")
    sp.add_argument("ground")
    sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)

    sp = verb("adequate", cmd_adequate, "decide F-adequacy with a transcript")
    sp.add_argument("family")
    sp.add_argument("ground")
    sp.add_argument("--window", type=int, default=DEFAULT_WINDOW)

    sp = verb("etree", cmd_etree, "validate an F-tree schema and build E(T)")
    sp.add_argument("family")
    sp.add_argument("schema", help="JSON schema file")
    sp.add_argument("--budget", type=int, default=10)

    sp = verb("nwdemo", cmd_nwdemo, "a member of F|M that is not a limit point")
    sp.add_argument("family")
    sp.add_argument("ground")
    return p


def _cell(v: Any) -> str:
    return v if isinstance(v, str) else json.dumps(v, separators=(",", ":"))


def render_table(doc: dict) -> str:
    width = max((len(k) for k in doc), default=0)
    return "\n".join(f"{k.ljust(width)}  {_cell(v)}" for k, v in doc.items())


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.fn(args)
    except DSLError as exc:
        print(exc.describe(), file=sys.stderr)
        return EXIT_DSL
    except RejectedGroundSet as exc:
        print(f"rejected ground set: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 1
    print(render_table(doc) if args.table else json.dumps(doc, separators=(",", ":")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
