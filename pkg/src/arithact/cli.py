"""Command-line front end.

Exit codes: 0 success, 1 verified negative result, 2 inconclusive or a
resource cap was hit, 3 usage error or malformed input.  Any option value
of the form ``@path`` is read from that file.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import amenability as amen
from . import circle, freegroup, heisenberg, matred, orders
from .groups import FreeAbelianBackend, FreeGroupBackend, HeisenbergBackend, IntMatrixGroupBackend

SCHEMA = 1
OK, NEGATIVE, INCONCLUSIVE, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _value(text: str) -> str:
    if isinstance(text, str) and text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def _json_arg(text: str):
    return json.loads(_value(text))


def _fraction(text: str) -> Fraction:
    return Fraction(_value(text).strip())


def _pl(text: str) -> circle.PLCircleLift:
    return circle.PLCircleLift.from_json(_json_arg(text))


def _group(text: str):
    s = _value(text).strip()
    if s in ("H", "heisenberg"):
        return HeisenbergBackend()
    if s[:1] in "ZF" and s[1:].isdigit():
        n = int(s[1:])
        return FreeAbelianBackend(n) if s[0] == "Z" else FreeGroupBackend(n)
    gens = json.loads(s)
    if not gens:
        raise ValueError("matrix group needs at least one generator")
    return IntMatrixGroupBackend(len(gens[0]), gens)


def _matrix_rows(m) -> list:
    return [[str(v) for v in row] for row in m]


# -- reduce / artin ------------------------------------------------------------

def cmd_reduce(args):
    if args.mode == "stats":
        rng = random.Random(args.seed)
        ms = [matred.random_sl2z(rng) for _ in range(args.count)]
        st = matred.elementary_word_length_stats(ms, args.p, args.cap)
        st.pop("euclid_ops")
        text = (f"euclid ops max {st['euclid_max']}, bounded ops max {st['bounded_ops_max']}, "
                f"not found {st['bounded_not_found']}\n"
                f"Carter-Keller constant for n = 3: (3*3^2 - 3)/2 + 36 = {st['carter_keller_n3']}")
        return OK, st, text
    m = _json_arg(args.matrix)
    if args.mode == "euclid":
        ops = matred.euclid_reduce(m)
        mats = matred.apply_ops(matred.as_int_matrix(m), ops)
        trace = [{"op": str(op), "intermediate": _matrix_rows(x)} for op, x in zip(ops, mats)]
        return OK, {"ops": len(ops), "trace": trace}, _trace_text(trace)
    red = matred.bounded_reduce(m, args.p, args.cap)
    report = {"ops": len(red.ops), "p": red.p, "q": red.q, "k": red.k, "ell": red.ell,
              "fast_path": red.fast_path, "step1_denominator_exp": red.step1_denominator,
              "trace": red.trace()}
    return OK, report, _trace_text(report["trace"])


def _trace_text(trace) -> str:
    lines = []
    for i, t in enumerate(trace, 1):
        label = f" [{t['step']}]" if "step" in t else ""
        lines.append(f"{i}. {t['op']}{label}  ->  {t['intermediate']}")
    return "\n".join(lines) or "already the identity"


def cmd_artin(args):
    hit = matred.artin_instance(args.a, args.b, args.r, args.cap)
    return OK, {"q": hit.q, "k": hit.k,
                "powers": matred.power_list(args.r, hit.q) if hit.q <= 100 else None}, \
        f"q = {hit.q} (k = {hit.k})"


# -- quasimorphisms --------------------------------------------------------------

def _phi(text: str):
    # a bare word is shorthand for its Brooks counting function
    return freegroup.parse_quasimorphism(text if ":" in text else f"brooks:{text}")


def cmd_quasi(args):
    if args.mode == "eval":
        phi = _phi(args.phi)
        w = freegroup.ReducedWord.parse(_value(args.word))
        v = phi(w)
        return OK, {"phi": phi.label(), "word": str(w), "value": v}, str(v)
    if args.mode == "defect":
        phi = _phi(args.phi)
        if args.count:
            pairs = freegroup.random_pairs(2, args.length, args.count, args.seed)
        else:
            pairs = freegroup.exhaustive_pairs(2, args.radius, args.cap)
        rep = freegroup.defect_scan(phi, pairs)
        code = OK if rep.defect_max <= args.bound else NEGATIVE
        return code, rep.to_json(), f"max defect {rep.defect_max} over {rep.pairs} pairs"
    x, table = freegroup.separation_witness(args.k, args.n, args.m)
    text = f"x = {x}\n" + "\n".join(f"{k}: {v}" for k, v in table.items())
    return OK, {"word": str(x), "values": table}, text


# -- Heisenberg --------------------------------------------------------------------

def cmd_heis(args):
    if args.mode == "mul":
        g, h = heisenberg.parse_element(_value(args.g)), heisenberg.parse_element(_value(args.h))
        gh = heisenberg.mul(g, h)
        return OK, {"product": str(gh), "triple": gh.as_triple(),
                    "matrix": [list(r) for r in heisenberg.to_matrix(gh)]}, str(gh)
    if args.mode == "lemma":
        names = [o.name for o in heisenberg.all_orders()] if args.order == "all" else [args.order]
        results = {}
        for name in names:
            try:
                results[name] = heisenberg.verify_lemma(heisenberg.HeisOrder.parse(name))
            except heisenberg.LemmaViolation:
                results[name] = "neither"
        code = NEGATIVE if "neither" in results.values() else OK
        return code, {"orders": results}, "\n".join(f"{k}: {v}" for k, v in results.items())
    X, Y, Z = heisenberg.X, heisenberg.Y, heisenberg.Z
    pw, mul = heisenberg.power, heisenberg.mul
    checks = {
        "z_is_commutator": heisenberg.commutator(X, Y) == Z,
        "z_central": mul(Z, X) == mul(X, Z) and mul(Z, Y) == mul(Y, Z),
        "commute_rule": all(mul(pw(X, k), pw(Y, l)) == mul(mul(pw(Y, l), pw(X, k)), pw(Z, k * l))
                            for k in range(-args.k, args.k + 1) for l in range(-args.k, args.k + 1)),
        "power_word": all(heisenberg.power_word(n) == pw(Z, -n * n) for n in range(args.n + 1)),
    }
    code = OK if all(checks.values()) else NEGATIVE
    return code, {"checks": checks}, "\n".join(f"{k}: {v}" for k, v in checks.items())


# -- orders --------------------------------------------------------------------------

def cmd_order(args):
    if args.mode == "search":
        backend = _group(args.group)
        res = orders.cone_search(backend, backend.generators(), args.radius, cap=args.cap)
        report = {"group": backend.name, "radius": res.radius, "verdict": res.verdict, "nodes": res.nodes}
        if isinstance(res, orders.Orderable):
            report["cone_size"] = len(res.cone)
            report["cone"] = sorted(backend.format(g) for g in res.cone)
            return OK, report, f"consistent cone on the radius-{res.radius} ball ({len(res.cone)} elements)"
        if isinstance(res, orders.NotLeftOrderable):
            report["certificate"] = orders.certificate_to_json(backend, res.certificate)
            report["certificate_checked"] = orders.check_certificate(backend, res.certificate)
            return NEGATIVE, report, "not left-orderable: every sign choice reaches e"
        report["reason"] = res.reason
        return INCONCLUSIVE, report, f"inconclusive: {res.reason}"
    if args.mode == "sl3":
        branches = {"2<<3": (2, 3), "2<<1": (2, 1)}
        chosen = list(branches) if args.branch == "both" else [args.branch]
        if any(b not in branches for b in chosen):
            raise UsageError(f"--branch must be one of {sorted(branches)} or 'both'")
        out, lines, all_ok = [], [], True
        for b in chosen:
            tr = orders.sl3_contradiction(branches[b])
            ok, msg = orders.check_trace(tr)
            all_ok &= ok
            out.append({"branch": b, "lemma_applications": tr.lemma_applications,
                        "contradiction": tr.contradiction, "checked": ok, "trace": tr.to_json()})
            lines.append(f"branch {b}: {tr.lemma_applications} lemma applications, "
                         f"ends at {tr.contradiction[0]}<<{tr.contradiction[1]}, replay {msg}")
            for s in tr.steps:
                lines.append(f"  {s['rule']}: {s['conclusion']}")
        if args.out:
            Path(args.out).write_text(json.dumps(out[0]["trace"] if len(out) == 1 else
                                                 [o["trace"] for o in out], indent=2))
        code = NEGATIVE if all_ok else INCONCLUSIVE
        return code, {"branches": out, "triples_ok": all(t.ok for t in orders.verify_heis_triples())}, \
            "\n".join(lines)
    if args.mode == "replay":
        data = _json_arg(args.trace)
        traces = data if isinstance(data, list) else [data]
        results = [orders.check_trace(t) for t in traces]
        ok = all(r[0] for r in results)
        return OK if ok else NEGATIVE, {"results": [{"ok": r[0], "message": r[1]} for r in results]}, \
            "\n".join(r[1] for r in results)
    order = heisenberg.HeisOrder.parse(args.order)
    backend = HeisenbergBackend()
    sample = list(backend.ball(backend.generators(), args.radius))
    rep = orders.order_axiom_check(backend, lambda g, h: heisenberg.compare(order, g, h).value,
                                   sample, args.samples, args.seed)
    report = {"order": order.name, "ok": rep.ok, "checked": rep.checked,
              "violation": None if rep.violation is None
              else [rep.violation[0], [str(g) for g in rep.violation[1]]]}
    return OK if rep.ok else NEGATIVE, report, "axioms hold" if rep.ok else f"violation {report['violation']}"


# -- amenability -----------------------------------------------------------------------

def cmd_amen(args):
    if args.mode == "folner":
        eps = _fraction(args.eps)
        S = _json_arg(args.S) if args.S else None
        if args.side:
            S = tuple(tuple(a) for a in (S or amen.unit_generators(args.dim)))
            rep = amen.check_folner(amen.FolnerCandidate(FreeAbelianBackend(args.dim),
                                                         amen.box(args.dim, args.side), S, eps))
            return (OK if rep.ok else NEGATIVE), rep.to_json(), f"{rep.verdict} {rep.witness or ''}"
        n, cand = amen.folner_box(args.dim, S, eps, args.cap)
        rep = amen.check_folner(cand)
        out = rep.to_json()
        out["side"] = n
        return OK, out, f"minimal side n = {n}"
    if args.mode == "ponzi":
        scheme = amen.build_ponzi_free(args.rank, args.radius)
        rep = amen.verify_ponzi(scheme)
        return (OK if rep.ok else NEGATIVE), rep.to_json(), amen.wealth_table(scheme)
    if args.mode == "paradox":
        rep = amen.verify_paradoxical(amen.build_paradoxical_f2(not args.omit_identity), args.radius)
        text = "\n".join(f"{k}: {v}" for k, v in rep.details["checks"].items())
        return (OK if rep.ok else NEGATIVE), rep.to_json(), text
    rep = amen.growth_obstruction(_group(args.group), args.radius, args.displacement)
    code = {"pass": OK, "fail": NEGATIVE}.get(rep.verdict, INCONCLUSIVE)
    return code, rep.to_json(), f"ball sizes {rep.details['ball_sizes']}"


# -- circle ---------------------------------------------------------------------------------

def cmd_circle(args):
    if args.mode == "cocycle":
        g, h = circle.normalize(_pl(args.g)), circle.normalize(_pl(args.h))
        c = circle.euler_cocycle(g, h)
        return OK, {"c": c, "g": g.to_json(), "h": h.to_json()}, str(c)
    if args.mode == "identity":
        rng = random.Random(args.seed)
        values, bad = set(), None
        for i in range(args.count):
            g, h, k = (circle.random_pl(rng) for _ in range(3))
            values.add(circle.euler_cocycle(g, h))
            if bad is None and circle.cocycle_defect(g, h, k) != 0:
                bad = {"index": i, "g": g.to_json(), "h": h.to_json(), "k": k.to_json()}
        ok = bad is None and values <= {0, 1}
        return (OK if ok else NEGATIVE), {"samples": args.count, "cocycle_values": sorted(values),
                                          "identity_violation": bad}, \
            f"cocycle values {sorted(values)}; identity {'holds' if bad is None else 'fails'}"
    if args.mode == "fixpoint":
        gens = [circle.normalize(circle.PLCircleLift.from_json(o)) for o in _json_arg(args.generators)]
        if args.fixed_point is not None:
            phi = circle.primitive_from_fixed_point(gens, _fraction(args.fixed_point))
        elif args.phi is not None:
            table = _json_arg(args.phi)
            phi = (lambda w, t=table: int(t.get(str(w), 0)))
        else:
            phi = (lambda w: 0)
        rep = circle.fixed_point_from_primitive(gens, phi, args.radius)
        code = OK if rep.verdict == "fixed" else NEGATIVE
        return code, rep.to_json(), f"{rep.verdict}" + (f": {rep.point}" if rep.point is not None else "")
    f = _pl(args.f)
    rep = circle.rotation_number(f, args.iterations, args.period_cap)
    text = f"rotation number {rep.exact}" if rep.exact is not None else f"in [{rep.lo}, {rep.hi}]"
    return OK, rep.to_json(), text


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=10**4)
    common.add_argument("--radius", type=int, default=None)

    p = _Parser(prog="arithact", description="Exact checks for orders, bounded generation, "
                "amenability and circle actions of arithmetic groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("reduce", parents=[common], help="row-reduce an SL(2) matrix")
    r.add_argument("mode", choices=["euclid", "bounded", "stats"])
    r.add_argument("--matrix", default="[[13,31],[5,12]]")
    r.add_argument("--p", type=int, default=2)
    r.add_argument("--count", type=int, default=100)
    r.set_defaults(func=cmd_reduce)

    a = sub.add_parser("artin", parents=[common], help="prime in a + kb with r primitive")
    a.add_argument("--a", type=int, required=True)
    a.add_argument("--b", type=int, required=True)
    a.add_argument("--r", type=int, default=2)
    a.set_defaults(func=cmd_artin)

    q = sub.add_parser("quasi", parents=[common], help="quasimorphisms on F2")
    q.add_argument("mode", choices=["eval", "defect", "separate"])
    q.add_argument("--phi", default="brooks:ab")
    q.add_argument("--word", default="e")
    q.add_argument("--bound", type=int, default=1)
    q.add_argument("--count", type=int, default=0, help="random pairs instead of a ball")
    q.add_argument("--length", type=int, default=12)
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--m", type=int, default=3)
    q.set_defaults(func=cmd_quasi)

    h = sub.add_parser("heis", parents=[common], help="Heisenberg group")
    h.add_argument("mode", choices=["mul", "lemma", "identity"])
    h.add_argument("--g", default="x")
    h.add_argument("--h", default="y")
    h.add_argument("--order", default="all")
    h.add_argument("--k", type=int, default=10)
    h.add_argument("--n", type=int, default=20)
    h.set_defaults(func=cmd_heis)

    o = sub.add_parser("order", parents=[common], help="left orders")
    o.add_argument("mode", choices=["search", "sl3", "replay", "axioms"])
    o.add_argument("--group", default="Z2")
    o.add_argument("--branch", default="both")
    o.add_argument("--out")
    o.add_argument("--trace")
    o.add_argument("--order", default="zxy:+++")
    o.add_argument("--samples", type=int, default=2000)
    o.set_defaults(func=cmd_order)

    m = sub.add_parser("amen", parents=[common], help="amenability witnesses")
    m.add_argument("mode", choices=["folner", "ponzi", "paradox", "growth"])
    m.add_argument("--dim", type=int, default=2)
    m.add_argument("--eps", default="1/10")
    m.add_argument("--S")
    m.add_argument("--side", type=int)
    m.add_argument("--rank", type=int, default=2)
    m.add_argument("--omit-identity", action="store_true")
    m.add_argument("--group", default="Z2")
    m.add_argument("--displacement", type=int, default=1)
    m.set_defaults(func=cmd_amen)

    c = sub.add_parser("circle", parents=[common], help="PL circle maps")
    c.add_argument("mode", choices=["cocycle", "identity", "fixpoint", "rotnum"])
    c.add_argument("--g", default='{"rot": "2/3"}')
    c.add_argument("--h", default='{"rot": "2/3"}')
    c.add_argument("--f", default='{"rot": "1/3"}')
    c.add_argument("--count", type=int, default=1000)
    c.add_argument("--generators", default='[{"rot": "1/3"}]')
    c.add_argument("--fixed-point")
    c.add_argument("--phi")
    c.add_argument("--iterations", type=int, default=64)
    c.add_argument("--period-cap", type=int, default=12)
    c.set_defaults(func=cmd_circle)
    return p


_DEFAULT_RADIUS = {"reduce": 0, "artin": 0, "quasi": 3, "heis": 0, "order": 3, "amen": 4, "circle": 5}
_VALUED = ("matrix", "word", "g", "h", "f", "S", "generators", "phi", "trace", "group",
           "order", "eps", "fixed_point", "branch")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.radius is None:
            args.radius = _DEFAULT_RADIUS[args.command]
            if args.command == "amen" and args.mode == "ponzi":
                args.radius = 6
        for name in _VALUED:
            if isinstance(getattr(args, name, None), str):
                setattr(args, name, _value(getattr(args, name)))
        code, report, text = args.func(args)
    except (UsageError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError,
            matred.PreconditionError, freegroup.RankMismatch) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except (matred.NotFoundWithinCap, freegroup.ResourceCapExceeded) as exc:
        report = {"verdict": "inconclusive", "reason": str(exc)}
        code, text = INCONCLUSIVE, f"inconclusive: {exc}"
    if args.json:
        out = {"schema": SCHEMA, "command": args.command, "mode": getattr(args, "mode", None),
               "exit_code": code, **report}
        print(json.dumps(out, sort_keys=True, default=str), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
