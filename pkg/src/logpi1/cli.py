"""Command-line front end.

Exit status: 0 when a verdict was computed (whatever it is), 2 on argument
errors, 3 when the input fails validation.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .jsonio import dumps, parse_rat, rat

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 2, 3


class InputError(Exception):
    pass


def bundled_examples() -> Path:
    return Path(str(resources.files("logpi1") / "data" / "examples"))


def load_json(path: str) -> dict:
    """Read a JSON input; a missing path falls back to the bundled corpus by file name."""
    p = Path(path)
    if not p.exists():
        alt = bundled_examples() / p.name
        if not alt.exists():
            raise InputError(f"no such file: {path}")
        p = alt
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: invalid JSON ({exc})") from exc


def emit(args, doc: dict, text: str) -> None:
    if args.out:
        Path(args.out).write_text(dumps(doc))
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    else:
        print(text)


# validate


def cmd_validate(args) -> int:
    doc = load_json(args.input)
    if "vertices" in doc:
        from .curve import graph_from_json, validate_graph

        g, _, _ = graph_from_json(doc)
        v = validate_graph(g, args.kind)
        emit(args, {"kind": args.kind, "valid": v.ok, "problems": v.problems},
             "valid" if v.ok else "invalid: " + "; ".join(v.problems))
        return EXIT_OK if v.ok else EXIT_INVALID
    from .cdga import from_json, validate

    a = from_json(doc)
    rep = validate(a)
    emit(args, {"valid": rep.ok, "failure": rep.failure, "where": repr(rep.where) if rep.where else None},
         "valid" if rep.ok else f"invalid: {rep.failure} at {rep.where}")
    return EXIT_OK if rep.ok else EXIT_INVALID


# minimal-model


def cmd_minimal(args) -> int:
    from .cdga import from_json
    from .minimal import build, check_minimality

    a = from_json(load_json(args.input))
    m = build(a, args.stages, section=args.section)
    ok = bool(check_minimality(m, a))
    doc = m.to_json()
    doc["checks"] = {"minimality": ok}
    emit(args, doc, " ".join(map(str, m.stage_dims())))
    return EXIT_OK


# bar


def cmd_bar(args) -> int:
    from .bar import bar_of_model, bar_report
    from .cdga import from_json
    from .minimal import build

    a = from_json(load_json(args.input))
    m = build(a, args.stages)
    rep = bar_report(bar_of_model(m, args.cap))
    lines = [
        f"H0 gr dims:  {' '.join(map(str, rep['gr_dims']))}",
        f"QH0 gr dims: {' '.join(map(str, rep['qh0_gr_dims']))}",
        f"M1 gr dims:  {' '.join(map(str, rep['m1_gr_dims']))}",
    ] + [f"{k}: {v}" for k, v in sorted(rep["verdicts"].items())]
    emit(args, rep, "\n".join(lines))
    return EXIT_OK


# lie


def _free_and_quotient(gens, relators, q):
    from .nilpotent_lie import free_nilpotent, project_to_quotient, quotient

    F = free_nilpotent(tuple(gens), q)
    rels = [parse_element(F, r) for r in relators]
    if not rels:
        return F, F, (lambda x: x)
    L = quotient(F, rels)
    return F, L, (lambda x: project_to_quotient(L, x))


def parse_bracket(F, s: str):
    """Parse "[a,[b,c]]" over the generator labels of a free algebra."""
    s = s.replace(" ", "")
    names = list(F.generator_labels)
    pos = 0

    def node():
        nonlocal pos
        if s.startswith("[", pos):
            pos += 1
            left = node()
            if not s.startswith(",", pos):
                raise InputError(f"bad bracket expression {s!r}")
            pos += 1
            right = node()
            if not s.startswith("]", pos):
                raise InputError(f"bad bracket expression {s!r}")
            pos += 1
            return (left, right)
        end = pos
        while end < len(s) and s[end] not in "[],":
            end += 1
        name = s[pos:end]
        if name not in names:
            raise InputError(f"unknown generator {name!r}")
        pos = end
        return names.index(name)

    tree = node()
    if pos != len(s):
        raise InputError(f"trailing input in {s!r}")
    return F.from_tree(tree)


def parse_element(F, doc: dict):
    out = F.zero()
    for key, c in doc.items():
        out = out + parse_rat(c) * parse_bracket(F, key)
    return out


def cmd_lie_dims(args) -> int:
    from .nilpotent_lie import free_nilpotent, lyndon_dims, quotient

    if args.symplectic:
        g = args.symplectic
        gens = [f"v{i + 1}" for i in range(2 * g)]
        F = free_nilpotent(tuple(gens), args.q)
        rel = F.zero()
        for i in range(g):
            rel = rel + F.gen(2 * i).bracket(F.gen(2 * i + 1))
        dims = quotient(F, [rel]).gr_dims()
    else:
        if args.gens is None or args.gens < 1:
            raise InputError("--gens must be a positive integer")
        dims = lyndon_dims(args.gens, args.q)
    emit(args, {"gr_dims": dims, "q": args.q}, " ".join(map(str, dims)))
    return EXIT_OK


def cmd_lie_bch(args) -> int:
    from .nilpotent_lie import bch_terms

    def show(t):
        return "XY"[t] if isinstance(t, int) else f"[{show(t[0])},{show(t[1])}]"

    terms = [(show(t), c) for c, t in bch_terms(args.q)]
    doc = {"q": args.q, "terms": {k: rat(c) for k, c in terms}}
    emit(args, doc, "\n".join(f"{rat(c):>8}  {k}" for k, c in terms))
    return EXIT_OK


def cmd_lie_inner(args) -> int:
    from .nilpotent_lie import LieAutomorphism, is_inner

    doc = load_json(args.input)
    q = args.q or int(doc.get("q", 4))
    try:
        gens = list(doc["generators"])
    except KeyError as exc:
        raise InputError("missing 'generators'") from exc
    F, L, proj = _free_and_quotient(gens, doc.get("relators", []), q)
    images = []
    for k, gname in enumerate(gens):
        img = doc.get("images", {}).get(gname)
        x = parse_element(F, img) if img is not None else F.gen(k)
        images.append(proj(x).coords)
    phi = LieAutomorphism(L, images)
    if not phi.is_automorphism():
        raise InputError("images do not define an automorphism")
    v = is_inner(phi, q)
    emit(args, v.to_json(), v.summary())
    return EXIT_OK


# curve


def _graph_args(args):
    from .curve import graph_from_json

    g, base, q = graph_from_json(load_json(args.input))
    return g, base, args.q or q


def cmd_curve_presentation(args) -> int:
    from .curve import presentation

    g, _, q = _graph_args(args)
    p = presentation(g, q)
    text = [f"generators: {' '.join(p.algebra.generator_labels)}", f"gr dims: {' '.join(map(str, p.algebra.gr_dims()))}"]
    for (eid, s), x in sorted(p.sides.items()):
        text.append(f"e({eid},{s}) = {x}")
    emit(args, p.to_json(), "\n".join(text))
    return EXIT_OK


def cmd_curve_analyze(args) -> int:
    from .curve import analyze

    g, base, q = _graph_args(args)
    rep = analyze(g, base, q, jobs=args.jobs)
    emit(args, rep.to_json(), rep.verdict)
    return EXIT_OK


def cmd_curve_loop(args) -> int:
    from .curve import find_loop, loop_check

    g, _, _ = _graph_args(args)
    loop = find_loop(g)
    val = loop_check(g, loop)
    emit(args, {"loop": loop, "length": len(loop), "pairing": val}, str(val))
    return EXIT_OK


def parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file")
    common.add_argument("--format", choices=["json", "text"], default="text")

    p = argparse.ArgumentParser(prog="logpi1", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="validate a cdga or dual graph")
    s.add_argument("input")
    s.add_argument("--kind", choices=["stable", "minimal_semistable"], default="minimal_semistable")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("minimal-model", parents=[common], help="1-minimal model stages")
    s.add_argument("input")
    s.add_argument("--stages", type=int, default=3)
    s.add_argument("--section", choices=["pivot", "reverse"], default="pivot")
    s.set_defaults(func=cmd_minimal)

    s = sub.add_parser("bar", parents=[common], help="bar construction report")
    s.add_argument("input")
    s.add_argument("--stages", type=int, default=3)
    s.add_argument("--cap", type=int, default=3)
    s.set_defaults(func=cmd_bar)

    lie = sub.add_parser("lie", help="nilpotent Lie algebra tools").add_subparsers(dest="lie_command", required=True)
    s = lie.add_parser("dims", parents=[common], help="graded dimensions")
    s.add_argument("--gens", type=int)
    s.add_argument("--symplectic", type=int, metavar="G", help="one-relator algebra on 2G generators")
    s.add_argument("--q", type=int, default=4)
    s.set_defaults(func=cmd_lie_dims)
    s = lie.add_parser("bch", parents=[common], help="BCH coefficients")
    s.add_argument("--q", type=int, default=4)
    s.set_defaults(func=cmd_lie_bch)
    s = lie.add_parser("inner", parents=[common], help="decide innerness of an automorphism")
    s.add_argument("input")
    s.add_argument("--q", type=int)
    s.set_defaults(func=cmd_lie_inner)

    curve = sub.add_parser("curve", help="dual graph tools").add_subparsers(dest="curve_command", required=True)
    for name, func in (("presentation", cmd_curve_presentation), ("analyze", cmd_curve_analyze), ("loop", cmd_curve_loop)):
        s = curve.add_parser(name, parents=[common])
        s.add_argument("input")
        s.add_argument("--q", type=int)
        s.add_argument("--jobs", type=int, default=1)
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
