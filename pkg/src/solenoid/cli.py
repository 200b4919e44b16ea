"""``solenoid`` command line.

Exit codes: 0 success, 1 a relation check failed, 2 bad input, 3 a flip
guard ran out.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from . import io, modgroup, wpform
from .io import SchemaError
from .render import render_svg
from .structures import NonTermination, delaunay, flip_structure
from .tesselation import NotAnEdge, tau_star

EXIT_FAIL, EXIT_SCHEMA, EXIT_GUARD = 1, 2, 3


@dataclass
class RunConfig:
    output: str | None = None
    approx: int | None = None  # significant digits; None means exact
    depth: int = 4
    max_flips: int = 10_000
    seed: int = 0

    @property
    def digits(self) -> int:
        return self.approx or 16


def _config(args) -> RunConfig:
    if args.approx is not None and args.approx < 16:
        raise SchemaError("--approx needs at least 16 significant digits")
    if args.depth < 0:
        raise SchemaError("--depth must be non-negative")
    return RunConfig(args.output, args.approx, args.depth, args.max_flips, args.seed)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _paving_doc(final, paving) -> dict:
    return {
        "structure": io.structure_doc(final),
        "removed": [io.edge_doc(o.representative) for o in paving.removed_orbits()],
        "faces": paving.faces,
        "flips": [{"group": io.group_doc(g), "edge": io.edge_doc(e)} for g, e in paving.flips],
    }


def cmd_delaunay(args, cfg: RunConfig) -> int:
    s = io.parse_structure(io.load(args.structure), cfg.approx)
    final, paving = delaunay(s, max_flips=cfg.max_flips)
    _emit(cfg, io.dumps(_paving_doc(final, paving)))
    return 0


def cmd_flip(args, cfg: RunConfig) -> int:
    s = io.parse_structure(io.load(args.structure), cfg.approx)
    edge = io.parse_edge(list(args.edge))
    if not s.tess.has_edge(*edge):
        raise SchemaError(f"{args.edge} is not an edge of the tesselation")
    s2, _ = flip_structure(s, edge)
    _emit(cfg, io.dumps(io.structure_doc(s2)))
    return 0


def cmd_wp(args, cfg: RunConfig) -> int:
    s = io.parse_structure(io.load(args.structure), cfg.approx)
    u = io.parse_vector(s, io.load(args.u), cfg.approx)
    v = io.parse_vector(s, io.load(args.v), cfg.approx)
    val = wpform.wp_form(s, u, v)
    _emit(cfg, f"{io.fmt_rational(val)}\n{io.fmt_decimal(val, cfg.digits)}\n")
    return 0


def cmd_relations(args, cfg: RunConfig) -> int:
    names = modgroup.RELATIONS if args.name == "all" else (args.name,)
    rng = random.Random(cfg.seed)
    lines, failed = [], 0
    for name in names:
        for i in range(args.count):
            inst = modgroup.random_instance(name, rng, max_index=args.max_index)
            ok = modgroup.verify_relation(name, inst)
            failed += not ok
            lines.append(f"{name} {i} index={inst['group'].degree} {'PASS' if ok else 'FAIL'}")
    lines.append(f"{len(lines) - failed} passed, {failed} failed")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_FAIL if failed else 0


def cmd_render(args, cfg: RunConfig) -> int:
    doc = io.load(args.input)
    if not isinstance(doc, dict):
        raise SchemaError("render input must be an object")
    removed = frozenset()
    if "structure" in doc:  # a delaunay result
        s = io.parse_structure(doc["structure"], cfg.approx)
        t = s.tess
        for e in doc.get("removed", []):
            e = io.parse_edge(e)
            if not t.has_edge(*e):
                raise SchemaError(f"removed edge {e} is not an edge")
            removed |= {t.ukey(*e)}
    elif "lambda" in doc:
        s = io.parse_structure(doc, cfg.approx)
        t = s.tess
        if args.paving:
            s, paving = delaunay(s, max_flips=cfg.max_flips)
            t, removed = s.tess, paving.removed
    else:
        t = io._tesselation(doc)
    if cfg.depth > 10:
        raise SchemaError("--depth is limited to 10 for rendering")
    _emit(cfg, render_svg(t, cfg.depth, removed))
    return 0


def cmd_normalform(args, cfg: RunConfig) -> int:
    w = io.parse_word(io.load(args.word))
    flat = modgroup.normalize(w)
    target = modgroup.image(flat)
    k = target.group
    geo = modgroup.flip_path(tau_star(k), target, max_flips=cfg.max_flips)
    doc = {"normalized": io.word_doc(flat), "geometric": io.word_doc(geo),
           "equals": modgroup.equals(geo, w)}
    _emit(cfg, io.dumps(doc))
    return 0


def cmd_equals(args, cfg: RunConfig) -> int:
    w1, w2 = io.parse_word(io.load(args.word1)), io.parse_word(io.load(args.word2))
    _emit(cfg, "true\n" if modgroup.equals(w1, w2) else "false\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    backend = common.add_mutually_exclusive_group()
    backend.add_argument("--exact", dest="approx", action="store_const", const=None,
                         help="exact rational arithmetic (default)")
    backend.add_argument("--approx", type=int, metavar="DIGITS",
                         help="accept decimal inputs, render decimals with DIGITS digits (>= 16)")
    common.add_argument("--depth", type=int, default=4)
    common.add_argument("--max-flips", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="write to a file instead of stdout")

    p = argparse.ArgumentParser(prog="solenoid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("delaunay", parents=[common], help="flip to the convex-hull paving")
    c.add_argument("structure")
    c.set_defaults(func=cmd_delaunay)

    c = sub.add_parser("flip", parents=[common], help="equivariant flip of one orbit")
    c.add_argument("structure")
    c.add_argument("--edge", nargs=2, required=True, metavar=("P/Q", "R/S"))
    c.set_defaults(func=cmd_flip)

    c = sub.add_parser("wp", parents=[common], help="evaluate the WP two-form")
    c.add_argument("structure")
    c.add_argument("u")
    c.add_argument("v")
    c.set_defaults(func=cmd_wp)

    c = sub.add_parser("relations", parents=[common], help="check flip relations on random instances")
    c.add_argument("name", choices=modgroup.RELATIONS + ("all",))
    c.add_argument("--count", type=int, default=20)
    c.add_argument("--max-index", type=int, default=24)
    c.set_defaults(func=cmd_relations)

    c = sub.add_parser("render", parents=[common], help="SVG of a tesselation or paving")
    c.add_argument("input")
    c.add_argument("--paving", action="store_true", help="run Delaunay first and dash removed edges")
    c.set_defaults(func=cmd_render)

    c = sub.add_parser("normalform", parents=[common], help="single-group and geometric forms of a word")
    c.add_argument("word")
    c.set_defaults(func=cmd_normalform)

    c = sub.add_parser("equals", parents=[common], help="compare two words")
    c.add_argument("word1")
    c.add_argument("word2")
    c.set_defaults(func=cmd_equals)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except NonTermination as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (SchemaError, NotAnEdge, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
