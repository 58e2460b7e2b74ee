"""Command line interface.

Exit codes: 0 success, 2 bad input, 3 a mathematical assertion failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import diagram_io
from .lie import LieError, group_act
from .mc import MCError, PolyFormDgLa, mc_residual, obstruction, solve_fixed_point, solve_tree_sum
from .render import render_svg
from .scattering import (ConeViolation, DiagramError, Loop, MonodromyError, complete, crossings,
                         path_ordered_product, standard_loop)
from .series import Series
from .trees import TreeError, bracket_notation, enumerate_trees, label_edges

EXIT_INPUT = 2
EXIT_MATH = 3


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _vector(text: str) -> tuple[int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    if len(parts) != 2 or not any(parts):
        raise argparse.ArgumentTypeError(f"expected a nonzero pair 'a,b', got {text!r}")
    return parts


def _order(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("order must be at least 1")
    return n


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _loop(d, start):
    if start is None:
        return standard_loop(d)
    loop = Loop(start)
    try:
        crossings(d, loop)
    except DiagramError as exc:
        raise CommandError(str(exc))
    return loop


def cmd_complete(args) -> int:
    d = diagram_io.load(args.input, args.order)
    result = complete(d)
    _write(diagram_io.dumps(result), args.output)
    return 0


def cmd_product(args) -> int:
    d = diagram_io.load(args.input, args.order)
    loop = _loop(d, args.start_ray)
    print(path_ordered_product(d, loop))
    return 0


def cmd_act(args) -> int:
    d = diagram_io.load(args.input, args.order)
    s = Series.monomial((0,) * d.params, args.monomial, nparams=d.params, rank=2, order=d.max_order)
    if args.wall is not None:
        if not 0 <= args.wall < len(d.walls):
            raise CommandError(f"wall index {args.wall} out of range (diagram has {len(d.walls)} walls)")
        log_theta = d.walls[args.wall].log_factor
    else:
        log_theta = path_ordered_product(d, _loop(d, args.start_ray))
    print(group_act(log_theta, s))
    return 0


def cmd_trees(args) -> int:
    for t in enumerate_trees(args.leaves):
        print(bracket_notation(label_edges(t)))
    return 0


def cmd_mc_solve(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CommandError(f"cannot read {args.input}: {exc}")
    try:
        L = PolyFormDgLa(int(data.get("matrix_size", 3)), int(data.get("odd_generators", 0)))
        N = args.order or int(data["max_order"])
        pi = L.from_records(data["pi"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CommandError(f"bad mc-solve input: {exc}")
    solver = solve_tree_sum if args.solver == "trees" else solve_fixed_point
    phi = solver(L, pi, N)
    residual, obs = mc_residual(L, phi, N), obstruction(L, phi, N)
    out = {
        "max_order": N,
        "phi": L.to_records(phi),
        "mc_residual": L.to_records(residual),
        "obstruction": L.to_records(obs),
        "text": {"phi": str(phi), "mc_residual": str(residual), "obstruction": str(obs)},
    }
    _write(json.dumps(out, indent=2) + "\n", args.output)
    return 0


def cmd_render(args) -> int:
    d = diagram_io.load(args.input, args.order)
    _write(render_svg(d), args.svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropscat", description="Scattering diagrams and Maurer-Cartan solving.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("complete", help="complete a two-wall seed to a consistent diagram")
    c.add_argument("input")
    c.add_argument("--order", type=_order)
    c.add_argument("--output")
    c.set_defaults(func=cmd_complete)

    c = sub.add_parser("product", help="log of the path-ordered product around the origin")
    c.add_argument("input")
    c.add_argument("--start-ray", type=_vector)
    c.add_argument("--order", type=_order)
    c.set_defaults(func=cmd_product)

    c = sub.add_parser("act", help="apply a wall factor or the loop product to w^m")
    c.add_argument("input")
    c.add_argument("--monomial", type=_vector, required=True)
    c.add_argument("--wall", type=int)
    c.add_argument("--start-ray", type=_vector)
    c.add_argument("--order", type=_order)
    c.set_defaults(func=cmd_act)

    c = sub.add_parser("trees", help="list planar trivalent trees with edge labels")
    c.add_argument("--leaves", type=_order, required=True)
    c.set_defaults(func=cmd_trees)

    c = sub.add_parser("mc-solve", help="solve Phi = Pi - 1/2 H[Phi, Phi] in the polynomial-form dgLa")
    c.add_argument("input")
    c.add_argument("--order", type=_order)
    c.add_argument("--solver", choices=("fixed", "trees"), default="fixed")
    c.add_argument("--output")
    c.set_defaults(func=cmd_mc_solve)

    c = sub.add_parser("render", help="draw a diagram as SVG")
    c.add_argument("input")
    c.add_argument("--svg")
    c.add_argument("--order", type=_order)
    c.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (diagram_io.InputError, DiagramError, LieError, MCError, TreeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConeViolation, MonodromyError) as exc:
        print(f"mathematical assertion failed: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
