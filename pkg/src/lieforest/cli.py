"""Command-line interface.

Exit codes: 0 success, 1 verification failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .butcher import (
    CATALOG,
    ButcherTableau,
    TableauError,
    attained_order,
    generate_order_conditions,
    get_tableau,
)
from .exponential import exp_concat, exp_gl, leaf_series, phi_series
from .forest import (
    ParseError,
    enumerate_nonplanar_trees,
    enumerate_planar_trees,
    parse_forest,
    render,
    render_latex,
)
from .postlie import gl_dual_coproduct, gl_product, left_graft
from .series import Series, coshuffle, format_rational

CLI_CAP = 10


class UsageError(Exception):
    pass


def _degree(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 1 <= n <= CLI_CAP:
        raise argparse.ArgumentTypeError(f"must be between 1 and {CLI_CAP}")
    return n


def _series_arg(text: str, truncation: int) -> Series:
    return Series({parse_forest(text): 1}, truncation=truncation)


def _emit_series(s: Series, output: str) -> None:
    if output == "json":
        print(json.dumps(s.to_json(), indent=2))
    else:
        print(s.to_text())


def cmd_trees(args) -> int:
    trees = (enumerate_nonplanar_trees if args.nonplanar else enumerate_planar_trees)(args.nodes)
    if args.count:
        print(len(trees))
    elif args.latex:
        for t in trees:
            print(render_latex(t))
    else:
        for t in trees:
            print(render(t))
    return 0


def _binary(op):
    def run(args) -> int:
        a = _series_arg(args.left, args.truncation)
        b = _series_arg(args.right, args.truncation)
        _emit_series(op(a, b), args.output)
        return 0

    return run


def cmd_coproduct(args) -> int:
    print(coshuffle(_series_arg(args.forest, args.truncation)).to_text())
    return 0


def cmd_dual_coproduct(args) -> int:
    f = parse_forest(args.forest)
    if f.degree > CLI_CAP:
        raise UsageError(f"forest degree exceeds {CLI_CAP}")
    print(gl_dual_coproduct(f).to_text())
    return 0


def cmd_exp(args) -> int:
    if args.star and args.phi:
        raise UsageError("--star and --phi are mutually exclusive")
    if args.phi:
        s = phi_series(args.order)
    elif args.star:
        s = exp_gl(leaf_series(args.order))
    else:
        s = exp_concat(leaf_series(args.order))
    _emit_series(s, args.output)
    return 0


def cmd_order_conditions(args) -> int:
    conds = generate_order_conditions(args.order)
    if args.format == "json":
        print(json.dumps([c.to_dict() for c in conds], indent=2, ensure_ascii=False))
    elif args.format == "latex":
        print(r"\begin{tabular}{|c|c|c|}\hline")
        print(r"$\tau$ & Compact & Componentwise \\ \hline")
        for c in conds:
            print(c.to_latex())
        print(r"\hline\end{tabular}")
    else:
        for c in conds:
            print(f"{render(c.tree)}\t{c.compact()}\t{c.componentwise()}")
    return 0


def _load_tableau(args) -> ButcherTableau:
    if args.builtin:
        return get_tableau(args.builtin)
    try:
        return ButcherTableau.load(args.tableau)
    except OSError as e:
        raise TableauError(f"cannot read {args.tableau}: {e.strerror}") from None


def cmd_check(args) -> int:
    t = _load_tableau(args)
    order, witness = attained_order(t, args.method, args.order)
    print(f"{t.name}: method {args.method}, order {order}")
    if witness is None:
        return 0
    print(
        f"violated: {render(witness.forest)}\t"
        f"lhs={format_rational(witness.lhs)}\trhs={format_rational(witness.rhs)}"
    )
    return 1


def cmd_tableau(args) -> int:
    print(get_tableau(args.name).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lieforest", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("trees", help="enumerate rooted trees")
    t.add_argument("--nodes", type=_degree, required=True)
    t.add_argument("--nonplanar", action="store_true")
    t.add_argument("--count", action="store_true")
    t.add_argument("--latex", action="store_true")
    t.set_defaults(func=cmd_trees)

    for name, op, help_ in (
        ("graft", left_graft, "left grafting of two forests"),
        ("gl", gl_product, "Grossman-Larson product of two forests"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("left")
        s.add_argument("right")
        s.add_argument("--truncation", type=_degree, default=CLI_CAP)
        s.add_argument("--output", choices=("text", "json"), default="text")
        s.set_defaults(func=_binary(op))

    c = sub.add_parser("coproduct", help="coshuffle coproduct of a forest")
    c.add_argument("forest")
    c.add_argument("--truncation", type=_degree, default=CLI_CAP)
    c.set_defaults(func=cmd_coproduct)

    d = sub.add_parser("dual-coproduct", help="dual of the Grossman-Larson product")
    d.add_argument("forest")
    d.set_defaults(func=cmd_dual_coproduct)

    e = sub.add_parser("exp", help="exponentials of the single-node tree")
    e.add_argument("--order", type=_degree, default=6)
    e.add_argument("--star", action="store_true", help="Grossman-Larson exponential")
    e.add_argument("--phi", action="store_true", help="sum of leaf^{*k}/(k+1)!")
    e.add_argument("--output", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_exp)

    o = sub.add_parser("order-conditions", help="Runge-Kutta order conditions")
    o.add_argument("--order", type=_degree, required=True)
    o.add_argument("--format", choices=("text", "json", "latex"), default="text")
    o.set_defaults(func=cmd_order_conditions)

    k = sub.add_parser("check", help="verify the order of a tableau")
    src = k.add_mutually_exclusive_group(required=True)
    src.add_argument("--tableau", help="tableau JSON file")
    src.add_argument("--builtin", choices=sorted(CATALOG))
    k.add_argument("--order", type=_degree, required=True)
    k.add_argument("--method", choices=("rk", "rk-postlie", "rkmk"), default="rk")
    k.set_defaults(func=cmd_check)

    b = sub.add_parser("tableau", help="print a built-in tableau as JSON")
    b.add_argument("name", choices=sorted(CATALOG))
    b.set_defaults(func=cmd_tableau)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, TableauError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
