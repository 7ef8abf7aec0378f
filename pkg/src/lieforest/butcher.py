"""Butcher tableaux, elementary weights and Runge-Kutta characters.

The step size is absorbed into the grading: the degree-n part of a character
is the coefficient of h^n, so "order p" means agreement with the exact flow
through degree p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from pathlib import Path
from typing import Callable, Sequence

from .exponential import dexpinv, exp_concat, exp_gl, leaf_series
from .forest import (
    NonplanarForest,
    NonplanarTree,
    enumerate_nonplanar_forests,
    enumerate_nonplanar_trees,
    render,
    render_latex,
    symmetry_factor,
    to_nonplanar,
    tree_factorial,
)
from .postlie import left_graft
from .series import NONPLANAR, PLANAR, Series, format_rational


class TableauError(ValueError):
    pass


def _rational(x) -> Fraction:
    if isinstance(x, bool):
        raise TableauError(f"not a rational: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise TableauError(f"not a rational: {x!r}") from None
    raise TableauError(f"not a rational: {x!r}")


@dataclass(frozen=True)
class ButcherTableau:
    """Coefficients ``a`` (s x s) and ``b`` (length s) of an s-stage method."""

    name: str
    a: tuple
    b: tuple

    def __post_init__(self):
        b = tuple(_rational(x) for x in self.b)
        if not b:
            raise TableauError("empty weight vector")
        if len(self.a) != len(b) or any(len(row) != len(b) for row in self.a):
            raise TableauError(f"matrix shape does not match {len(b)} stages")
        a = tuple(tuple(_rational(x) for x in row) for row in self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def s(self) -> int:
        return len(self.b)

    @property
    def c(self) -> tuple:
        return tuple(sum(row) for row in self.a)

    def is_explicit(self) -> bool:
        return all(self.a[i][j] == 0 for i in range(self.s) for j in range(i, self.s))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "s": self.s,
            "a": [[format_rational(x) for x in row] for row in self.a],
            "b": [format_rational(x) for x in self.b],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ButcherTableau":
        if not isinstance(d, dict):
            raise TableauError("tableau must be a JSON object")
        missing = {"name", "s", "a", "b"} - d.keys()
        if missing:
            raise TableauError(f"missing keys: {sorted(missing)}")
        if not isinstance(d["s"], int) or isinstance(d["s"], bool):
            raise TableauError("'s' must be an integer")
        if not isinstance(d["a"], list) or not isinstance(d["b"], list):
            raise TableauError("'a' and 'b' must be arrays")
        t = cls(str(d["name"]), tuple(tuple(row) for row in d["a"]), tuple(d["b"]))
        if t.s != d["s"]:
            raise TableauError(f"'s' is {d['s']} but the tableau has {t.s} stages")
        return t

    @classmethod
    def from_json(cls, text: str) -> "ButcherTableau":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise TableauError(f"invalid JSON: {e}") from None
        try:
            return cls.from_dict(data)
        except TypeError as e:
            raise TableauError(str(e)) from None

    @classmethod
    def load(cls, path) -> "ButcherTableau":
        return cls.from_json(Path(path).read_text())


_F = Fraction
CATALOG = {
    "euler": (((0,),), (1,), 1),
    "implicit-midpoint": (((_F(1, 2),),), (1,), 2),
    "heun": (((0, 0), (1, 0)), (_F(1, 2), _F(1, 2)), 2),
    "kutta3": (
        ((0, 0, 0), (_F(1, 2), 0, 0), (-1, 2, 0)),
        (_F(1, 6), _F(2, 3), _F(1, 6)),
        3,
    ),
    "rk4": (
        ((0, 0, 0, 0), (_F(1, 2), 0, 0, 0), (0, _F(1, 2), 0, 0), (0, 0, 1, 0)),
        (_F(1, 6), _F(1, 3), _F(1, 3), _F(1, 6)),
        4,
    ),
}


@lru_cache(maxsize=None)
def get_tableau(name: str) -> ButcherTableau:
    """A built-in tableau, certified against its expected order on first access."""
    try:
        a, b, order = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown tableau {name!r}; known: {sorted(CATALOG)}") from None
    t = ButcherTableau(name, a, b)
    got = order_of_tableau(t, order + 1)
    if got != order:
        raise AssertionError(f"built-in tableau {name} has order {got}, expected {order}")
    return t


# -- elementary weights ------------------------------------------------------

def _stage_vector(t: ButcherTableau, tree: NonplanarTree, cache: dict) -> tuple:
    if tree in cache:
        return cache[tree]
    vec = [Fraction(1)] * t.s
    for child in tree.children:
        phi = _stage_vector(t, child, cache)
        a_phi = [sum(t.a[i][j] * phi[j] for j in range(t.s)) for i in range(t.s)]
        vec = [x * y for x, y in zip(vec, a_phi)]
    cache[tree] = tuple(vec)
    return cache[tree]


def stage_weights(t: ButcherTableau, tree) -> tuple:
    """Per-stage pairing of the stage values with ``tree``: e, then Hadamard products of A(...)."""
    return _stage_vector(t, to_nonplanar(tree), {})


def elementary_weight(t: ButcherTableau, tree) -> Fraction:
    """``b . Phi(tree)``."""
    phi = stage_weights(t, tree)
    return sum((bi * p for bi, p in zip(t.b, phi)), Fraction(0))


# -- characters in the non-planar basis ------------------------------------------

def _character_from_tree_values(value: Callable[[NonplanarTree], Fraction], truncation: int) -> Series:
    terms = {NonplanarForest(): Fraction(1)}
    for n in range(1, truncation + 1):
        for f in enumerate_nonplanar_forests(n):
            pair = prod((value(t) for t in f.trees), start=Fraction(1))
            if pair:
                terms[f] = pair / symmetry_factor(f)
    return Series(terms, basis=NONPLANAR, truncation=truncation)


def exact_solution_character(truncation: int) -> Series:
    """Non-planar character with tree pairings ``1 / tree!``."""
    return _character_from_tree_values(lambda t: Fraction(1, tree_factorial(t)), truncation)


def rk_character(t: ButcherTableau, truncation: int) -> Series:
    """Non-planar RK character built from elementary weights and multiplicativity."""
    cache: dict = {}

    def value(tree):
        phi = _stage_vector(t, tree, cache)
        return sum((bi * p for bi, p in zip(t.b, phi)), Fraction(0))

    return _character_from_tree_values(value, truncation)


# -- stage solvers -------------------------------------------------------------

StageMap = Callable[[Series], Series]


def solve_stages(t: ButcherTableau, stage_map: StageMap, truncation: int, basis: str = PLANAR):
    """Solve ``K_i = stage_map(sum_j a_ij K_j)``.

    Explicit tableaux are evaluated stage by stage. Otherwise a fixed-point
    iteration seeded at zero gains at least one degree per pass; it stops at
    the first pass that changes nothing. Returns ``(stages, passes)`` where
    ``passes`` counts the passes that changed some stage.
    """
    zero = Series.zero(basis, truncation)
    k = [zero] * t.s

    def u(i, stages):
        total = zero
        for j, aij in enumerate(t.a[i]):
            if aij:
                total = total + stages[j] * aij
        return total

    if t.is_explicit():
        for i in range(t.s):
            k[i] = stage_map(u(i, k))
        return k, 1
    passes = 0
    for _ in range(truncation + 1):
        new = [stage_map(u(i, k)) for i in range(t.s)]
        if all(x == y for x, y in zip(new, k)):
            return k, passes
        k = new
        passes += 1
    raise AssertionError("graded fixed point did not stabilise")


def _combine(t: ButcherTableau, stages, truncation, basis) -> Series:
    total = Series.zero(basis, truncation)
    for bi, ki in zip(t.b, stages):
        if bi:
            total = total + ki * bi
    return total


def rk_stage_character(t: ButcherTableau, truncation: int, basis: str = PLANAR) -> Series:
    """``exp(sum_j b_j K_j)`` with ``K_i = exp(sum_j a_ij K_j) |> leaf``, in either basis."""
    leaf = leaf_series(truncation, basis)
    stages, _ = solve_stages(t, lambda u: left_graft(exp_concat(u), leaf), truncation, basis)
    return exp_concat(_combine(t, stages, truncation, basis))


def rk_postlie_character(t: ButcherTableau, truncation: int) -> Series:
    """Plain RK applied to the free post-Lie algebra (planar basis)."""
    return rk_stage_character(t, truncation, PLANAR)


def rkmk_character(t: ButcherTableau, truncation: int) -> Series:
    """RKMK character: ``K_i = dexpinv(U_i, exp(U_i) |> leaf)``, ``exp(sum_i b_i K_i)``."""
    leaf = leaf_series(truncation)

    def stage(u):
        return dexpinv(u, left_graft(exp_concat(u), leaf), truncation)

    stages, _ = solve_stages(t, stage, truncation, PLANAR)
    return exp_concat(_combine(t, stages, truncation, PLANAR))


# -- order conditions ---------------------------------------------------------

_INDICES = "ijklmnpqrstuvwxyz"


def _vector_expr(tree: NonplanarTree) -> str:
    """Compact stage-vector expression: leaf -> e, node -> Hadamard product of A(...)."""
    if not tree.children:
        return "e"
    return "·".join(_apply_a(c) for c in tree.children)


def _apply_a(tree: NonplanarTree) -> str:
    power = 1
    while len(tree.children) == 1:
        power += 1
        tree = tree.children[0]
    inner = _vector_expr(tree)
    if len(tree.children) > 1:
        inner = f"({inner})"
    a = "A" if power == 1 else f"A^{power}"
    return a + inner


def _componentwise_factors(tree: NonplanarTree) -> tuple[str, list[str]]:
    letters = iter(_INDICES)
    factors: list[str] = []
    indices: list[str] = []

    def visit(node, idx):
        indices.append(idx)
        for c in node.children:
            j = next(letters)
            factors.append(f"a_{{{idx}{j}}}")
            visit(c, j)

    root = next(letters)
    visit(tree, root)
    return "".join(indices), [f"b_{root}"] + factors


@dataclass(frozen=True)
class OrderCondition:
    """``b . Phi(tree) = 1 / tree!``."""

    tree: NonplanarTree

    @property
    def rhs(self) -> Fraction:
        return Fraction(1, tree_factorial(self.tree))

    @property
    def lhs_expr(self) -> str:
        inner = _vector_expr(self.tree)
        if len(self.tree.children) > 1:
            return f"b({inner})"
        return "b" + inner

    def compact(self) -> str:
        return f"{self.lhs_expr}={format_rational(self.rhs)}"

    def componentwise(self) -> str:
        idx, factors = _componentwise_factors(self.tree)
        return f"Σ_{{{idx}}} {' '.join(factors)} = {format_rational(self.rhs)}"

    def lhs(self, t: ButcherTableau) -> Fraction:
        return elementary_weight(t, self.tree)

    def holds(self, t: ButcherTableau) -> bool:
        return self.lhs(t) == self.rhs

    def to_dict(self) -> dict:
        return {
            "tree": render(self.tree),
            "compact": self.compact(),
            "componentwise": self.componentwise(),
            "rhs": format_rational(self.rhs),
        }

    def to_latex(self) -> str:
        rhs = self.rhs
        frac = rf"\frac{{{rhs.numerator}}}{{{rhs.denominator}}}" if rhs.denominator != 1 else str(rhs)
        compact = self.lhs_expr.replace("·", r"\cdot ").replace("e", r"\een")
        idx, factors = _componentwise_factors(self.tree)
        comp = rf"\sum_{{{idx}}}" + "".join(factors)
        return f"{render_latex(self.tree)} & ${compact} = {frac}$ & ${comp} = {frac}$ \\\\"


def generate_order_conditions(p: int) -> list[OrderCondition]:
    """One condition per non-planar tree with at most ``p`` nodes, in (degree, canonical) order."""
    if p < 1:
        raise ValueError("order must be at least 1")
    return [OrderCondition(t) for n in range(1, p + 1) for t in enumerate_nonplanar_trees(n)]


def first_violation(t: ButcherTableau, p_max: int):
    """First condition (in canonical order) that fails, as ``(condition, lhs)``, or None."""
    for cond in generate_order_conditions(p_max):
        lhs = cond.lhs(t)
        if lhs != cond.rhs:
            return cond, lhs
    return None


def order_of_tableau(t: ButcherTableau, p_max: int) -> int:
    """Largest ``p <= p_max`` for which every condition of degree ``<= p`` holds."""
    v = first_violation(t, p_max)
    return p_max if v is None else v[0].tree.degree - 1


@dataclass(frozen=True)
class Witness:
    forest: object
    lhs: Fraction
    rhs: Fraction


def series_order(method: Series, exact: Series, p_max: int) -> tuple[int, Witness | None]:
    """Agreement degree of two characters, with the first differing forest."""
    diff = (method - exact).truncate(p_max)
    if not diff:
        return p_max, None
    first = diff.items()[0][0]
    return first.degree - 1, Witness(first, method.pairing(first), exact.pairing(first))


def attained_order(t: ButcherTableau, method: str, p_max: int) -> tuple[int, Witness | None]:
    """Order through ``p_max`` for ``method`` in {"rk", "rk-postlie", "rkmk"}."""
    if method == "rk":
        v = first_violation(t, p_max)
        if v is None:
            return p_max, None
        cond, lhs = v
        return cond.tree.degree - 1, Witness(cond.tree, lhs, cond.rhs)
    leaf = leaf_series(p_max)
    exact = exp_gl(leaf, p_max)
    if method == "rk-postlie":
        return series_order(rk_postlie_character(t, p_max), exact, p_max)
    if method == "rkmk":
        return series_order(rkmk_character(t, p_max), exact, p_max)
    raise ValueError(f"unknown method {method!r}")


def hadamard(*vectors: Sequence[Fraction]) -> tuple:
    return tuple(prod(xs, start=Fraction(1)) for xs in zip(*vectors))


__all__ = [
    "ButcherTableau", "TableauError", "CATALOG", "get_tableau", "stage_weights",
    "elementary_weight", "exact_solution_character", "rk_character", "solve_stages",
    "rk_stage_character", "rk_postlie_character", "rkmk_character", "OrderCondition",
    "generate_order_conditions", "first_violation", "order_of_tableau", "Witness",
    "series_order", "attained_order", "hadamard",
]
