"""Left grafting on forests and the Grossman-Larson product.

Tree-on-tree grafting attaches the root of the left tree as the new leftmost
child of each node of the right tree, one term per node. The action of a
tree on a forest is a derivation, ``x |> 1 = 0``, and the action of a longer
forest is reduced by ``xA |> B = x |> (A |> B) - (x |> A) |> B``. The same
code serves the non-planar quotient because non-planar trees re-sort their
children on construction.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

from .forest import (
    NonplanarForest,
    NonplanarTree,
    PlanarForest,
    _Forest,
    _Tree,
    b_minus,
    b_plus,
    enumerate_planar_forests,
    forest_type,
)
from .series import (
    BasisMismatch,
    Series,
    TensorSeries,
    _split,
    bilinear,
    coshuffle,
    concat_product,
    is_infinitesimal_character,
    tensor_product,
)


def _accumulate(out: dict, key, value) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


@lru_cache(maxsize=None)
def graft_trees(t: _Tree, u: _Tree) -> tuple:
    """``t |> u`` for single trees as ``((tree, multiplicity), ...)``."""
    cls = type(u)
    out: dict = {}
    _accumulate(out, cls((t,) + u.children, u.label), 1)
    for i, c in enumerate(u.children):
        for r, m in graft_trees(t, c):
            _accumulate(out, cls(u.children[:i] + (r,) + u.children[i + 1:], u.label), m)
    return tuple(out.items())


@lru_cache(maxsize=None)
def _tree_on_forest(t: _Tree, f: _Forest) -> tuple:
    cls = type(f)
    out: dict = {}
    trees = f.trees
    for i, u in enumerate(trees):
        for r, m in graft_trees(t, u):
            _accumulate(out, cls(trees[:i] + (r,) + trees[i + 1:]), m)
    return tuple(out.items())


@lru_cache(maxsize=None)
def graft_forests(w: _Forest, v: _Forest) -> tuple:
    """``w |> v`` for basis forests as ``((forest, coefficient), ...)``."""
    if not w.trees:
        return ((v, 1),)
    if not v.trees:
        return ()
    x, rest = w.trees[0], w[1:]
    out: dict = {}
    # x |> (rest |> v)
    for g, c in graft_forests(rest, v):
        for h, d in _tree_on_forest(x, g):
            _accumulate(out, h, c * d)
    # - (x |> rest) |> v
    for g, c in _tree_on_forest(x, rest):
        for h, d in graft_forests(g, v):
            _accumulate(out, h, -c * d)
    return tuple(out.items())


def _graft_basis(w, v):
    return dict(graft_forests(w, v))


def left_graft(a: Series, b: Series) -> Series:
    """The extended grafting product ``a |> b`` on series."""
    return bilinear(a, b, _graft_basis)


@lru_cache(maxsize=None)
def gl_forests(w: _Forest, v: _Forest) -> tuple:
    """``w * v = w_(1) (w_(2) |> v)`` on basis forests."""
    out: dict = {}
    for (left, right), m in _split(w):
        for g, c in graft_forests(right, v):
            _accumulate(out, left.concat(g), m * c)
    return tuple(out.items())


def _gl_basis(w, v):
    return dict(gl_forests(w, v))


def gl_product(a: Series, b: Series) -> Series:
    """Grossman-Larson product. Works in either basis."""
    return bilinear(a, b, _gl_basis)


def gl_product_via_roots(w: _Forest, v: _Forest) -> Series:
    """``B-(w |> B+(v))``: the root-grafting description of the same product."""
    target = forest_type(v.tree_type)((b_plus(v),))
    out: dict = {}
    for g, c in graft_forests(w, target):
        (tree,) = g.trees
        _accumulate(out, b_minus(tree), c)
    return Series(out, basis="planar" if w.planar else "nonplanar")


def gl_dual_coproduct(w: PlanarForest, truncation: int | None = None) -> TensorSeries:
    """Dual of the product under the orthonormal forest pairing.

    The coefficient of ``u (x) v`` is the coefficient of ``w`` in ``u * v``.
    """
    n = w.degree
    truncation = n if truncation is None else truncation
    if n > truncation:
        raise ValueError(f"forest degree {n} exceeds truncation {truncation}")
    cls = type(w)
    labels = "".join(sorted({t.label for t in _all_nodes(w)} - {""}))
    out: dict = {}
    for k in range(n + 1):
        for u in _forests(cls, k, labels):
            for v in _forests(cls, n - k, labels):
                for g, c in gl_forests(u, v):
                    if g == w:
                        _accumulate(out, (u, v), c)
    return TensorSeries._raw(out, "planar" if w.planar else "nonplanar", truncation)


def _all_nodes(w: _Forest):
    for t in w.trees:
        yield from t.nodes()


def _forests(cls, k, labels):
    if cls is PlanarForest:
        return enumerate_planar_forests(k, labels)
    from .forest import enumerate_nonplanar_forests

    return enumerate_nonplanar_forests(k, labels)


# -- brackets ------------------------------------------------------------------

def commutator(a: Series, b: Series) -> Series:
    """``ab - ba`` for the concatenation product."""
    return concat_product(a, b) - concat_product(b, a)


def _require_primitive(*xs: Series) -> None:
    for x in xs:
        if not is_infinitesimal_character(x):
            raise ValueError(f"expected a primitive (Lie) element, got {x!r}")


def double_bracket(x: Series, y: Series) -> Series:
    """``x |> y - y |> x + [x, y]`` on primitive elements."""
    _require_primitive(x, y)
    return left_graft(x, y) - left_graft(y, x) + commutator(x, y)


def adjoint_product(x: Series, y: Series) -> Series:
    """``x |> y + [x, y]``, the product of the adjoint post-Lie structure."""
    _require_primitive(x, y)
    return left_graft(x, y) + commutator(x, y)


Product = Callable[[Series, Series], Series]


def adjoint_structure(graft: Product, bracket: Product) -> tuple[Product, Product]:
    """Map ``(|>, [,])`` to ``(|> + [,], -[,])``. Applying it twice is the identity."""

    def new_graft(x, y):
        return graft(x, y) + bracket(x, y)

    def new_bracket(x, y):
        return -bracket(x, y)

    return new_graft, new_bracket


def adjoint_graft(x: Series, b: Series) -> Series:
    """Extension of ``x |>' .`` from a primitive ``x`` to all of ``b`` as a derivation.

    ``x |>' (t1 ... tn) = sum_i t1 ... (x |> ti + [x, ti]) ... tn`` and ``x |>' 1 = 0``.
    """
    if x.basis != b.basis:
        raise BasisMismatch("basis mismatch")
    n = min(x.truncation, b.truncation)
    total = Series.zero(b.basis, n)
    cls = PlanarForest if b.planar else NonplanarForest
    for f, c in b.terms.items():
        for i, t in enumerate(f.trees):
            ti = Series({cls((t,)): 1}, truncation=n)
            middle = left_graft(x, ti) + commutator(x, ti)
            prefix = Series({f[:i]: c}, truncation=n)
            suffix = Series({f[i + 1:]: 1}, truncation=n)
            total = total + concat_product(concat_product(prefix, middle), suffix)
    return total


# -- axiom residuals ----------------------------------------------------------

def associator(x: Series, y: Series, z: Series, graft: Product = left_graft) -> Series:
    return graft(x, graft(y, z)) - graft(graft(x, y), z)


def post_lie_residuals(
    x: Series, y: Series, z: Series, graft: Product = left_graft, bracket: Product = commutator
) -> tuple[Series, Series]:
    """Residuals of the two post-Lie axioms; both vanish in a post-Lie algebra.

    ``x |> [y,z] - [x |> y, z] - [y, x |> z]`` and
    ``[x,y] |> z - a(x,y,z) + a(y,x,z)``.
    """
    r1 = graft(x, bracket(y, z)) - bracket(graft(x, y), z) - bracket(y, graft(x, z))
    r2 = graft(bracket(x, y), z) - associator(x, y, z, graft) + associator(y, x, z, graft)
    return r1, r2


def prelie_residual(x: Series, y: Series, z: Series) -> Series:
    """``a(x,y,z) - a(y,x,z)`` for the grafting product; zero in a left pre-Lie algebra."""
    return associator(x, y, z) - associator(y, x, z)


def curvature_residual(x: Series, y: Series, z: Series) -> Series:
    """``x |> (y |> z) - y |> (x |> z) - [[x, y]] |> z``."""
    _require_primitive(x, y, z)
    return (
        left_graft(x, left_graft(y, z))
        - left_graft(y, left_graft(x, z))
        - left_graft(double_bracket(x, y), z)
    )


def prelie_graft(a: NonplanarTree, b: NonplanarTree) -> Series:
    """Grafting of non-planar trees: attach the root of ``a`` to every node of ``b``."""
    if not isinstance(a, NonplanarTree) or not isinstance(b, NonplanarTree):
        raise TypeError("prelie_graft expects non-planar trees")
    return Series({NonplanarForest((t,)): m for t, m in graft_trees(a, b)}, basis="nonplanar")


def coproduct_of_graft(a: Series, b: Series) -> TensorSeries:
    """``(a_(1) |> b_(1)) (x) (a_(2) |> b_(2))``; equals the coproduct of ``a |> b``."""
    return tensor_product(coshuffle(a), coshuffle(b), _graft_basis)


def coproduct_of_gl(a: Series, b: Series) -> TensorSeries:
    """Factorwise GL product of the coproducts of ``a`` and ``b``."""
    return tensor_product(coshuffle(a), coshuffle(b), _gl_basis)


__all__ = [
    "graft_trees", "graft_forests", "gl_forests", "left_graft", "gl_product",
    "gl_product_via_roots", "gl_dual_coproduct", "commutator", "double_bracket",
    "adjoint_product", "adjoint_structure", "adjoint_graft", "associator",
    "post_lie_residuals", "prelie_residual", "curvature_residual", "prelie_graft",
    "coproduct_of_graft", "coproduct_of_gl",
]
