"""Planar and non-planar rooted trees and forests.

Trees are immutable and hashable. Every tree carries a sort key
``(degree, child keys, label)`` which defines the canonical total order used
for sorting, for non-planar canonical forms and for deterministic output.

Text grammar::

    tree   := '[' tree* ']' label?      label in 'a'..'z'
    forest := tree (' ' tree)*  |  '1'
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Union

MAX_DEGREE = 12
"""Hard cap on node counts accepted by the enumerators."""

LABELS = "abcdefghijklmnopqrstuvwxyz"


class ParseError(ValueError):
    """Malformed tree/forest/series text. ``pos`` is the 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class _Tree:
    __slots__ = ("children", "label", "degree", "key", "_hash")
    planar: bool

    def __init__(self, children: Iterable["_Tree"] = (), label: str = ""):
        children = tuple(children)
        for c in children:
            if type(c) is not type(self):
                raise TypeError(f"child {c!r} is not a {type(self).__name__}")
        if label and label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        if not self.planar:
            children = tuple(sorted(children, key=_key))
        self.children = children
        self.label = label
        self.degree = 1 + sum(c.degree for c in children)
        self.key = (self.degree, tuple(c.key for c in children), label)
        self._hash = hash((self.planar, self.key))

    def __setattr__(self, name, value):
        if hasattr(self, "_hash"):
            raise AttributeError(f"{type(self).__name__} is immutable")
        object.__setattr__(self, name, value)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and other._hash == self._hash and other.key == self.key

    def __lt__(self, other: "_Tree") -> bool:
        return self.key < other.key

    def __len__(self) -> int:
        return self.degree

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({render(self)!r})"

    def nodes(self) -> Iterator["_Tree"]:
        """Subtrees rooted at every node, in preorder."""
        yield self
        for c in self.children:
            yield from c.nodes()


class PlanarTree(_Tree):
    """Rooted tree whose children are ordered."""

    __slots__ = ()
    planar = True


class NonplanarTree(_Tree):
    """Rooted tree with children kept in canonical (sorted) order."""

    __slots__ = ()
    planar = False


class _Forest:
    __slots__ = ("trees", "degree", "key", "_hash")
    planar: bool
    tree_type: type

    def __init__(self, trees: Iterable[_Tree] = ()):
        trees = tuple(trees)
        for t in trees:
            if type(t) is not self.tree_type:
                raise TypeError(f"{t!r} is not a {self.tree_type.__name__}")
        if not self.planar:
            trees = tuple(sorted(trees, key=_key))
        self.trees = trees
        self.degree = sum(t.degree for t in trees)
        self.key = (self.degree, tuple(t.key for t in trees))
        self._hash = hash((self.planar, "forest", self.key))

    def __setattr__(self, name, value):
        if hasattr(self, "_hash"):
            raise AttributeError(f"{type(self).__name__} is immutable")
        object.__setattr__(self, name, value)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and other._hash == self._hash and other.key == self.key

    def __lt__(self, other: "_Forest") -> bool:
        return self.key < other.key

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[_Tree]:
        return iter(self.trees)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return type(self)(self.trees[i])
        return self.trees[i]

    def __bool__(self) -> bool:
        return bool(self.trees)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({render(self)!r})"

    def concat(self, other: "_Forest") -> "_Forest":
        if type(other) is not type(self):
            raise TypeError("cannot concatenate planar and non-planar forests")
        return type(self)(self.trees + other.trees)


class PlanarForest(_Forest):
    """Ordered word of planar trees; the empty word is the unit."""

    __slots__ = ()
    planar = True
    tree_type = PlanarTree


class NonplanarForest(_Forest):
    """Multiset of non-planar trees, stored sorted."""

    __slots__ = ()
    planar = False
    tree_type = NonplanarTree


Tree = Union[PlanarTree, NonplanarTree]
Forest = Union[PlanarForest, NonplanarForest]


def _key(x):
    return x.key


def forest_type(tree_type: type) -> type:
    return PlanarForest if tree_type is PlanarTree else NonplanarForest


def as_forest(x) -> Forest:
    """Wrap a single tree as a one-tree forest; forests pass through."""
    if isinstance(x, _Forest):
        return x
    if isinstance(x, _Tree):
        return forest_type(type(x))((x,))
    raise TypeError(f"expected a tree or forest, got {type(x).__name__}")


# -- constructors -----------------------------------------------------------

def b_plus(f: Forest, label: str = "") -> Tree:
    """Graft the trees of ``f`` onto a new root, keeping their order."""
    return f.tree_type(f.trees, label)


def b_minus(t: Tree) -> Forest:
    """Remove the root of ``t``."""
    return forest_type(type(t))(t.children)


LEAF = PlanarTree()
UNIT = PlanarForest()
NP_LEAF = NonplanarTree()
NP_UNIT = NonplanarForest()


def chain(n: int, planar: bool = True) -> Tree:
    """The tree with ``n`` nodes on a single path."""
    t = PlanarTree() if planar else NonplanarTree()
    for _ in range(n - 1):
        t = type(t)((t,))
    return t


def corolla(k: int, planar: bool = True) -> Tree:
    """Root with ``k`` leaf children."""
    cls = PlanarTree if planar else NonplanarTree
    return cls([cls()] * k)


# -- canonical forms ----------------------------------------------------------

def to_nonplanar(x):
    """Forget the child order. Trees map to trees, forests to forests."""
    if isinstance(x, NonplanarTree) or isinstance(x, NonplanarForest):
        return x
    if isinstance(x, PlanarTree):
        return _np_tree(x)
    if isinstance(x, PlanarForest):
        return NonplanarForest(_np_tree(t) for t in x.trees)
    raise TypeError(f"expected a planar tree or forest, got {type(x).__name__}")


@lru_cache(maxsize=None)
def _np_tree(t: PlanarTree) -> NonplanarTree:
    return NonplanarTree((_np_tree(c) for c in t.children), t.label)


def to_planar(x):
    """The planar representative of a non-planar tree/forest (canonical child order)."""
    if isinstance(x, NonplanarTree):
        return PlanarTree((to_planar(c) for c in x.children), x.label)
    if isinstance(x, NonplanarForest):
        return PlanarForest(to_planar(t) for t in x.trees)
    if isinstance(x, (PlanarTree, PlanarForest)):
        return x
    raise TypeError(f"expected a tree or forest, got {type(x).__name__}")


# -- enumeration ----------------------------------------------------------------

def _check_n(n: int, allow_zero: bool = False) -> None:
    if not isinstance(n, int) or n < (0 if allow_zero else 1):
        raise ValueError(f"node count must be a{' non-negative' if allow_zero else ' positive'} integer, got {n!r}")
    if n > MAX_DEGREE:
        raise ValueError(f"node count {n} exceeds the cap MAX_DEGREE={MAX_DEGREE}")


def enumerate_planar_trees(n: int, labels: str = "") -> list[PlanarTree]:
    """All planar trees with ``n`` nodes, sorted canonically.

    ``labels`` is the generator alphabet; the empty string means one unlabelled
    generator.
    """
    _check_n(n)
    return list(_planar_trees(n, labels))


def enumerate_planar_forests(n: int, labels: str = "") -> list[PlanarForest]:
    """All ordered forests with ``n`` nodes (``n = 0`` gives the unit)."""
    _check_n(n, allow_zero=True)
    return list(_planar_forests(n, labels))


@lru_cache(maxsize=None)
def _planar_trees(n: int, labels: str) -> tuple[PlanarTree, ...]:
    out = [PlanarTree(f.trees, lab) for f in _planar_forests(n - 1, labels) for lab in (labels or [""])]
    return tuple(sorted(out, key=_key))


@lru_cache(maxsize=None)
def _planar_forests(n: int, labels: str) -> tuple[PlanarForest, ...]:
    if n == 0:
        return (PlanarForest(),)
    out = []
    for first in range(1, n + 1):
        for t in _planar_trees(first, labels):
            for rest in _planar_forests(n - first, labels):
                out.append(PlanarForest((t,) + rest.trees))
    return tuple(sorted(out, key=_key))


def enumerate_nonplanar_trees(n: int, labels: str = "") -> list[NonplanarTree]:
    """All non-planar trees with ``n`` nodes, sorted canonically."""
    _check_n(n)
    return list(_nonplanar_trees(n, labels))


def enumerate_nonplanar_forests(n: int, labels: str = "") -> list[NonplanarForest]:
    """All non-planar forests with ``n`` nodes (``n = 0`` gives the unit)."""
    _check_n(n, allow_zero=True)
    return list(_nonplanar_forests(n, labels))


@lru_cache(maxsize=None)
def _nonplanar_trees(n: int, labels: str) -> tuple[NonplanarTree, ...]:
    out = [NonplanarTree(f.trees, lab) for f in _nonplanar_forests(n - 1, labels) for lab in (labels or [""])]
    return tuple(sorted(out, key=_key))


@lru_cache(maxsize=None)
def _nonplanar_forests(n: int, labels: str) -> tuple[NonplanarForest, ...]:
    # multisets of trees: choose trees in non-decreasing canonical order
    def build(remaining: int, min_key) -> Iterator[tuple]:
        if remaining == 0:
            yield ()
            return
        for d in range(1, remaining + 1):
            for t in _nonplanar_trees(d, labels):
                if min_key is not None and t.key < min_key:
                    continue
                for rest in build(remaining - d, t.key):
                    yield (t,) + rest

    return tuple(sorted((NonplanarForest(ts) for ts in build(n, None)), key=_key))


# -- statistics --------------------------------------------------------------

def symmetry_factor(x) -> int:
    """Order of the automorphism group of a non-planar tree or forest."""
    if isinstance(x, (PlanarTree, PlanarForest)):
        x = to_nonplanar(x)
    if isinstance(x, NonplanarTree):
        return _sigma_forest(NonplanarForest(x.children))
    return _sigma_forest(x)


@lru_cache(maxsize=None)
def _sigma_forest(f: NonplanarForest) -> int:
    counts = Counter(f.trees)
    return prod(
        (_sigma_forest(NonplanarForest(t.children)) ** mu) * factorial(mu)
        for t, mu in counts.items()
    )


def tree_factorial(t: Tree) -> int:
    """|t| times the product of the factorials of the root's subtrees."""
    return t.degree * prod(tree_factorial(c) for c in t.children)


# -- text format ------------------------------------------------------------

def render(x) -> str:
    """Canonical bracket rendering of a tree or forest."""
    if isinstance(x, _Tree):
        return "[" + "".join(render(c) for c in x.children) + "]" + x.label
    if isinstance(x, _Forest):
        return " ".join(render(t) for t in x.trees) if x.trees else "1"
    raise TypeError(f"cannot render {type(x).__name__}")


def render_latex(x) -> str:
    r"""Tree macros in ``\aabb`` style: ``a`` opens a node, ``b`` closes it."""
    if isinstance(x, _Tree):
        return "\\" + render(x).replace("[", "a").replace("]", "b")
    if isinstance(x, _Forest):
        return " ".join(render_latex(t) for t in x.trees) if x.trees else r"\one"
    raise TypeError(f"cannot render {type(x).__name__}")


def _parse_tree_at(text: str, pos: int, cls: type, labels: str | None) -> tuple[_Tree, int]:
    if pos >= len(text) or text[pos] != "[":
        raise ParseError("expected '['", text, pos)
    pos += 1
    children = []
    while True:
        if pos >= len(text):
            raise ParseError("unclosed '['", text, pos)
        ch = text[pos]
        if ch == "]":
            pos += 1
            break
        if ch == "[":
            child, pos = _parse_tree_at(text, pos, cls, labels)
            children.append(child)
        else:
            raise ParseError(f"unexpected character {ch!r}", text, pos)
    label = ""
    if pos < len(text) and text[pos] in LABELS:
        if labels is not None and text[pos] not in labels:
            raise ParseError(f"unknown label {text[pos]!r}", text, pos)
        label = text[pos]
        pos += 1
    return cls(children, label), pos


def parse_tree(text: str, planar: bool = True, labels: str | None = None) -> Tree:
    """Parse one tree. ``labels`` restricts the accepted alphabet (None: any a-z)."""
    if not text:
        raise ParseError("empty input", text, 0)
    tree, pos = _parse_tree_at(text, 0, PlanarTree if planar else NonplanarTree, labels)
    if pos != len(text):
        raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
    return tree


def parse_forest(text: str, planar: bool = True, labels: str | None = None) -> Forest:
    """Parse a space-separated forest; ``"1"`` is the empty forest."""
    if not text:
        raise ParseError("empty input", text, 0)
    cls = PlanarTree if planar else NonplanarTree
    if text == "1":
        return forest_type(cls)()
    trees = []
    pos = 0
    while True:
        tree, pos = _parse_tree_at(text, pos, cls, labels)
        trees.append(tree)
        if pos == len(text):
            break
        if text[pos] != " ":
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        pos += 1
    return forest_type(cls)(trees)


def catalan(n: int) -> int:
    return factorial(2 * n) // (factorial(n) * factorial(n + 1))


__all__ = [
    "MAX_DEGREE", "ParseError", "PlanarTree", "NonplanarTree", "PlanarForest", "NonplanarForest",
    "LEAF", "UNIT", "NP_LEAF", "NP_UNIT", "as_forest", "b_plus", "b_minus", "chain", "corolla",
    "to_nonplanar", "to_planar", "enumerate_planar_trees", "enumerate_planar_forests",
    "enumerate_nonplanar_trees", "enumerate_nonplanar_forests", "symmetry_factor",
    "tree_factorial", "render", "render_latex", "parse_tree", "parse_forest", "catalan",
]
