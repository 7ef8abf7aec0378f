"""Truncated graded series of forests with exact rational coefficients.

A :class:`Series` is a finite linear combination of forests of one basis kind
(planar or non-planar) together with a truncation degree ``N``; terms above
``N`` are discarded and two series are equal when they agree through the
smaller of their truncation degrees.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Callable, Iterator, Mapping, Union

from .forest import (
    MAX_DEGREE,
    NonplanarForest,
    ParseError,
    PlanarForest,
    _Forest,
    _Tree,
    as_forest,
    parse_forest,
    render,
    symmetry_factor,
    to_nonplanar,
)

PLANAR = "planar"
NONPLANAR = "nonplanar"

DEFAULT_TRUNCATION = MAX_DEGREE

Scalar = Union[int, Fraction]


class BasisMismatch(TypeError):
    """Raised when planar and non-planar series are combined."""


def _basis_of(x) -> str:
    return PLANAR if x.planar else NONPLANAR


def _forest_cls(basis: str) -> type:
    return PlanarForest if basis == PLANAR else NonplanarForest


def _sort_key(item):
    return item[0].key


class Series:
    """Graded rational combination of forests, truncated at degree ``truncation``."""

    __slots__ = ("_terms", "basis", "truncation")

    def __init__(
        self,
        terms: Mapping = (),
        basis: str | None = None,
        truncation: int = DEFAULT_TRUNCATION,
    ):
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for f, c in items:
            f = as_forest(f)
            if basis is None:
                basis = _basis_of(f)
            elif _basis_of(f) != basis:
                raise BasisMismatch(f"{f!r} does not belong to the {basis} basis")
            if f.degree > truncation:
                continue
            c = Fraction(c)
            if c:
                c = clean.get(f, 0) + c
                if c:
                    clean[f] = c
                else:
                    clean.pop(f, None)
        self._terms = clean
        self.basis = basis or PLANAR
        self.truncation = truncation

    @classmethod
    def _raw(cls, terms: dict, basis: str, truncation: int) -> "Series":
        # trusted constructor: terms already clean and truncated
        s = object.__new__(cls)
        s._terms = terms
        s.basis = basis
        s.truncation = truncation
        return s

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, basis: str = PLANAR, truncation: int = DEFAULT_TRUNCATION) -> "Series":
        return cls._raw({}, basis, truncation)

    @classmethod
    def unit(cls, basis: str = PLANAR, truncation: int = DEFAULT_TRUNCATION) -> "Series":
        return cls._raw({_forest_cls(basis)(): Fraction(1)}, basis, truncation)

    @classmethod
    def of(cls, x, coeff: Scalar = 1, truncation: int = DEFAULT_TRUNCATION) -> "Series":
        """Single-term series for a tree, forest or forest text."""
        if isinstance(x, str):
            x = parse_forest(x)
        return cls({as_forest(x): coeff}, truncation=truncation)

    # -- access ------------------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @property
    def planar(self) -> bool:
        return self.basis == PLANAR

    def items(self) -> list[tuple]:
        """Terms sorted by (degree, canonical forest order)."""
        return sorted(self._terms.items(), key=_sort_key)

    def __iter__(self) -> Iterator:
        return iter(f for f, _ in self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, f) -> Fraction:
        f = as_forest(f)
        self._check_forest(f)
        return self._terms.get(f, Fraction(0))

    def pairing(self, f) -> Fraction:
        """Planar: the coefficient. Non-planar: symmetry factor times coefficient."""
        f = as_forest(f)
        c = self.coefficient(f)
        return c if self.planar else c * symmetry_factor(f)

    def counit(self) -> Fraction:
        return self._terms.get(_forest_cls(self.basis)(), Fraction(0))

    def degrees(self) -> list[int]:
        return sorted({f.degree for f in self._terms})

    def min_degree(self) -> int | None:
        return min((f.degree for f in self._terms), default=None)

    def degree_part(self, n: int) -> "Series":
        return Series._raw(
            {f: c for f, c in self._terms.items() if f.degree == n}, self.basis, self.truncation
        )

    def truncate(self, n: int) -> "Series":
        n = min(n, self.truncation)
        return Series._raw({f: c for f, c in self._terms.items() if f.degree <= n}, self.basis, n)

    def with_truncation(self, n: int) -> "Series":
        """Same terms (those of degree <= n) carrying truncation ``n``, which may be larger."""
        return Series._raw({f: c for f, c in self._terms.items() if f.degree <= n}, self.basis, n)

    def _check_forest(self, f) -> None:
        if _basis_of(f) != self.basis:
            raise BasisMismatch(f"{f!r} does not belong to the {self.basis} basis")

    def _check(self, other: "Series") -> None:
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if other.basis != self.basis:
            raise BasisMismatch(f"cannot combine {self.basis} and {other.basis} series")

    # -- linear structure -----------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        n = min(self.truncation, other.truncation)
        out = {f: c for f, c in self._terms.items() if f.degree <= n}
        for f, c in other._terms.items():
            if f.degree > n:
                continue
            c = out.get(f, 0) + c
            if c:
                out[f] = c
            else:
                out.pop(f, None)
        return Series._raw(out, self.basis, n)

    def __neg__(self) -> "Series":
        return Series._raw({f: -c for f, c in self._terms.items()}, self.basis, self.truncation)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, k: Scalar) -> "Series":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        if not k:
            return Series.zero(self.basis, self.truncation)
        return Series._raw({f: c * k for f, c in self._terms.items()}, self.basis, self.truncation)

    __rmul__ = __mul__

    def __truediv__(self, k: Scalar) -> "Series":
        return self * (1 / Fraction(k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        if other.basis != self.basis:
            return False
        n = min(self.truncation, other.truncation)
        a = {f: c for f, c in self._terms.items() if f.degree <= n}
        b = {f: c for f, c in other._terms.items() if f.degree <= n}
        return a == b

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*({render(f)})" for f, c in self.items()) or "0"
        return f"Series({body}; {self.basis}, N={self.truncation})"

    def to_nonplanar(self) -> "Series":
        """Linear projection forgetting the child and tree order."""
        if not self.planar:
            return self
        return Series(
            [(to_nonplanar(f), c) for f, c in self._terms.items()],
            basis=NONPLANAR,
            truncation=self.truncation,
        )

    # -- text -------------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return "\n".join(f"{format_rational(c)}\t{render(f)}" for f, c in self.items())

    @classmethod
    def from_text(
        cls, text: str, planar: bool = True, truncation: int = DEFAULT_TRUNCATION
    ) -> "Series":
        basis = PLANAR if planar else NONPLANAR
        lines = text.strip("\n").split("\n")
        if lines == ["0"]:
            return cls.zero(basis, truncation)
        terms = []
        offset = 0
        for line in lines:
            coeff, sep, forest = line.partition("\t")
            if not sep:
                raise ParseError("expected '<rational>\\t<forest>'", text, offset + len(line))
            try:
                c = Fraction(coeff)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational {coeff!r}", text, offset) from None
            try:
                f = parse_forest(forest, planar=planar)
            except ParseError as e:
                raise ParseError(str(e).split(" at position")[0], text, offset + len(coeff) + 1 + e.pos) from None
            terms.append((f, c))
            offset += len(line) + 1
        return cls(terms, basis=basis, truncation=truncation)

    def to_json(self) -> dict:
        """``{degree: [{"coeff": "p/q", "forest": text}, ...]}`` with string degree keys."""
        out: dict[str, list] = {}
        for f, c in self.items():
            out.setdefault(str(f.degree), []).append({"coeff": format_rational(c), "forest": render(f)})
        return out


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def as_series(x, truncation: int = DEFAULT_TRUNCATION) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, (_Tree, _Forest, str)):
        return Series.of(x, truncation=truncation)
    raise TypeError(f"cannot interpret {type(x).__name__} as a series")


# -- bilinear machinery --------------------------------------------------------

def bilinear(
    a: Series, b: Series, basis_op: Callable[[_Forest, _Forest], Mapping]
) -> Series:
    """Extend a degree-additive operation on basis forests bilinearly to series."""
    a._check(b)
    n = min(a.truncation, b.truncation)
    out: dict = {}
    for f, c in a._terms.items():
        if f.degree > n:
            continue
        for g, d in b._terms.items():
            if f.degree + g.degree > n:
                continue
            cd = c * d
            for h, e in basis_op(f, g).items():
                v = out.get(h, 0) + cd * e
                if v:
                    out[h] = v
                else:
                    out.pop(h, None)
    return Series._raw(out, a.basis, n)


def linear(a: Series, basis_op: Callable[[_Forest], Mapping], basis: str | None = None) -> Series:
    """Extend a degree-preserving map on basis forests linearly."""
    out: dict = {}
    for f, c in a._terms.items():
        for h, e in basis_op(f).items():
            v = out.get(h, 0) + c * e
            if v:
                out[h] = v
            else:
                out.pop(h, None)
    return Series._raw(out, basis or a.basis, a.truncation)


def _concat_basis(f, g):
    return {f.concat(g): 1}


def concat_product(a: Series, b: Series) -> Series:
    """Concatenation of planar forests, or the symmetric product of non-planar ones."""
    return bilinear(a, b, _concat_basis)


def counit(a: Series) -> Fraction:
    return a.counit()


def pairing(a: Series, f) -> Fraction:
    return a.pairing(f)


# -- tensors ----------------------------------------------------------------

class TensorSeries:
    """Rational combination of forest pairs, truncated on total degree."""

    __slots__ = ("_terms", "basis", "truncation")

    def __init__(self, terms: Mapping = (), basis: str | None = None, truncation: int = DEFAULT_TRUNCATION):
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (f, g), c in items:
            f, g = as_forest(f), as_forest(g)
            if basis is None:
                basis = _basis_of(f)
            if _basis_of(f) != basis or _basis_of(g) != basis:
                raise BasisMismatch("mixed bases in tensor")
            if f.degree + g.degree > truncation:
                continue
            c = clean.get((f, g), 0) + Fraction(c)
            if c:
                clean[(f, g)] = c
            else:
                clean.pop((f, g), None)
        self._terms = clean
        self.basis = basis or PLANAR
        self.truncation = truncation

    @classmethod
    def _raw(cls, terms: dict, basis: str, truncation: int) -> "TensorSeries":
        t = object.__new__(cls)
        t._terms = terms
        t.basis = basis
        t.truncation = truncation
        return t

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple]:
        return sorted(
            self._terms.items(),
            key=lambda kv: (kv[0][0].degree + kv[0][1].degree, kv[0][0].key, kv[0][1].key),
        )

    def coefficient(self, f, g) -> Fraction:
        return self._terms.get((as_forest(f), as_forest(g)), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        if other.basis != self.basis:
            raise BasisMismatch("cannot add tensors of different bases")
        n = min(self.truncation, other.truncation)
        out = {k: c for k, c in self._terms.items() if k[0].degree + k[1].degree <= n}
        for k, c in other._terms.items():
            if k[0].degree + k[1].degree > n:
                continue
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TensorSeries._raw(out, self.basis, n)

    def __neg__(self) -> "TensorSeries":
        return TensorSeries._raw({k: -c for k, c in self._terms.items()}, self.basis, self.truncation)

    def __sub__(self, other: "TensorSeries") -> "TensorSeries":
        return self + (-other)

    def __mul__(self, k: Scalar) -> "TensorSeries":
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return TensorSeries({key: c * k for key, c in self._terms.items()}, self.basis, self.truncation)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorSeries):
            return NotImplemented
        if other.basis != self.basis:
            return False
        n = min(self.truncation, other.truncation)

        def cut(t):
            return {k: c for k, c in t._terms.items() if k[0].degree + k[1].degree <= n}

        return cut(self) == cut(other)

    __hash__ = None  # type: ignore[assignment]

    def swap(self) -> "TensorSeries":
        return TensorSeries._raw({(g, f): c for (f, g), c in self._terms.items()}, self.basis, self.truncation)

    def pair_with(self, a: Series, b: Series) -> Fraction:
        """<a (x) b, self> using the basis pairing of each factor."""
        return sum((c * a.pairing(f) * b.pairing(g) for (f, g), c in self._terms.items()), Fraction(0))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return "\n".join(
            f"{format_rational(c)}\t{render(f)}\t{render(g)}" for (f, g), c in self.items()
        )

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*({render(f)} (x) {render(g)})" for (f, g), c in self.items()) or "0"
        return f"TensorSeries({body}; N={self.truncation})"


def tensor(a: Series, b: Series) -> TensorSeries:
    a._check(b)
    n = min(a.truncation, b.truncation)
    out = {}
    for f, c in a._terms.items():
        for g, d in b._terms.items():
            if f.degree + g.degree <= n:
                out[(f, g)] = c * d
    return TensorSeries._raw(out, a.basis, n)


def tensor_product(
    s: TensorSeries, t: TensorSeries, basis_op: Callable[[_Forest, _Forest], Mapping]
) -> TensorSeries:
    """Factorwise product (f1 (x) g1)(f2 (x) g2) = op(f1, f2) (x) op(g1, g2)."""
    if s.basis != t.basis:
        raise BasisMismatch("cannot multiply tensors of different bases")
    n = min(s.truncation, t.truncation)
    out: dict = {}
    for (f1, g1), c in s._terms.items():
        for (f2, g2), d in t._terms.items():
            if f1.degree + g1.degree + f2.degree + g2.degree > n:
                continue
            left = basis_op(f1, f2)
            right = basis_op(g1, g2)
            for h, e in left.items():
                for k, w in right.items():
                    key = (h, k)
                    v = out.get(key, 0) + c * d * e * w
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
    return TensorSeries._raw(out, s.basis, n)


# -- coproduct ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _split(f: _Forest) -> tuple:
    """All (sub-word, complementary sub-word) pairs over position subsets, with multiplicity."""
    cls = type(f)
    trees = f.trees
    k = len(trees)
    out: dict = {}
    for r in range(k + 1):
        for left in combinations(range(k), r):
            chosen = set(left)
            pair = (
                cls(trees[i] for i in left),
                cls(trees[i] for i in range(k) if i not in chosen),
            )
            out[pair] = out.get(pair, 0) + 1
    return tuple(out.items())


def coproduct_basis(f: _Forest) -> tuple:
    """Coshuffle of one forest as ``((left, right), multiplicity)`` pairs."""
    return _split(f)


def coshuffle(a: Series) -> TensorSeries:
    """The coproduct making every tree primitive, extended multiplicatively."""
    out: dict = {}
    for f, c in a._terms.items():
        for pair, m in _split(f):
            v = out.get(pair, 0) + c * m
            if v:
                out[pair] = v
            else:
                out.pop(pair, None)
    return TensorSeries._raw(out, a.basis, a.truncation)


def is_character(a: Series) -> bool:
    """Group-like through the truncation degree: coproduct equals a (x) a."""
    return a.counit() == 1 and coshuffle(a) == tensor(a, a)


def is_infinitesimal_character(a: Series) -> bool:
    """Primitive through the truncation degree."""
    if a.counit() != 0:
        return False
    unit = Series.unit(a.basis, a.truncation)
    return coshuffle(a) == tensor(a, unit) + tensor(unit, a)


def is_character_by_pairing(a: Series) -> bool:
    """Non-planar test via multiplicativity of the pairing over forests up to the truncation."""
    from .forest import enumerate_nonplanar_forests

    if a.planar:
        raise BasisMismatch("pairing criterion is stated for the non-planar basis")
    if a.pairing(NonplanarForest()) != 1:
        return False
    for n in range(1, a.truncation + 1):
        for f in enumerate_nonplanar_forests(n):
            if len(f) < 2:
                continue
            head, tail = f[:1], f[1:]
            if a.pairing(f) != a.pairing(head) * a.pairing(tail):
                return False
    return True
