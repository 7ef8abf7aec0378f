"""Truncated exponentials, the inverse differential of exp, and the theta recursion.

All sums terminate by grading: an argument without a degree-0 part raises the
lowest degree by at least one per factor.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial

from .forest import LEAF
from .postlie import commutator, gl_product, left_graft
from .series import PLANAR, Series, concat_product

_bernoulli = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """Bernoulli number with ``B_1 = -1/2``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    with _bernoulli_lock:
        while len(_bernoulli) <= k:
            m = len(_bernoulli)
            # sum_{j<=m} C(m+1, j) B_j = 0
            s = sum(comb(m + 1, j) * _bernoulli[j] for j in range(m))
            _bernoulli.append(-s / (m + 1))
        return _bernoulli[k]


def dexpinv_coefficient(k: int) -> Fraction:
    """Coefficient of ``ad_U^k`` in the inverse differential: ``(-1)^k B_k / k!``.

    Gives ``V + 1/2 [U,V] + 1/12 [U,[U,V]] - ...``, the inverse of
    ``exp(-U) d/dt exp(U) = (1 - exp(-ad_U)) / ad_U``.
    """
    return (-1) ** k * bernoulli(k) / factorial(k)


def _require_no_unit(f: Series) -> None:
    if f.counit() != 0:
        raise ValueError("argument has a nonzero coefficient on the empty forest")


def _power_series(f: Series, coeffs, mul, truncation: int | None) -> Series:
    n = f.truncation if truncation is None else min(truncation, f.truncation)
    f = f.truncate(n)
    _require_no_unit(f)
    total = Series.unit(f.basis, n) * coeffs(0)
    power = Series.unit(f.basis, n)
    k = 0
    while True:
        k += 1
        power = mul(power, f)
        if not power:
            return total
        total = total + power * coeffs(k)


def exp_concat(f: Series, truncation: int | None = None) -> Series:
    """``1 + f + ff/2 + fff/6 + ...`` for the concatenation product."""
    return _power_series(f, lambda k: Fraction(1, factorial(k)), concat_product, truncation)


def exp_gl(f: Series, truncation: int | None = None) -> Series:
    """``1 + f + f*f/2 + ...`` for the Grossman-Larson product."""
    return _power_series(f, lambda k: Fraction(1, factorial(k)), gl_product, truncation)


def ad_power(u: Series, v: Series, k: int) -> Series:
    for _ in range(k):
        v = commutator(u, v)
    return v


def dexpinv(u: Series, v: Series, truncation: int | None = None) -> Series:
    """``sum_k c_k ad_u^k(v)`` with :func:`dexpinv_coefficient` weights."""
    n = min(u.truncation, v.truncation) if truncation is None else truncation
    u, v = u.truncate(n), v.truncate(n)
    _require_no_unit(u)
    _require_no_unit(v)
    total = v
    term = v
    k = 0
    while True:
        k += 1
        term = commutator(u, term)
        if not term:
            return total
        c = dexpinv_coefficient(k)
        if c:
            total = total + term * c


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def magnus_terms(f: Series, truncation: int | None = None) -> list[Series]:
    """``[theta_1, theta_2, ...]`` with ``exp*(f) = exp(sum_n theta_n)``.

    Solves ``n theta_n = [t^(n-1)] D(t) W(t)`` where ``W(t) = exp(theta(t)) |> f``
    and ``D(t)`` is the inverse differential of exp at ``theta(t)``:

    * ``W_i = sum_j 1/j! sum_{k_1+..+k_j=i} (theta_k1 ... theta_kj) |> f``
    * ``D_s = sum_j c_j sum_{k_1+..+k_j=s} ad_theta_k1 ... ad_theta_kj``
    """
    n_max = f.truncation if truncation is None else min(truncation, f.truncation)
    f = f.truncate(n_max)
    _require_no_unit(f)
    low = f.min_degree()
    if low is None:
        return []
    zero = Series.zero(f.basis, n_max)
    thetas: list[Series] = [zero]  # 1-based
    products_cache: dict[tuple, Series] = {}

    def word(ks: tuple) -> Series:
        if ks not in products_cache:
            out = thetas[ks[0]]
            for k in ks[1:]:
                out = concat_product(out, thetas[k])
            products_cache[ks] = out
        return products_cache[ks]

    def w_part(i: int) -> Series:
        if i == 0:
            return f
        out = zero
        for j in range(1, i + 1):
            acc = zero
            for ks in _compositions(i, j):
                acc = acc + word(ks)
            if acc:
                out = out + left_graft(acc, f) * Fraction(1, factorial(j))
        return out

    def d_apply(s: int, x: Series) -> Series:
        out = zero
        for j in range(1, s + 1):
            c = dexpinv_coefficient(j)
            if not c:
                continue
            for ks in _compositions(s, j):
                y = x
                for k in reversed(ks):
                    y = commutator(thetas[k], y)
                    if not y:
                        break
                out = out + y * c
        return out

    n = 0
    while True:
        n += 1
        if n * low > n_max:
            break
        rhs = w_part(n - 1)
        for s in range(1, n):
            rhs = rhs + d_apply(s, w_part(n - 1 - s))
        thetas.append(rhs * Fraction(1, n))
    return thetas[1:]


def magnus_theta(f: Series, truncation: int | None = None) -> Series:
    """``theta(1) = sum_n theta_n(f)``."""
    n = f.truncation if truncation is None else min(truncation, f.truncation)
    total = Series.zero(f.basis, n)
    for t in magnus_terms(f, n):
        total = total + t
    return total


def phi_series(truncation: int) -> Series:
    """``sum_k  leaf^{*k} / (k+1)!`` in the planar basis."""
    leaf = Series.of(LEAF, truncation=truncation)
    return _power_series(leaf, lambda k: Fraction(1, factorial(k + 1)), gl_product, truncation)


def leaf_series(truncation: int, basis: str = PLANAR) -> Series:
    """The single-node generator as a series."""
    s = Series.of(LEAF, truncation=truncation)
    return s.to_nonplanar() if basis != PLANAR else s


__all__ = [
    "bernoulli", "dexpinv_coefficient", "exp_concat", "exp_gl", "ad_power", "dexpinv",
    "magnus_terms", "magnus_theta", "phi_series", "leaf_series",
]
