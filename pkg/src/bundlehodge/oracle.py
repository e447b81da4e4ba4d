"""Independent reference computations used to cross-check :mod:`bundlehodge.moduli`.

Two kinds of reference:

* closed-form rational expressions in ``x, y`` (ranks 2 and 3), expanded by
  exact long division;
* the univariate Betti-number recursion in ``t``, run on :class:`UniPoly`
  arithmetic so that a fault in the bivariate engine cannot confirm itself.

Only the type enumerator is shared with the main recursion.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Tuple

from . import hntypes
from .errors import ConsistencyError, DomainError
from .series import BiSeries, UniPoly, div_exact, is_polynomial_below, power


def _b(terms, cap):
    return BiSeries(terms, cap)


def _binomial_power(i, j, e, cap, sign=1):
    """``(1 + sign * x^i y^j) ** e``."""
    return power(_b({(0, 0): 1, (i, j): sign}, cap), e)


def _one_minus(i, j, cap):
    return _b({(0, 0): 1, (i, j): -1}, cap)


def _expand_polynomial(num: BiSeries, den: BiSeries, top: int, label: str) -> BiSeries:
    """``num / den`` asserted to be a polynomial with top bidegree ``(top, top)``."""
    q = div_exact(num, den)
    if not is_polynomial_below(q, 2 * top):
        raise ConsistencyError(f"{label} polynomiality", "quotient does not terminate")
    q = q.truncate(2 * top)
    if q.coefficient(top, top) != 1:
        raise ConsistencyError(f"{label} top bidegree", f"coefficient of x^{top} y^{top} is {q.coefficient(top, top)}")
    return q


def closed_form_rank2(g: int, cap: Optional[int] = None) -> BiSeries:
    """Fixed-determinant Hodge polynomial for rank 2, odd degree.

    ``[(1+x^2 y)^g (1+x y^2)^g - x^g y^g (1+x)^g (1+y)^g] / [(1-xy)(1-x^2 y^2)]``
    """
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")
    top = 3 * (g - 1)
    cap = 2 * top + 2 if cap is None else cap
    num = _binomial_power(2, 1, g, cap) * _binomial_power(1, 2, g, cap)
    num = num - (_binomial_power(1, 0, g, cap) * _binomial_power(0, 1, g, cap)).shift(g, g)
    den = _one_minus(1, 1, cap) * _one_minus(2, 2, cap)
    return _expand_polynomial(num, den, top, "rank 2 closed form")


def closed_form_rank3(g: int, cap: Optional[int] = None) -> BiSeries:
    """Fixed-determinant Hodge polynomial for rank 3, degree prime to 3 (three-term closed form)."""
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")
    top = 8 * (g - 1)
    cap = 2 * top + 2 if cap is None else cap
    jac = _binomial_power(1, 0, g, cap) * _binomial_power(0, 1, g, cap)
    mixed = _binomial_power(1, 2, g, cap) * _binomial_power(2, 1, g, cap)
    first = _binomial_power(2, 3, g, cap) * _binomial_power(3, 2, g, cap) * mixed
    second = (power(_b({(0, 0): 1, (1, 1): 1}, cap), 2) * jac * mixed).shift(2 * g - 1, 2 * g - 1)
    third = (_b({(0, 0): 1, (1, 1): 1, (2, 2): 1}, cap) * jac * jac).shift(3 * g - 1, 3 * g - 1)
    num = first - second + third
    den = _one_minus(1, 1, cap) * power(_one_minus(2, 2, cap), 2) * _one_minus(3, 3, cap)
    return _expand_polynomial(num, den, top, "rank 3 closed form")


def closed_form_F21(g: int, cap: int) -> BiSeries:
    """Semistable series for rank 2, degree 1, with the type sum done in closed form."""
    jac = _binomial_power(1, 0, g, cap) * _binomial_power(0, 1, g, cap)
    num = jac * _binomial_power(2, 1, g, cap) * _binomial_power(1, 2, g, cap)
    num = num - (jac * jac).shift(g, g)
    den = _one_minus(2, 2, cap) * power(_one_minus(1, 1, cap), 2)
    return div_exact(num, den)


def closed_form_F20(g: int, cap: int) -> BiSeries:
    """Semistable series for rank 2, degree 0.

    The destabilising types ``(r, -r)``, ``r >= 1``, have codimension
    ``2r + g - 1`` and sum to ``(xy)^(g+1) / (1 - x^2 y^2)``.
    """
    jac = _binomial_power(1, 0, g, cap) * _binomial_power(0, 1, g, cap)
    num = jac * _binomial_power(2, 1, g, cap) * _binomial_power(1, 2, g, cap)
    num = num - (jac * jac).shift(g + 1, g + 1)
    den = _one_minus(2, 2, cap) * power(_one_minus(1, 1, cap), 2)
    return div_exact(num, den)


def closed_form_rank3_type_sums(g: int, cap: int) -> Tuple[BiSeries, BiSeries, BiSeries]:
    """Contributions of the (1,1,1)-, (2,1)- and (1,2)-types to the rank 3, degree 1 recursion."""
    jac = _binomial_power(1, 0, g, cap) * _binomial_power(0, 1, g, cap)
    f20 = closed_form_F20(g, cap)
    f21 = closed_form_F21(g, cap)
    triple = div_exact(
        power(jac, 3).shift(3 * g + 3, 3 * g + 3),
        power(_one_minus(1, 1, cap), 3) * _one_minus(2, 2, cap) * _one_minus(6, 6, cap),
    )
    outer = _one_minus(1, 1, cap) * _one_minus(6, 6, cap)
    two_one = div_exact(jac * (f20.shift(2 * g + 2, 2 * g + 2) + f21.shift(2 * g - 1, 2 * g - 1)), outer)
    one_two = div_exact(jac * (f20.shift(2 * g, 2 * g) + f21.shift(2 * g + 3, 2 * g + 3)), outer)
    return triple, two_one, one_two


# -- univariate Betti recursion --------------------------------------------


def _inverse_one_minus(k: int, cap: int) -> UniPoly:
    """``1 / (1 - t^k)`` up to ``t^cap``."""
    return UniPoly({k * i: 1 for i in range(cap // k + 1)}, cap)


def ab_ambient(n: int, g: int, cap: int) -> UniPoly:
    """``prod_{l=1..n} (1 + t^(2l-1))^(2g) / ((1 - t^(2n)) prod_{l=1..n-1} (1 - t^(2l))^2)``."""
    out = UniPoly({0: 1}, cap)
    for l in range(1, n + 1):
        out = out * UniPoly({0: 1, 2 * l - 1: 1}, cap) ** (2 * g)
    out = out * _inverse_one_minus(2 * n, cap)
    for l in range(1, n):
        inv = _inverse_one_minus(2 * l, cap)
        out = out * inv * inv
    return out


@lru_cache(maxsize=None)
def _ab_cached(n: int, r: int, g: int, cap: int) -> UniPoly:
    out = ab_ambient(n, g, cap)
    for mu in hntypes.enumerate_types(n, r, g, cap // 2):
        c = hntypes.codimension(mu, g)
        term = UniPoly({0: 1}, cap)
        for nj, dj in mu.parts:
            term = term * ab_betti_semistable(nj, dj, g, cap)
        out = out - term.shift(2 * c).truncate(cap)
    return out


def ab_betti_semistable(n: int, d: int, g: int, cap: int) -> UniPoly:
    """Equivariant Poincare series of the semistable stratum, up to ``t^cap``."""
    if n < 1:
        raise DomainError(f"rank must be at least 1, got {n}")
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")
    return _ab_cached(n, d % n, g, cap)


def ab_poincare_full(n: int, d: int, g: int) -> UniPoly:
    """Poincare polynomial of the full moduli space: ``(1 - t^2)`` times the semistable series."""
    top = 2 * (n * n * (g - 1) + 1)
    cap = top + 2
    series = ab_betti_semistable(n, d, g, cap)
    poly = series - series.shift(2).truncate(cap)
    if poly.degree() > top:
        raise ConsistencyError("Betti recursion polynomiality", f"degree {poly.degree()} exceeds {top}")
    return poly.exact()


def ab_poincare_fixed(n: int, d: int, g: int) -> UniPoly:
    """Poincare polynomial of the fixed-determinant space: the full one divided by ``(1+t)^(2g)``."""
    q = ab_poincare_full(n, d, g)
    for _ in range(2 * g):
        q = _divide_by_one_plus_t(q)
    return q


def _divide_by_one_plus_t(p: UniPoly) -> UniPoly:
    coeffs = p.to_list()
    out = []
    carry = 0
    for c in coeffs[:-1]:
        carry = c - carry
        out.append(carry)
    if coeffs and coeffs[-1] != carry:
        raise ConsistencyError("Betti recursion Jacobian factor", "(1+t) does not divide the Poincare polynomial")
    return UniPoly(out)


def chi_closed_form(n: int, g: int) -> UniPoly:
    """``(prod_{r=1..n-1} (1 - (-t)^r)(1 - (-t)^(r+1)))^(g-1)``."""
    if n < 1:
        raise DomainError(f"rank must be at least 1, got {n}")
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")
    base = UniPoly({0: 1})
    for r in range(1, n):
        base = base * UniPoly({0: 1, r: -((-1) ** r)}) * UniPoly({0: 1, r + 1: -((-1) ** (r + 1))})
    return base ** (g - 1)


def first_difference(a: BiSeries, b: BiSeries):
    """First ``(p, q, a_pq, b_pq)`` in graded order where the polynomials differ, else ``None``."""
    ta, tb = a.terms, b.terms
    keys = sorted(set(ta) | set(tb), key=lambda k: (k[0] + k[1], k[0]))
    for k in keys:
        if ta.get(k, 0) != tb.get(k, 0):
            return (k[0], k[1], ta.get(k, 0), tb.get(k, 0))
    return None
