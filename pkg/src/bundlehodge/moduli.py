"""Hodge-Poincare polynomials of moduli spaces of stable bundles on a curve.

``F(n, d, g)`` is the equivariant Hodge-Poincare series of the semistable
stratum, defined by subtracting from the ambient series the contribution of
every unstable Harder-Narasimhan stratum.  From it:

* ``hp_full``      -- ``(1 - xy) F`` for the moduli space of rank ``n``, degree ``d`` bundles;
* ``hp_fixed_det`` -- the same divided by the Jacobian factor ``(1+x)^g (1+y)^g``;
* ``chi_characteristic`` -- the fixed-determinant polynomial at ``y = -1``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import hntypes
from .errors import ConsistencyError, CoprimalityError, DomainError, InvalidInputError
from .memo import MemoKey, MemoStore, default_store
from .series import (
    BiSeries,
    UniPoly,
    div_exact,
    geom,
    is_polynomial_below,
    power,
    specialize_diag,
    specialize_y_minus1,
)

FULL = "full"
FIXED = "fixed_determinant"
VARIANTS = (FULL, FIXED)


def _check_rank_genus(n, g):
    if n < 1:
        raise DomainError(f"rank must be at least 1, got {n}")
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")


def _check_coprime(n, d):
    if math.gcd(n, d) != 1:
        raise CoprimalityError(
            f"rank {n} and degree {d} are not coprime (gcd {math.gcd(n, d)})"
        )


def dim_full(n: int, g: int) -> int:
    return n * n * (g - 1) + 1


def dim_fixed(n: int, g: int) -> int:
    return (n * n - 1) * (g - 1)


def default_cap(n: int, g: int) -> int:
    """Total-degree cap for ``F``: twice the dimension of the full space, plus a margin of 2."""
    return 2 * dim_full(n, g) + 2


def jacobian_hp(g: int, cap: int) -> BiSeries:
    """``(1+x)^g (1+y)^g``."""
    return power(BiSeries({(0, 0): 1, (1, 0): 1}, cap), g) * power(
        BiSeries({(0, 0): 1, (0, 1): 1}, cap), g
    )


def ambient_hp(n: int, g: int, cap: int) -> BiSeries:
    """Equivariant Hodge-Poincare series of the space of all holomorphic structures.

    ``prod_{l=1..n} (1 + x^l y^(l-1))^g (1 + x^(l-1) y^l)^g`` divided by
    ``(1 - x^n y^n) prod_{l=1..n-1} (1 - x^l y^l)^2``.
    """
    _check_rank_genus(n, g)
    out = BiSeries.one(cap)
    for l in range(1, n + 1):
        out = out * power(BiSeries({(0, 0): 1, (l, l - 1): 1}, cap), g)
        out = out * power(BiSeries({(0, 0): 1, (l - 1, l): 1}, cap), g)
    out = out * geom(n, n, cap)
    for l in range(1, n):
        g_l = geom(l, l, cap)
        out = out * g_l * g_l
    return out


def F(
    n: int,
    d: int,
    g: int,
    cap: int,
    *,
    store: Optional[MemoStore] = None,
    strategy: str = "grouped",
    reduce_degree: bool = True,
) -> BiSeries:
    """Equivariant Hodge-Poincare series of the semistable stratum, truncated at ``cap``.

    Only types with ``2 * codimension <= cap`` can contribute, so the sum over
    types is finite.  Coprimality is not needed here.

    The memo does not record the strategy; compare strategies with separate stores.

    ``strategy="direct"`` sums type by type at the full cap.  The default
    ``"grouped"`` strategy collects types whose factors agree (factors depend only
    on ``d_j mod n_j``), multiplies each distinct product once at the reduced
    cap ``cap - 2 * min codimension``, and weights it by ``sum (xy)^codim``.

    With ``reduce_degree=False`` the memo is keyed on the actual degree
    throughout the recursion, so ``F(n, d)`` and ``F(n, d + n)`` are computed
    independently; use it to check the degree-shift invariance.
    """
    _check_rank_genus(n, g)
    if cap < 0:
        raise InvalidInputError(f"cap must be nonnegative, got {cap}")
    if strategy not in ("grouped", "direct"):
        raise ValueError(f"unknown strategy {strategy!r}")
    store = default_store if store is None else store
    key = MemoKey.for_query(n, d, g, cap, reduce_degree)
    return store.get_or_compute(
        key, lambda: _compute_F(n, key.d_residue, g, cap, store, strategy, reduce_degree)
    )


def _compute_F(n, d, g, cap, store, strategy, reduce_degree):
    ambient = ambient_hp(n, g, cap)
    types = hntypes.enumerate_types(n, d, g, cap // 2)
    if not types:
        return ambient
    sub = dict(store=store, strategy=strategy, reduce_degree=reduce_degree)
    correction = BiSeries.zero(cap)
    if strategy == "direct":
        for mu in types:
            c = hntypes.codimension(mu, g)
            prod = BiSeries.one(cap)
            for r, dj in mu.parts:
                prod = prod * F(r, dj, g, cap, **sub)
            correction = correction + prod.shift(c, c)
        return ambient - correction

    groups = defaultdict(list)
    for mu in types:
        if reduce_degree:
            factor_key = tuple(sorted((r, dj % r) for r, dj in mu.parts))
        else:
            factor_key = mu.parts
        groups[factor_key].append(hntypes.codimension(mu, g))
    for factor_key in sorted(groups):
        codims = groups[factor_key]
        low = min(codims)
        sub_cap = cap - 2 * low
        prod = BiSeries.one(sub_cap)
        for r, dj in factor_key:
            prod = prod * F(r, dj, g, cap, **sub).truncate(sub_cap)
        weight_terms = defaultdict(int)
        for c in codims:
            weight_terms[(c - low, c - low)] += 1
        weight = BiSeries(weight_terms, sub_cap)
        correction = correction + (prod * weight).shift(low, low, cap)
    return ambient - correction


def hp_full(
    n: int,
    d: int,
    g: int,
    *,
    cap: Optional[int] = None,
    store: Optional[MemoStore] = None,
    strategy: str = "grouped",
) -> BiSeries:
    """Hodge-Poincare polynomial of the moduli space of stable bundles of rank ``n``, degree ``d``.

    Returned as a :class:`BiSeries` with cap ``2 * dim``, i.e. an exact polynomial.
    """
    _check_rank_genus(n, g)
    _check_coprime(n, d)
    top = 2 * dim_full(n, g)
    cap = default_cap(n, g) if cap is None else cap
    if cap < top + 2:
        raise InvalidInputError(f"cap {cap} is below the minimum {top + 2} for n={n}, g={g}")
    series = F(n, d, g, cap, store=store, strategy=strategy)
    hp = series - series.shift(1, 1)
    if not is_polynomial_below(hp, top):
        stray = max(hp.sorted_terms(), key=lambda t: t[0] + t[1])
        raise ConsistencyError(
            "polynomial cutoff",
            f"(1 - xy) F has a term x^{stray[0]} y^{stray[1]} above total degree {top}",
        )
    return hp.truncate(top)


def hp_fixed_det(
    n: int,
    d: int,
    g: int,
    *,
    cap: Optional[int] = None,
    store: Optional[MemoStore] = None,
    strategy: str = "grouped",
) -> BiSeries:
    """Hodge-Poincare polynomial of the fixed-determinant moduli space."""
    full = hp_full(n, d, g, cap=cap, store=store, strategy=strategy)
    N = dim_fixed(n, g)
    q = div_exact(full, jacobian_hp(g, full.cap))
    if not is_polynomial_below(q, 2 * N):
        raise ConsistencyError(
            "Jacobian factor division",
            f"quotient by (1+x)^{g}(1+y)^{g} is not a polynomial of degree {2 * N}",
        )
    q = q.truncate(2 * N)
    if q.coefficient(N, N) != 1:
        raise ConsistencyError(
            "top Hodge number", f"h^{{{N},{N}}} = {q.coefficient(N, N)}, expected 1"
        )
    return q


def hodge_polynomial(n, d, g, variant=FIXED, **kwargs) -> BiSeries:
    if variant == FULL:
        return hp_full(n, d, g, **kwargs)
    if variant == FIXED:
        return hp_fixed_det(n, d, g, **kwargs)
    raise InvalidInputError(f"unknown variant {variant!r}")


def chi_characteristic(n: int, d: int, g: int, variant: str = FIXED, **kwargs) -> UniPoly:
    """The polynomial ``HP(t, -1)`` of the chosen moduli space."""
    return specialize_y_minus1(hodge_polynomial(n, d, g, variant, **kwargs))


def euler_and_signature(n: int, d: int, g: int, **kwargs) -> Tuple[int, int]:
    """Euler characteristic and signature of the fixed-determinant space, ``chi(-1)`` and ``chi(1)``.

    For ``n >= 2`` both vanish and anything else is reported as a consistency
    failure.  For ``n = 1`` the space is a point and both are 1.
    """
    chi = chi_characteristic(n, d, g, FIXED, **kwargs)
    euler, signature = chi(-1), chi(1)
    if n >= 2 and (euler, signature) != (0, 0):
        raise ConsistencyError(
            "vanishing Euler characteristic and signature",
            f"got euler={euler}, signature={signature}",
        )
    return euler, signature


@dataclass
class HodgeReport:
    n: int
    d: int
    g: int
    variant: str
    dim_complex: int
    hodge_terms: List[Tuple[int, int, int]]
    betti: List[int]
    chi: UniPoly
    euler: int
    signature: int
    cap_used: int = 0

    def polynomial(self) -> BiSeries:
        return BiSeries({(p, q): h for p, q, h in self.hodge_terms}, 2 * self.dim_complex)

    def hodge_number(self, p: int, q: int) -> int:
        for pp, qq, h in self.hodge_terms:
            if (pp, qq) == (p, q):
                return h
        return 0


def check_hodge_polynomial(hp: BiSeries, dim: int, g: int, variant: str) -> None:
    """Raise :class:`ConsistencyError` unless ``hp`` looks like the Hodge polynomial of a
    smooth projective variety of dimension ``dim``."""
    terms = hp.terms
    for (p, q), h in terms.items():
        if h < 0:
            raise ConsistencyError("nonnegativity", f"h^{{{p},{q}}} = {h}")
        if p > dim or q > dim:
            raise ConsistencyError("dimension bound", f"term x^{p} y^{q} exceeds dimension {dim}")
        if terms.get((q, p), 0) != h:
            raise ConsistencyError(
                "Hodge symmetry", f"h^{{{p},{q}}} = {h} but h^{{{q},{p}}} = {terms.get((q, p), 0)}"
            )
        if terms.get((dim - p, dim - q), 0) != h:
            raise ConsistencyError(
                "Poincare duality",
                f"h^{{{p},{q}}} = {h} but h^{{{dim - p},{dim - q}}} = {terms.get((dim - p, dim - q), 0)}",
            )
    if terms.get((0, 0), 0) != 1:
        raise ConsistencyError("normalization", f"h^{{0,0}} = {terms.get((0, 0), 0)}")
    b1 = terms.get((1, 0), 0) + terms.get((0, 1), 0)
    expected = 2 * g if variant == FULL else 0
    if b1 != expected:
        raise ConsistencyError("first Betti number", f"b_1 = {b1}, expected {expected}")


def report(
    n: int,
    d: int,
    g: int,
    variant: str = FULL,
    *,
    cap: Optional[int] = None,
    store: Optional[MemoStore] = None,
) -> HodgeReport:
    """Hodge diamond, Betti numbers and ``chi(t)`` of one moduli space, with all self-checks applied."""
    if variant not in VARIANTS:
        raise InvalidInputError(f"unknown variant {variant!r}")
    _check_rank_genus(n, g)
    _check_coprime(n, d)
    cap_used = default_cap(n, g) if cap is None else cap
    hp = hodge_polynomial(n, d, g, variant, cap=cap_used, store=store)
    dim = dim_full(n, g) if variant == FULL else dim_fixed(n, g)
    check_hodge_polynomial(hp, dim, g, variant)

    diag = specialize_diag(hp)
    betti = [diag[k] for k in range(2 * dim + 1)]
    chi = specialize_y_minus1(hp)
    euler = sum((-1) ** k * b for k, b in enumerate(betti))
    if euler != chi(-1):
        raise ConsistencyError("Euler characteristic", f"sum (-1)^j b_j = {euler} but chi(-1) = {chi(-1)}")
    if variant == FULL and not chi.is_zero():
        raise ConsistencyError("vanishing chi of the full moduli space", f"chi = {chi}")
    if variant == FIXED and n >= 2 and (chi(-1), chi(1)) != (0, 0):
        raise ConsistencyError(
            "vanishing Euler characteristic and signature",
            f"chi(-1) = {chi(-1)}, chi(1) = {chi(1)}",
        )
    return HodgeReport(
        n=n,
        d=d,
        g=g,
        variant=variant,
        dim_complex=dim,
        hodge_terms=hp.sorted_terms(),
        betti=betti,
        chi=chi,
        euler=euler,
        signature=chi(1),
        cap_used=cap_used,
    )
