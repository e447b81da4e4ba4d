"""Harder-Narasimhan types of unstable bundles and their stratum codimensions.

A type is the sequence of (rank, degree) pairs of the semistable quotients of
the canonical filtration, ordered by strictly decreasing slope.  Slopes are
compared by integer cross-multiplication only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .errors import DomainError


@dataclass(frozen=True, order=True)
class HNType:
    """An unstable Harder-Narasimhan type: at least two parts, slopes strictly decreasing."""

    parts: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        parts = tuple((int(r), int(d)) for r, d in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) < 2:
            raise ValueError("an unstable type needs at least two parts")
        for r, _ in parts:
            if r < 1:
                raise ValueError(f"ranks must be positive, got {parts}")
        for (r1, d1), (r2, d2) in zip(parts, parts[1:]):
            if d1 * r2 <= d2 * r1:
                raise ValueError(f"slopes must strictly decrease: {parts}")

    @property
    def rank(self) -> int:
        return sum(r for r, _ in self.parts)

    @property
    def degree(self) -> int:
        return sum(d for _, d in self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(r for r, _ in self.parts)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(d for _, d in self.parts)

    def sort_key(self):
        return (self.length, self.ranks, self.degrees)

    def __str__(self) -> str:
        return "[" + ", ".join(f"({r},{d})" for r, d in self.parts) + "]"


def codimension(mu: HNType, g: int) -> int:
    """Complex codimension of the stratum of type ``mu`` on a genus ``g`` curve.

    Sum over pairs ``j < i`` (``j`` the higher slope) of
    ``n_i d_j - n_j d_i + n_i n_j (g - 1)``.
    """
    parts = mu.parts
    total = 0
    for i in range(len(parts)):
        ni, di = parts[i]
        for j in range(i):
            nj, dj = parts[j]
            total += ni * dj - nj * di + ni * nj * (g - 1)
    return total


def shift(mu: HNType, e: int) -> HNType:
    """Type obtained by tensoring with a line bundle of degree ``e``."""
    return HNType(tuple((r, d + e * r) for r, d in mu.parts))


def compositions(n: int, min_parts: int = 1):
    """All ordered tuples of positive integers summing to ``n``, in lexicographic order."""
    if n == 0:
        if min_parts <= 0:
            yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first, min_parts - 1):
            yield (first,) + rest


def _base_codimension(ranks, g):
    n = sum(ranks)
    pair_sum = (n * n - sum(r * r for r in ranks)) // 2
    return (g - 1) * pair_sum


def enumerate_types(n: int, d: int, g: int, dmax: int) -> List[HNType]:
    """Every unstable type of rank ``n``, degree ``d`` with codimension at most ``dmax``.

    Write ``m_k``, ``D_k`` for the rank and degree of the k-th filtration step.
    The codimension is ``(g-1) * sum_{j<i} n_i n_j`` plus the twice-area
    ``sum_i (m_i D_{i-1} - m_{i-1} D_i)`` enclosed by the Harder-Narasimhan
    polygon and its chord; every summand is a positive integer.  The polygon
    is concave, so it contains each triangle with vertices at the origin,
    ``(m_k, D_k)`` and ``(n, d)``, which gives ``1 <= n D_k - m_k d <= budget``
    and bounds every partial degree.
    """
    if n < 1:
        raise DomainError(f"rank must be positive, got {n}")
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")
    found: List[HNType] = []
    if n == 1 or dmax < 0:
        return found
    for ranks in compositions(n, min_parts=2):
        budget = dmax - _base_codimension(ranks, g)
        if budget < len(ranks) - 1:
            continue
        prefix = []
        m = 0
        for r in ranks:
            m += r
            prefix.append(m)
        _choose_partials(ranks, prefix, n, d, budget, [], 0, found)
    found.sort(key=HNType.sort_key)
    return found


def _choose_partials(ranks, prefix, n, d, budget, partials, area, found):
    k = len(partials)
    prev_m = prefix[k - 1] if k else 0
    prev_D = partials[-1] if k else 0
    if k == len(prefix) - 1:
        area += prefix[k] * prev_D - prev_m * d
        if area > budget:
            return
        degrees = []
        prev = 0
        for D in partials + [d]:
            degrees.append(D - prev)
            prev = D
        parts = tuple(zip(ranks, degrees))
        if all(d1 * r2 > d2 * r1 for (r1, d1), (r2, d2) in zip(parts, parts[1:])):
            found.append(HNType(parts))
        return
    m = prefix[k]
    lo = _ceil_div(m * d + 1, n)
    hi = (m * d + budget) // n
    for D in range(lo, hi + 1):
        step = m * prev_D - prev_m * D
        if k and step < 1:
            continue
        if area + step > budget:
            continue
        _choose_partials(ranks, prefix, n, d, budget, partials + [D], area + step, found)


def _ceil_div(a, b):
    return -((-a) // b)
