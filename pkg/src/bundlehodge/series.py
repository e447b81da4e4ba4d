"""Exact truncated power series over the integers.

:class:`BiSeries` is a power series in ``x`` and ``y`` truncated at a total
degree ``cap``; :class:`UniPoly` is a univariate polynomial in ``t``, optionally
truncated.  Coefficients are Python ints, so nothing ever overflows.

Large bivariate products are computed by Kronecker substitution: both factors
are packed into single big integers, multiplied once, and unpacked.  Small
products fall back to a plain double loop.  Both paths give identical results.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import CapMismatchError, NonUnitError, TruncationError

Exponent = Tuple[int, int]

# below this many coefficient pairs the schoolbook product is faster
_KRONECKER_THRESHOLD = 4096


class BiSeries:
    """Bivariate power series ``sum c[i, j] x^i y^j`` with ``i + j <= cap``.

    Instances are immutable and canonical: zero coefficients are never stored
    and terms above the cap are dropped on construction, so ``==`` is a plain
    structural comparison.
    """

    __slots__ = ("_cap", "_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, int]] = None, cap: int = 0):
        if cap < 0:
            raise ValueError(f"cap must be nonnegative, got {cap}")
        clean: Dict[Exponent, int] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent {(i, j)}")
                if c and i + j <= cap:
                    clean[(int(i), int(j))] = int(c)
        self._cap = cap
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, int], cap: int) -> "BiSeries":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj._cap = cap
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, cap: int) -> "BiSeries":
        return cls({}, cap)

    @classmethod
    def one(cls, cap: int) -> "BiSeries":
        return cls({(0, 0): 1}, cap)

    @classmethod
    def monomial(cls, i: int, j: int, cap: int, coeff: int = 1) -> "BiSeries":
        return cls({(i, j): coeff}, cap)

    # -- accessors ------------------------------------------------------

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def terms(self) -> Dict[Exponent, int]:
        """A copy of the term map."""
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, i: int, j: int) -> int:
        if i < 0 or j < 0:
            return 0
        if i + j > self._cap:
            raise TruncationError(
                f"coefficient of x^{i} y^{j} lies above cap {self._cap}"
            )
        return self._terms.get((i, j), 0)

    def total_degree(self) -> int:
        """Largest ``i + j`` among stored terms, or -1 for the zero series."""
        return max((i + j for i, j in self._terms), default=-1)

    def sorted_terms(self) -> list:
        """Terms as ``(i, j, c)`` in graded order: by ``i + j``, then ``i``."""
        return [(i, j, c) for (i, j), c in sorted(self._terms.items(), key=_graded_key)]

    # -- comparison -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, BiSeries):
            return self._cap == other._cap and self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({(0, 0): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._cap, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"BiSeries({format_bivariate(self)}, cap={self._cap})"

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "BiSeries":
        if isinstance(other, BiSeries):
            if other._cap != self._cap:
                raise CapMismatchError(f"caps differ: {self._cap} vs {other._cap}")
            return other
        if isinstance(other, int):
            return BiSeries({(0, 0): other}, self._cap)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return BiSeries._raw(out, self._cap)

    __radd__ = __add__

    def __neg__(self) -> "BiSeries":
        return BiSeries._raw({k: -c for k, c in self._terms.items()}, self._cap)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return BiSeries._raw({}, self._cap)
            return BiSeries._raw({k: c * other for k, c in self._terms.items()}, self._cap)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BiSeries._raw(_mul_terms(self._terms, other._terms, self._cap), self._cap)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BiSeries":
        return power(self, e)

    # -- structural helpers ---------------------------------------------

    def truncate(self, cap: int) -> "BiSeries":
        """Drop every term above total degree ``cap`` (``cap`` may not exceed the current one)."""
        if cap > self._cap:
            raise CapMismatchError(f"cannot raise cap from {self._cap} to {cap}")
        return BiSeries._raw(
            {k: c for k, c in self._terms.items() if k[0] + k[1] <= cap}, cap
        )

    def with_cap(self, cap: int) -> "BiSeries":
        """Reinterpret a *polynomial* at another cap.

        Raising the cap is only sound when the series is known to be an exact
        polynomial; callers are responsible for that.
        """
        return BiSeries(self._terms, cap)

    def shift(self, a: int, b: int, cap: Optional[int] = None) -> "BiSeries":
        """Multiply by ``x^a y^b``, landing at ``cap`` (default: unchanged)."""
        cap = self._cap if cap is None else cap
        return BiSeries._raw(
            {
                (i + a, j + b): c
                for (i, j), c in self._terms.items()
                if i + j + a + b <= cap
            },
            cap,
        )

    def swap(self) -> "BiSeries":
        """Exchange the roles of ``x`` and ``y``."""
        return BiSeries._raw({(j, i): c for (i, j), c in self._terms.items()}, self._cap)


def _graded_key(item):
    (i, j), _ = item
    return (i + j, i)


# -- multiplication -------------------------------------------------------


def _mul_schoolbook(a: Mapping[Exponent, int], b: Mapping[Exponent, int], cap: int):
    out: Dict[Exponent, int] = {}
    for (i1, j1), c1 in a.items():
        room = cap - i1 - j1
        for (i2, j2), c2 in b.items():
            if i2 + j2 <= room:
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _pack(terms: Mapping[Exponent, int], stride: int, width: int, slots: int) -> int:
    pos = bytearray(width * slots)
    neg = None
    for (i, j), c in terms.items():
        off = (i * stride + j) * width
        if c > 0:
            pos[off:off + width] = c.to_bytes(width, "little")
        else:
            if neg is None:
                neg = bytearray(width * slots)
            neg[off:off + width] = (-c).to_bytes(width, "little")
    value = int.from_bytes(pos, "little")
    if neg is not None:
        value -= int.from_bytes(neg, "little")
    return value


def _mul_kronecker(a: Mapping[Exponent, int], b: Mapping[Exponent, int], cap: int):
    # slot (i, j) -> i * stride + j; stride > 2*cap so y-exponents never spill into x
    stride = 2 * cap + 1
    slots = (cap + 1) * stride
    bound = max(map(abs, a.values())) * max(map(abs, b.values())) * min(len(a), len(b))
    width = (bound.bit_length() + 1) // 8 + 1  # signed digits need |d| < 2**(8*width-1)
    bits = 8 * width
    product = _pack(a, stride, width, slots) * _pack(b, stride, width, slots)

    mask = (1 << (bits * slots)) - 1
    bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * slots, "little")
    half = 1 << (bits - 1)
    raw = (((product & mask) + bias) & mask).to_bytes(width * slots, "little")

    out: Dict[Exponent, int] = {}
    for i in range(cap + 1):
        base = i * stride
        for j in range(cap - i + 1):
            off = (base + j) * width
            chunk = raw[off:off + width]
            c = int.from_bytes(chunk, "little") - half
            if c:
                out[(i, j)] = c
    return out


def _mul_terms(a, b, cap):
    if not a or not b:
        return {}
    if len(a) * len(b) <= _KRONECKER_THRESHOLD or len(a) == 1 or len(b) == 1:
        return _mul_schoolbook(a, b, cap)
    return _mul_kronecker(a, b, cap)


# -- module-level operations ---------------------------------------------


def add(a: BiSeries, b: BiSeries) -> BiSeries:
    return a + b


def mul(a: BiSeries, b: BiSeries) -> BiSeries:
    return a * b


def coefficient(s: BiSeries, i: int, j: int) -> int:
    return s.coefficient(i, j)


def geom(a: int, b: int, cap: int) -> BiSeries:
    """Expansion of ``1 / (1 - x^a y^b)`` up to total degree ``cap``."""
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError(f"geom needs a, b >= 0 with a + b >= 1, got {(a, b)}")
    step = a + b
    return BiSeries._raw({(a * k, b * k): 1 for k in range(cap // step + 1)}, cap)


def power(s: BiSeries, e: int) -> BiSeries:
    """``s ** e`` by repeated squaring; ``power(s, 0)`` is 1."""
    if e < 0:
        raise ValueError("negative exponents are not supported; use div_exact")
    result = BiSeries.one(s.cap)
    base = s
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


pow = power  # noqa: A001 - mirrors the operation name used throughout the docs


def div_exact(num: BiSeries, den: BiSeries) -> BiSeries:
    """Quotient ``q`` with ``den * q == num`` up to the cap.

    Coefficients are recovered one by one in graded order, so the cost is
    ``len(q) * len(den)``; cheap for the sparse denominators used here.
    The constant term of ``den`` must be a unit.
    """
    if num.cap != den.cap:
        raise CapMismatchError(f"caps differ: {num.cap} vs {den.cap}")
    cap = num.cap
    lead = den._terms.get((0, 0), 0)
    if lead not in (1, -1):
        raise NonUnitError(f"denominator constant term is {lead}, not a unit")
    rest = [((i, j), c) for (i, j), c in den._terms.items() if (i, j) != (0, 0)]
    numt = num._terms
    q: Dict[Exponent, int] = {}
    for total in range(cap + 1):
        for i in range(total + 1):
            j = total - i
            acc = numt.get((i, j), 0)
            for (a, b), c in rest:
                if a <= i and b <= j:
                    v = q.get((i - a, j - b))
                    if v:
                        acc -= c * v
            if acc:
                q[(i, j)] = acc * lead  # lead is its own inverse
    return BiSeries._raw(q, cap)


def is_polynomial_below(s: BiSeries, deg: int) -> bool:
    """True iff every stored term of ``s`` has total degree at most ``deg``."""
    if deg > s.cap:
        raise TruncationError(f"degree bound {deg} exceeds cap {s.cap}")
    return all(i + j <= deg for i, j in s._terms)


def from_factors(factors: Iterable[Tuple[Mapping[Exponent, int], int]], cap: int) -> BiSeries:
    """Product of ``poly ** exponent`` over ``factors``."""
    out = BiSeries.one(cap)
    for poly, e in factors:
        out = out * power(BiSeries(poly, cap), e)
    return out


def specialize_diag(s: BiSeries) -> "UniPoly":
    """Substitute ``x = y = t``."""
    out: Dict[int, int] = {}
    for (i, j), c in s._terms.items():
        out[i + j] = out.get(i + j, 0) + c
    return UniPoly(out, cap=s.cap)


def specialize_y_minus1(s: BiSeries) -> "UniPoly":
    """Substitute ``x = t, y = -1``.

    Only meaningful when ``s`` is a polynomial; the result is then exact.
    """
    out: Dict[int, int] = {}
    for (i, j), c in s._terms.items():
        out[i] = out.get(i, 0) + (-c if j & 1 else c)
    return UniPoly(out)


def format_bivariate(s: BiSeries) -> str:
    if not s:
        return "0"
    parts = []
    for i, j, c in s.sorted_terms():
        mono = "*".join(
            p for p in (_var("x", i), _var("y", j)) if p
        )
        parts.append(_signed_term(c, mono))
    return _join_terms(parts)


def _var(name, e):
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


def _signed_term(c, mono):
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def _join_terms(parts):
    text = parts[0]
    for p in parts[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


class UniPoly:
    """Univariate integer polynomial in ``t``.

    ``cap=None`` means the polynomial is exact; otherwise it is a power series
    known only up to ``t^cap`` and products are truncated there.
    """

    __slots__ = ("_coeffs", "_cap")

    def __init__(self, coeffs=None, cap: Optional[int] = None):
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        self._cap = cap
        self._coeffs = {
            int(k): int(v)
            for k, v in coeffs.items()
            if v and (cap is None or k <= cap)
        }
        if any(k < 0 for k in self._coeffs):
            raise ValueError("negative exponent in UniPoly")

    @property
    def cap(self) -> Optional[int]:
        return self._cap

    @property
    def coeffs(self) -> Dict[int, int]:
        return dict(self._coeffs)

    def degree(self) -> int:
        return max(self._coeffs, default=-1)

    def __getitem__(self, k: int) -> int:
        if self._cap is not None and k > self._cap:
            raise TruncationError(f"coefficient of t^{k} lies above cap {self._cap}")
        return self._coeffs.get(k, 0)

    def to_list(self) -> list:
        """Dense coefficient list, index = power of ``t``; ``[]`` for zero."""
        d = self.degree()
        return [self._coeffs.get(k, 0) for k in range(d + 1)]

    def is_zero(self) -> bool:
        return not self._coeffs

    def exact(self) -> "UniPoly":
        """Drop the cap marker, asserting nothing; use once exactness is known."""
        return UniPoly(self._coeffs)

    def truncate(self, cap: int) -> "UniPoly":
        return UniPoly(self._coeffs, cap)

    def _join_cap(self, other: "UniPoly") -> Optional[int]:
        if self._cap is None:
            return other._cap
        if other._cap is None:
            return self._cap
        return min(self._cap, other._cap)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = UniPoly({0: other})
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return UniPoly(out, self._join_cap(other))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly({k: -v for k, v in self._coeffs.items()}, self._cap)

    def __sub__(self, other):
        if isinstance(other, int):
            other = UniPoly({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPoly({k: v * other for k, v in self._coeffs.items()}, self._cap)
        cap = self._join_cap(other)
        out: Dict[int, int] = {}
        for k1, v1 in self._coeffs.items():
            for k2, v2 in other._coeffs.items():
                k = k1 + k2
                if cap is None or k <= cap:
                    out[k] = out.get(k, 0) + v1 * v2
        return UniPoly(out, cap)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        if e < 0:
            raise ValueError("negative exponent")
        out = UniPoly({0: 1}, self._cap)
        for _ in range(e):
            out = out * self
        return out

    def shift(self, k: int) -> "UniPoly":
        """Multiply by ``t^k``."""
        return UniPoly({e + k: v for e, v in self._coeffs.items()}, self._cap)

    def __call__(self, t: int) -> int:
        return sum(v * t**k for k, v in self._coeffs.items())

    def __repr__(self) -> str:
        return f"UniPoly({format_univariate(self)}{'' if self._cap is None else f', cap={self._cap}'})"


def format_univariate(p: UniPoly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = [_signed_term(v, _var(var, k)) for k, v in sorted(p.coeffs.items())]
    return _join_terms(parts)
