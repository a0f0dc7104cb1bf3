"""Exact scalars: rationals (``fractions.Fraction``) and elements a + b√k of Q(√k)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional, Sequence, Union

from .errors import ScalarError

Scalar = Union[Fraction, "QuadExt"]
RawScalar = Union[int, str, Fraction, Sequence[str], Sequence[int]]


def normalize_rational(num: int, den: int) -> Fraction:
    """Canonical p/q with q > 0 and gcd(|p|, q) = 1."""
    if den == 0:
        raise ScalarError(f"zero denominator in {num}/{den}")
    return Fraction(num, den)


def is_squarefree(k: int) -> bool:
    if k < 2:
        return False
    n = k
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def _as_fraction(x: Union[int, Fraction]) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@total_ordering
class QuadExt:
    """An element a + b√k of the real quadratic field Q(√k).

    Arithmetic results with a vanishing √k part are returned as plain ``Fraction``
    values, so a ``QuadExt`` produced by arithmetic is always irrational.
    """

    __slots__ = ("_a", "_b", "_k")

    def __init__(self, a: Union[int, Fraction], b: Union[int, Fraction], k: int) -> None:
        if not is_squarefree(k):
            raise ScalarError(f"k={k} must be a squarefree integer >= 2")
        self._a = _as_fraction(a)
        self._b = _as_fraction(b)
        self._k = k

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def k(self) -> int:
        return self._k

    def __repr__(self) -> str:
        return f"QuadExt({self._a}, {self._b}, k={self._k})"

    def __str__(self) -> str:
        sign_char = "-" if self._b < 0 else "+"
        return f"{self._a}{sign_char}{abs(self._b)}√{self._k}"

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, k: int) -> Scalar:
        if b == 0:
            return a
        obj = cls.__new__(cls)
        obj._a, obj._b, obj._k = a, b, k
        return obj

    def _coerce(self, other: object) -> Optional[tuple[Fraction, Fraction]]:
        if isinstance(other, QuadExt):
            if other.k != self._k:
                raise ScalarError(f"cannot mix Q(√{self._k}) and Q(√{other.k})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return _as_fraction(other), Fraction(0)
        return None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadExt) and other.k != self._k:
            return False
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return self._a == pair[0] and self._b == pair[1]

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._k))

    def __lt__(self, other: object) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return _sign_parts(self._a - pair[0], self._b - pair[1], self._k) < 0

    def __add__(self, other: object) -> Scalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return QuadExt._make(self._a + pair[0], self._b + pair[1], self._k)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return QuadExt._make(-self._a, -self._b, self._k)

    def __pos__(self) -> QuadExt:
        return self

    def __abs__(self) -> Scalar:
        return -self if quad_sign(self) < 0 else self

    def __sub__(self, other: object) -> Scalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return QuadExt._make(self._a - pair[0], self._b - pair[1], self._k)

    def __rsub__(self, other: object) -> Scalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return QuadExt._make(pair[0] - self._a, pair[1] - self._b, self._k)

    def __mul__(self, other: object) -> Scalar:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        c, d = pair
        return QuadExt._make(self._a * c + self._b * d * self._k, self._a * d + self._b * c, self._k)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self._a * self._a - self._b * self._b * self._k

    def inverse(self) -> Scalar:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(√k)")
        return QuadExt._make(self._a / n, -self._b / n, self._k)

    def __truediv__(self, other: object) -> Scalar:
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadExt._make(self._a / other, self._b / other, self._k)
        return NotImplemented

    def __rtruediv__(self, other: object) -> Scalar:
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(self._k)


def _sign_parts(a: Fraction, b: Fraction, k: int) -> int:
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger of a² and b²k wins
    lhs = a * a
    rhs = b * b * k
    return sa if lhs > rhs else sb


def quad_sign(x: Union[QuadExt, Fraction, int]) -> int:
    """Exact sign of a + b√k, by case analysis on the signs of a and b."""
    if isinstance(x, QuadExt):
        return _sign_parts(x.a, x.b, x.k)
    return (x > 0) - (x < 0)


def quad_is_rational(x: Union[QuadExt, Fraction, int]) -> Optional[Fraction]:
    if isinstance(x, QuadExt):
        return x.a if x.b == 0 else None
    return _as_fraction(x)


def as_scalar(x: Union[int, Fraction, QuadExt]) -> Scalar:
    if isinstance(x, QuadExt):
        return quad_is_rational(x) if x.b == 0 else x
    return _as_fraction(x)


def floor_scalar(x: Union[Scalar, int]) -> int:
    if not isinstance(x, QuadExt):
        return math.floor(x)
    p, q = x.b.numerator, x.b.denominator
    root = math.isqrt((p * p * x.k) // (q * q))
    # b√k is irrational, so it sits strictly between two integers
    s_floor = root if p > 0 else -root - 1
    n = math.floor(x.a) + s_floor
    while quad_sign(x - (n + 1)) >= 0:
        n += 1
    while quad_sign(x - n) < 0:
        n -= 1
    return n


def ceil_scalar(x: Union[Scalar, int]) -> int:
    return -floor_scalar(-x)


def field_of(values: Iterable[object]) -> Optional[int]:
    """The k shared by every QuadExt among values, or None when all are rational."""
    k: Optional[int] = None
    for v in values:
        if isinstance(v, QuadExt):
            if k is None:
                k = v.k
            elif k != v.k:
                raise ScalarError(f"values live in different fields Q(√{k}) and Q(√{v.k})")
    return k


def parse_scalar(raw: RawScalar, k: Optional[int] = None) -> Scalar:
    """Parse "p/q", an int, or a pair ["p/q", "r/s"] meaning p/q + (r/s)√k."""
    if isinstance(raw, (Fraction, QuadExt)):
        return as_scalar(raw)
    if isinstance(raw, bool):
        raise ScalarError(f"not a scalar: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ScalarError(f"cannot parse rational {raw!r}: {e}") from e
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        a = parse_scalar(raw[0])
        b = parse_scalar(raw[1])
        if b == 0:
            return a
        if k is None:
            raise ScalarError(f"scalar {list(raw)!r} uses √k but no k was declared")
        return QuadExt._make(a, b, k) if is_squarefree(k) else QuadExt(a, b, k)
    raise ScalarError(f"not a scalar: {raw!r}")


def format_scalar(x: Union[Scalar, int]) -> Union[str, list[str]]:
    if isinstance(x, QuadExt):
        if x.b == 0:
            return format_scalar(x.a)
        return [format_scalar(x.a), format_scalar(x.b)]  # type: ignore[list-item]
    f = _as_fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
