"""Exact integer, rational and Laurent-polynomial arithmetic in ``q``.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`;
both are already arbitrary precision and canonical.  The one value type
built here is :class:`LaurentPoly`, a dense integer-coefficient Laurent
polynomial stored as a lowest exponent plus a coefficient tuple.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

__all__ = [
    "LaurentPoly",
    "NotDivisible",
    "PoleAtZero",
    "ZERO",
    "ONE",
    "Q",
    "lp_add",
    "lp_sub",
    "lp_neg",
    "lp_mul",
    "lp_div_exact",
    "lp_reciprocal",
    "lp_eval",
    "lp_is_nonneg",
    "monomial",
    "one_minus_q_pow",
    "big_gcd",
    "to_rational",
]

# Operand length above which products go through Kronecker substitution.
_KRONECKER_MIN_LEN = 24


class NotDivisible(ArithmeticError):
    """Raised by exact division when the divisor leaves a nonzero remainder.

    ``remainder`` (a LaurentPoly, or an int for integer division) is kept so
    that verification code can report it as a counterexample witness.
    """

    def __init__(self, remainder, message: str = "") -> None:
        self.remainder = remainder
        super().__init__(message or f"nonzero remainder {remainder}")


class PoleAtZero(ZeroDivisionError):
    """Evaluation of a polynomial with negative exponents at ``q = 0``."""


def big_gcd(a: int, b: int) -> int:
    """Nonnegative gcd, with ``big_gcd(a, 0) == abs(a)``."""
    return gcd(a, b)


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _strip(min_exp: int, coeffs: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    lo = 0
    hi = len(coeffs)
    while lo < hi and coeffs[lo] == 0:
        lo += 1
    if lo == hi:
        return 0, ()
    while coeffs[hi - 1] == 0:
        hi -= 1
    return min_exp + lo, tuple(coeffs[lo:hi])


class LaurentPoly:
    """Immutable Laurent polynomial ``sum_i coeffs[i] * q**(min_exp + i)``.

    Instances are always canonical: the first and last stored coefficients
    are nonzero, and zero is ``min_exp == 0`` with no coefficients, so
    ``==`` and ``hash`` are structural.
    """

    __slots__ = ("min_exp", "coeffs")

    min_exp: int
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = (), min_exp: int = 0) -> None:
        e, c = _strip(int(min_exp), [int(x) for x in coeffs])
        object.__setattr__(self, "min_exp", e)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def _raw(cls, min_exp: int, coeffs: tuple[int, ...]) -> "LaurentPoly":
        # Caller guarantees canonical form.
        obj = object.__new__(cls)
        object.__setattr__(obj, "min_exp", min_exp)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def from_dict(cls, terms: Mapping[int, int]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        lo, hi = min(terms), max(terms)
        dense = [0] * (hi - lo + 1)
        for e, c in terms.items():
            dense[e - lo] = c
        return cls._raw(lo, tuple(dense))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "LaurentPoly":
        """Inverse of :meth:`to_pairs`; coefficients may be decimal strings."""
        acc: dict[int, int] = {}
        for e, c in pairs:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        return cls.from_dict(acc)

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls._raw(0, (int(c),)) if c else ZERO

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __reduce__(self):
        return (LaurentPoly, (self.coeffs, self.min_exp))

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def max_exp(self) -> int:
        """Highest exponent present; ``0`` for the zero polynomial."""
        return self.min_exp + len(self.coeffs) - 1 if self.coeffs else 0

    def is_polynomial(self) -> bool:
        return self.min_exp >= 0

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in ascending order."""
        e0 = self.min_exp
        return [(e0 + i, c) for i, c in enumerate(self.coeffs) if c]

    def coeff(self, e: int) -> int:
        i = e - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.min_exp == other.min_exp and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == LaurentPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.min_exp, self.coeffs))

    def __repr__(self) -> str:
        return f"LaurentPoly({list(self.coeffs)!r}, min_exp={self.min_exp})"

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self, var: str = "q") -> str:
        """Ascending-exponent rendering such as ``1 + q - 2*q^3``."""
        if not self.coeffs:
            return "0"
        out = []
        for e, c in self.terms():
            if e == 0:
                mono = str(abs(c))
            else:
                base = var if e == 1 else f"{var}^{e}"
                mono = base if abs(c) == 1 else f"{abs(c)}*{base}"
            if not out:
                out.append(mono if c > 0 else f"-{mono}")
            else:
                out.append(f"+ {mono}" if c > 0 else f"- {mono}")
        return " ".join(out)

    def to_pairs(self) -> list[list]:
        """JSON-friendly ``[[exponent, "coefficient"], ...]``."""
        return [[e, str(c)] for e, c in self.terms()]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.min_exp, tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other, -1)

    def __rsub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, self, -1)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return ZERO
        return LaurentPoly._raw(
            self.min_exp + other.min_exp, mul_coeffs(self.coeffs, other.coeffs)
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative power of a LaurentPoly")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: int) -> "LaurentPoly":
        if not c or not self.coeffs:
            return ZERO
        return LaurentPoly._raw(self.min_exp, tuple(c * x for x in self.coeffs))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        if not self.coeffs:
            return ZERO
        return LaurentPoly._raw(self.min_exp + k, self.coeffs)

    def __floordiv__(self, other) -> "LaurentPoly":
        return lp_div_exact(self, self._coerce(other))

    def divmod_exact(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        return _long_division(self, other)

    def eval(self, x) -> Fraction:
        return lp_eval(self, x)

    def reciprocal(self, n: int) -> "LaurentPoly":
        return lp_reciprocal(self, n)

    def is_nonneg(self) -> bool:
        return lp_is_nonneg(self)


def _add(a: LaurentPoly, b: LaurentPoly, sign: int) -> LaurentPoly:
    if not b.coeffs:
        return a
    if not a.coeffs:
        return b if sign == 1 else -b
    lo = min(a.min_exp, b.min_exp)
    hi = max(a.max_exp, b.max_exp)
    out = [0] * (hi - lo + 1)
    off = a.min_exp - lo
    for i, c in enumerate(a.coeffs):
        out[off + i] = c
    off = b.min_exp - lo
    if sign == 1:
        for i, c in enumerate(b.coeffs):
            out[off + i] += c
    else:
        for i, c in enumerate(b.coeffs):
            out[off + i] -= c
    e, c = _strip(lo, out)
    return LaurentPoly._raw(e, c)


# -- multiplication ------------------------------------------------------


def _schoolbook(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                out[i + j] += ai * bj
    return out


def _pack(coeffs: Sequence[int], width: int) -> int:
    """Signed coefficients -> integer value at ``2**(8*width)``."""
    zero = bytes(width)
    pos = b"".join(c.to_bytes(width, "little") if c > 0 else zero for c in coeffs)
    neg = b"".join((-c).to_bytes(width, "little") if c < 0 else zero for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, width: int, count: int) -> list[int]:
    # Bias every digit by 2**(8*width-1) so that all digits are nonnegative.
    chunk = bytes(width - 1) + b"\x80"
    bias = int.from_bytes(chunk * count, "little")
    raw = (value + bias).to_bytes(width * count, "little")
    half = 1 << (8 * width - 1)
    return [
        int.from_bytes(raw[i * width:(i + 1) * width], "little") - half
        for i in range(count)
    ]


def _kronecker(a: Sequence[int], b: Sequence[int]) -> list[int]:
    ma, mb = max(abs(x) for x in a), max(abs(x) for x in b)
    # the packed inputs must fit as well as the product coefficients
    bound = max(ma * mb * min(len(a), len(b)), ma, mb)
    width = (bound.bit_length() + 2 + 7) // 8
    prod = _pack(a, width) * _pack(b, width)
    return _unpack(prod, width, len(a) + len(b) - 1)


def mul_coeffs(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Convolution of two nonempty coefficient sequences with nonzero ends."""
    if min(len(a), len(b)) < _KRONECKER_MIN_LEN:
        return tuple(_schoolbook(a, b))
    return tuple(_kronecker(a, b))


# -- division ------------------------------------------------------------


def _long_division(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Division from the top degree over Z.

    Returns ``(quotient, remainder)`` with ``a = b*quotient + remainder``.
    When a leading coefficient is not divisible by ``lc(b)`` the division
    stops and the rest is returned as remainder; the result is then
    non-exact by construction.
    """
    if not b.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a.coeffs:
        return ZERO, ZERO
    bc = b.coeffs
    lb = len(bc)
    lc = bc[-1]
    rem = list(a.coeffs)
    nq = len(rem) - lb + 1
    if nq <= 0:
        return ZERO, a
    nz = [(j, c) for j, c in enumerate(bc[:-1]) if c]
    quot = [0] * nq
    unit = lc in (1, -1)
    for i in range(nq - 1, -1, -1):
        top = rem[i + lb - 1]
        if not top:
            continue
        if unit:
            c = top * lc
        else:
            c, r = divmod(top, lc)
            if r:
                break
        quot[i] = c
        rem[i + lb - 1] = 0
        for j, bj in nz:
            rem[i + j] -= c * bj
    q = LaurentPoly(quot, a.min_exp - b.min_exp)
    r = LaurentPoly(rem, a.min_exp)
    return q, r


def lp_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return ``c`` with ``a == b*c`` or raise :class:`NotDivisible`.

    The raised exception carries the remainder of the top-down division.
    """
    if not b.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a.coeffs:
        return ZERO
    if len(b.coeffs) == 1:
        c0 = b.coeffs[0]
        if all(x % c0 == 0 for x in a.coeffs):
            return LaurentPoly._raw(
                a.min_exp - b.min_exp, tuple(x // c0 for x in a.coeffs)
            )
        raise NotDivisible(a, f"{a} is not divisible by {b}")
    q, r = _long_division(a, b)
    if r.coeffs:
        raise NotDivisible(r, f"{a} is not divisible by {b}")
    return q


# -- functional API ------------------------------------------------------


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def lp_sub(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a - b


def lp_neg(a: LaurentPoly) -> LaurentPoly:
    return -a


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_reciprocal(p: LaurentPoly, n: int) -> LaurentPoly:
    """``q**n * p(1/q)``: exponent ``e`` goes to ``n - e``."""
    if not p.coeffs:
        return ZERO
    return LaurentPoly._raw(n - p.max_exp, p.coeffs[::-1])


def lp_eval(p: LaurentPoly, x) -> Fraction:
    """Exact value of ``p`` at the rational point ``x`` (Horner)."""
    x = to_rational(x)
    if not p.coeffs:
        return Fraction(0)
    if x == 0:
        if p.min_exp < 0:
            raise PoleAtZero(f"{p} has a pole at q=0")
        return Fraction(p.coeff(0))
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc * x ** p.min_exp


def lp_is_nonneg(p: LaurentPoly) -> bool:
    return all(c >= 0 for c in p.coeffs)


def monomial(e: int, c: int = 1) -> LaurentPoly:
    """``c * q**e``."""
    return LaurentPoly._raw(e, (c,)) if c else ZERO


def one_minus_q_pow(e: int) -> LaurentPoly:
    """``1 - q**e`` (zero when ``e == 0``)."""
    if e == 0:
        return ZERO
    if e > 0:
        return LaurentPoly._raw(0, (1,) + (0,) * (e - 1) + (-1,))
    return LaurentPoly._raw(e, (-1,) + (0,) * (-e - 1) + (1,))


ZERO = LaurentPoly._raw(0, ())
ONE = LaurentPoly._raw(0, (1,))
Q = LaurentPoly._raw(1, (1,))
