"""q-analogue of Schmidt's problem: kernels t_{n,j}^{(r)}(q) and c_n^{(r)}(q).

``c_n^{(r)}`` is computed two independent ways: by forward substitution
in the defining triangular relation, and through the q-Legendre inverse
as ``q^{(r-1)C(n,2)} sum_j [2j, j]^r t_{n,j}^{(r)} / [2n, n]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .checks import CheckResult, counterexample, expect_equal, verified
from .exact import ONE, ZERO, LaurentPoly, NotDivisible, lp_div_exact, one_minus_q_pow
from .qcore import inv_qfac_is_zero, qbinom, qfac

__all__ = [
    "TCParams",
    "t_direct",
    "t_closed",
    "t_multisum",
    "zud_quantity",
    "legendre_forward",
    "legendre_inverse",
    "c_triangular",
    "c_via_t",
    "c2_closed",
    "check_zud",
    "check_c_routes",
    "check_t_closed",
    "check_t_multisum",
    "check_legendre",
    "random_sequence",
]


class ImplementationBug(AssertionError):
    """A division that is exact by construction turned out not to be."""


@dataclass(frozen=True)
class TCParams:
    n: int
    j: int
    r: int

    def __post_init__(self) -> None:
        if not 0 <= self.j <= self.n:
            raise ValueError(f"need 0 <= j <= n, got j={self.j}, n={self.n}")
        if self.r < 1:
            raise ValueError("need r >= 1")


def _c2(k: int) -> int:
    return k * (k - 1) // 2


def _legendre_weight(n: int, k: int) -> LaurentPoly:
    """``(1 - q^{2k+1}) [2n, n-k] / (1 - q^{n+k+1})`` as an exact polynomial."""
    num = one_minus_q_pow(2 * k + 1) * qbinom(2 * n, n - k)
    try:
        return lp_div_exact(num, one_minus_q_pow(n + k + 1))
    except NotDivisible as exc:
        raise ImplementationBug(f"Legendre weight ({n}, {k}) not polynomial") from exc


_legendre_weight = lru_cache(maxsize=None)(_legendre_weight)


def t_direct(p: TCParams | tuple) -> LaurentPoly:
    """``t_{n,j}^{(r)}`` from its defining alternating sum (Laurent in q)."""
    p = p if isinstance(p, TCParams) else TCParams(*p)
    n, j, r = p.n, p.j, p.r
    total = ZERO
    for k in range(j, n + 1):
        term = _legendre_weight(n, k) * qbinom(k + j, k - j) ** r
        term = term.shift(_c2(k) - r * j * k)
        total = total - term if (n - k) & 1 else total + term
    return total.shift(r * _c2(j + 1))


def _qfac_ratio(num: Sequence[int], den: Sequence[int]) -> LaurentPoly:
    """``prod (q)_a / prod (q)_b``, zero if some ``b < 0``; exact division."""
    if any(inv_qfac_is_zero(b) for b in den):
        return ZERO
    top = ONE
    for a in num:
        top = top * qfac(a)
    bottom = ONE
    for b in den:
        bottom = bottom * qfac(b)
    return lp_div_exact(top, bottom)


def t_closed(p: TCParams | tuple) -> LaurentPoly:
    """Closed product forms for ``r = 2`` and ``r = 3``."""
    p = p if isinstance(p, TCParams) else TCParams(*p)
    n, j, r = p.n, p.j, p.r
    if r == 2:
        val = _qfac_ratio([2 * n, j, j], [n, 2 * j, 2 * j - n, n - j, n - j])
        return val.shift(2 * _c2(n - j) - _c2(n))
    if r == 3:
        val = _qfac_ratio([2 * n], [3 * j - n, n - j, n - j, n - j])
        return val.shift(3 * _c2(n - j) - 2 * _c2(n))
    raise ValueError("t_closed needs r in {2, 3}")


def t_multisum(p: TCParams | tuple) -> LaurentPoly:
    """Nested ``(s-1)``-fold sum for ``r = 2s`` or ``r = 2s + 1`` (``r >= 4``).

    Innermost factor ``[2j, n - L - j] q^{C(L,2)}`` with ``L = l_1 + ...``;
    level ``i`` contributes ``[2j, l_i] [n-Λ_i+j, n-Λ_i-j]^2
    q^{C(l_i,2) + 2j(s-i) l_i + (j+1-n) l_i}``, except that in the even case
    level 1 uses ``[j, l_1] [n-l_1, j] [n-l_1+j, n-l_1-j]`` instead.
    """
    p = p if isinstance(p, TCParams) else TCParams(*p)
    n, j, r = p.n, p.j, p.r
    s, odd = divmod(r, 2)
    if s < 2:
        raise ValueError("t_multisum needs r >= 4")
    levels = s - 1
    room = n - j

    def level_factor(i: int, li: int, lam: int) -> LaurentPoly:
        e = _c2(li) + 2 * j * (s - i) * li + (j + 1 - n) * li
        if i == 1 and not odd:
            f = qbinom(j, li) * qbinom(n - li, j) * qbinom(n - li + j, n - li - j)
        else:
            f = qbinom(2 * j, li) * qbinom(n - lam + j, n - lam - j) ** 2
        return f.shift(e) if f else ZERO

    def rec(i: int, lam: int) -> LaurentPoly:
        if i > levels:
            return qbinom(2 * j, n - lam - j).shift(_c2(lam))
        acc = ZERO
        for li in range(0, room - lam + 1):
            f = level_factor(i, li, lam + li)
            if f:
                acc = acc + f * rec(i + 1, lam + li)
        return acc

    body = rec(1, 0)
    if odd:
        pre_num, pre_den = [2 * n], [2 * j, n - j, n - j]
        prefix = 2 * s * _c2(n) - (2 * s + 1) * _c2(n - j)
    else:
        pre_num, pre_den = [2 * n, j], [n, 2 * j, n - j]
        prefix = (2 * s - 1) * _c2(n) - 2 * s * _c2(n - j)
    top = body
    for a in pre_num:
        top = top * qfac(a)
    bottom = ONE
    for b in pre_den:
        bottom = bottom * qfac(b)
    return lp_div_exact(top, bottom).shift(-prefix)


def zud_quantity(p: TCParams | tuple) -> LaurentPoly:
    """``q^{(r-1)C(n,2)} [2j, j] t_{n,j}^{(r)} / [2n, n]``; NotDivisible if inexact."""
    p = p if isinstance(p, TCParams) else TCParams(*p)
    num = (qbinom(2 * p.j, p.j) * t_direct(p)).shift((p.r - 1) * _c2(p.n))
    return lp_div_exact(num, qbinom(2 * p.n, p.n))


def check_zud(n: int, j: int, r: int) -> CheckResult:
    params = {"n": n, "j": j, "r": r}
    try:
        z = zud_quantity(TCParams(n, j, r))
    except NotDivisible as exc:
        return counterexample("zud-t", params, reason="not divisible", remainder=exc.remainder)
    if z.min_exp < 0 or not z.is_nonneg():
        return counterexample("zud-t", params, reason="not in N[q]", value=z)
    return verified("zud-t", params, degree=z.max_exp)


# -- q-Legendre transform pair -------------------------------------------


def legendre_forward(b: Sequence[LaurentPoly], n: int) -> LaurentPoly:
    """``a_n = sum_k q^{C(n-k,2)} [n+k, n-k] b_k``."""
    if len(b) < n + 1:
        raise ValueError("need at least n+1 input terms")
    total = ZERO
    for k in range(n + 1):
        total = total + (qbinom(n + k, n - k) * b[k]).shift(_c2(n - k))
    return total


def legendre_inverse(a: Sequence[LaurentPoly], n: int) -> LaurentPoly:
    """``b_n = sum_k (-1)^{n-k} (1-q^{2k+1})/(1-q^{n+k+1}) [2n, n-k] a_k``."""
    if len(a) < n + 1:
        raise ValueError("need at least n+1 input terms")
    total = ZERO
    for k in range(n + 1):
        term = _legendre_weight(n, k) * a[k]
        total = total - term if (n - k) & 1 else total + term
    return total


def random_sequence(length: int, seed: int, degree: int = 4, height: int = 9) -> list[LaurentPoly]:
    rng = random.Random(seed)
    return [LaurentPoly.from_pairs((e, rng.randint(-height, height)) for e in range(degree + 1))
            for _ in range(length)]


def check_legendre(n: int, seed: int = 0) -> CheckResult:
    """Both compositions of the transform pair are the identity on a
    seeded random sequence of length ``n + 1``."""
    params = {"n": n, "seed": seed}
    b = random_sequence(n + 1, seed)
    a = [legendre_forward(b, i) for i in range(n + 1)]
    back = [legendre_inverse(a, i) for i in range(n + 1)]
    if back != b:
        return counterexample("legendre", params, direction="inverse-forward", b=b, got=back)
    a2 = [legendre_inverse(b, i) for i in range(n + 1)]
    fwd = [legendre_forward(a2, i) for i in range(n + 1)]
    if fwd != b:
        return counterexample("legendre", params, direction="forward-inverse", a=b, got=fwd)
    return verified("legendre", params)


# -- c_n^{(r)} -------------------------------------------------------------


_TRIANGULAR: dict[int, list[LaurentPoly]] = {}


def _zudilin_lhs(n: int, r: int) -> LaurentPoly:
    total = ZERO
    for k in range(n + 1):
        term = (qbinom(n, k) * qbinom(n + k, k)) ** r
        total = total + term.shift(r * _c2(n - k) + (1 - r) * _c2(n))
    return total


def _zudilin_weight(n: int, k: int, r: int) -> LaurentPoly:
    return (qbinom(n, k) * qbinom(n + k, k)).shift(_c2(n - k) + (1 - r) * _c2(k))


def c_triangular(n: int, r: int) -> list[LaurentPoly]:
    """``[c_0, ..., c_n]`` by forward substitution; rows are memoized per ``r``."""
    if r < 1:
        raise ValueError("need r >= 1")
    rows = _TRIANGULAR.setdefault(r, [])
    while len(rows) <= n:
        m = len(rows)
        rest = _zudilin_lhs(m, r)
        for k in range(m):
            rest = rest - _zudilin_weight(m, k, r) * rows[k]
        rows.append(lp_div_exact(rest, _zudilin_weight(m, m, r)))
    return list(rows[: n + 1])


def c_via_t(n: int, r: int) -> LaurentPoly:
    if r < 2:
        raise ValueError("the t-route needs r >= 2")
    total = ZERO
    for j in range(n + 1):
        total = total + qbinom(2 * j, j) ** r * t_direct(TCParams(n, j, r))
    return lp_div_exact(total.shift((r - 1) * _c2(n)), qbinom(2 * n, n))


def c2_closed(n: int) -> LaurentPoly:
    """``sum_j [2j, n] [n, j]^2 q^{2 C(n-j, 2)}``."""
    total = ZERO
    for j in range(n + 1):
        term = qbinom(2 * j, n) * qbinom(n, j) ** 2
        if term:
            total = total + term.shift(2 * _c2(n - j))
    return total


def check_c_routes(n: int, r: int) -> CheckResult:
    """Both routes agree and the common value lies in N[q]."""
    params = {"n": n, "r": r}
    try:
        tri = c_triangular(n, r)[n]
    except NotDivisible as exc:
        return counterexample("schmidt-c", params, reason="triangular solve not exact",
                              remainder=exc.remainder)
    if r >= 2:
        try:
            via = c_via_t(n, r)
        except NotDivisible as exc:
            return counterexample("schmidt-c", params, reason="t-route not exact",
                                  remainder=exc.remainder)
        if via != tri:
            return counterexample("schmidt-c", params, triangular=tri, via_t=via)
    if r == 2 and c2_closed(n) != tri:
        return counterexample("schmidt-c", params, triangular=tri, closed=c2_closed(n))
    if tri.min_exp < 0 or not tri.is_nonneg():
        return counterexample("schmidt-c", params, reason="not in N[q]", value=tri)
    return verified("schmidt-c", params, value_at_1=sum(tri.coeffs))


def check_t_closed(n: int, j: int, r: int) -> CheckResult:
    p = TCParams(n, j, r)
    return expect_equal("t-closed", {"n": n, "j": j, "r": r}, t_direct(p), t_closed(p))


def check_t_multisum(n: int, j: int, r: int) -> CheckResult:
    p = TCParams(n, j, r)
    return expect_equal("t-multisum", {"n": n, "j": j, "r": r}, t_direct(p), t_multisum(p))


def c_integer_value(n: int, r: int) -> int:
    """Value at ``q = 1`` (used only for reporting)."""
    return sum(c for c in c_triangular(n, r)[n].coeffs)
