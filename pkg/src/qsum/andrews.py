"""Verifier for Andrews' single-sum / multiple-sum identity.

Only specializations where ``a``, ``b_i``, ``c_i`` are integer powers of
``q`` are handled.  Every summand is then ``sign * q^c * prod (1-q^e)^mult``
with integer ``e != 0`` and signed multiplicities, which lets one
representation serve exact evaluation, degree bounds and certificates.

The balancing factor ``(q sqrt(a), -q sqrt(a))_k / (sqrt(a), -sqrt(a))_k``
is used in its square-root free form ``(1 - a q^{2k}) / (1 - a)``; together
with ``(a)_k`` this becomes ``(aq)_{k-1} (1 - a q^{2k})`` for ``k >= 1``, so
``a = 1`` needs no limit.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

from .checks import CheckResult, counterexample, skipped, verified
from .exact import ONE, ZERO, LaurentPoly, one_minus_q_pow, to_rational

__all__ = [
    "AndrewsParams",
    "EvalCertificate",
    "PoleHit",
    "FactorTerm",
    "andrews_terms",
    "andrews_side",
    "andrews_check",
    "andrews_limit_terms",
    "andrews_limit_check",
    "andrews_limit_bridge",
    "sample_points",
    "terms_to_fraction",
    "schmidt_specialization",
]


class PoleHit(ZeroDivisionError):
    """A denominator vanishes, either identically or at the sample point."""

    def __init__(self, point=None, message: str = "pole") -> None:
        self.point = point
        super().__init__(message)


# -- factored summands ---------------------------------------------------


class FactorTerm:
    """``sign * q^power * prod_e (1 - q^e)^mult[e]`` with every ``e > 0``.

    ``zero`` marks a vanishing numerator factor, ``pole`` a vanishing
    denominator factor.
    """

    __slots__ = ("sign", "power", "mult", "zero", "pole")

    def __init__(self) -> None:
        self.sign = 1
        self.power = 0
        self.mult: dict[int, int] = defaultdict(int)
        self.zero = False
        self.pole = False

    def factor(self, e: int, times: int = 1) -> "FactorTerm":
        """Multiply by ``(1 - q^e)^times`` (``times`` may be negative)."""
        if e == 0:
            if times > 0:
                self.zero = True
            elif times < 0:
                self.pole = True
            return self
        if e < 0:
            # 1 - q^e = -q^e (1 - q^-e)
            if times & 1:
                self.sign = -self.sign
            self.power += e * times
            e = -e
        self.mult[e] += times
        return self

    def poch(self, e: int, k: int, times: int = 1) -> "FactorTerm":
        """Multiply by ``(q^e; q)_k ^ times``."""
        for i in range(k):
            self.factor(e + i, times)
        return self

    def monomial(self, c: int) -> "FactorTerm":
        self.power += c
        return self

    def negate(self, flag: bool = True) -> "FactorTerm":
        if flag:
            self.sign = -self.sign
        return self

    def cleaned(self) -> dict[int, int]:
        return {e: v for e, v in self.mult.items() if v}

    def value(self, x: Fraction) -> Fraction:
        if self.pole:
            raise PoleHit(x, "identically vanishing denominator")
        if self.zero:
            return Fraction(0)
        if x == 0 and (self.power < 0 or any(v < 0 for v in self.mult.values())):
            raise PoleHit(x)
        acc = Fraction(self.sign) * x ** self.power
        for e, v in self.mult.items():
            if not v:
                continue
            f = 1 - x ** e
            if f == 0:
                if v < 0:
                    raise PoleHit(x)
                return Fraction(0)
            acc *= f ** v
        return acc


def _common_denominator(terms: Sequence[FactorTerm]) -> dict[int, int]:
    den: dict[int, int] = defaultdict(int)
    for t in terms:
        for e, v in t.mult.items():
            if v < 0 and -v > den[e]:
                den[e] = -v
    return dict(den)


def _cleared(terms: Sequence[FactorTerm], den: dict[int, int]) -> list[tuple[int, int, dict[int, int]]]:
    out = []
    for t in terms:
        mult = {e: v + den.get(e, 0) for e, v in t.mult.items()}
        for e, d in den.items():
            mult.setdefault(e, d)
        out.append((t.sign, t.power, {e: v for e, v in mult.items() if v}))
    return out


def _poly_of(sign: int, power: int, mult: dict[int, int]) -> LaurentPoly:
    acc = ONE
    for e in sorted(mult):
        acc = acc * one_minus_q_pow(e) ** mult[e]
    return acc.scale(sign).shift(power)


def terms_to_fraction(terms: Sequence[FactorTerm]) -> tuple[LaurentPoly, LaurentPoly]:
    """Exact ``(numerator, denominator)`` Laurent polynomials of a sum of terms."""
    live = [t for t in terms if not t.zero]
    if any(t.pole for t in live):
        raise PoleHit(None, "identically vanishing denominator")
    den = _common_denominator(live)
    num = ZERO
    for sign, power, mult in _cleared(live, den):
        num = num + _poly_of(sign, power, mult)
    return num, _poly_of(1, 0, den)


# -- parameters ----------------------------------------------------------


@dataclass(frozen=True)
class AndrewsParams:
    """``a = q^e_a``, ``b_i = q^e_b[i]``, ``c_i = q^e_c[i]``.

    ``a_to_one`` forces ``e_a = 0``.  ``c_to_infinity`` selects the limit
    form and requires ``e_c`` to be empty.
    """

    m: int
    N: int
    e_a: int
    e_b: tuple[int, ...]
    e_c: tuple[int, ...] = ()
    a_to_one: bool = False
    c_to_infinity: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "e_b", tuple(self.e_b))
        object.__setattr__(self, "e_c", tuple(self.e_c))
        if self.m < 1 or self.N < 0:
            raise ValueError("need m >= 1 and N >= 0")
        if len(self.e_b) != self.m:
            raise ValueError("e_b must have m entries")
        if self.c_to_infinity:
            if self.e_c:
                raise ValueError("e_c must be absent when c_to_infinity is set")
        elif len(self.e_c) != self.m:
            raise ValueError("e_c must have m entries")
        if self.a_to_one and self.e_a != 0:
            raise ValueError("a_to_one requires e_a == 0")

    def as_dict(self) -> dict:
        return {"m": self.m, "N": self.N, "e_a": self.e_a, "e_b": list(self.e_b),
                "e_c": list(self.e_c), "a_to_one": self.a_to_one,
                "c_to_infinity": self.c_to_infinity}


def _compositions(parts: int, limit: int) -> Iterator[tuple[int, ...]]:
    """All ``(l_1..l_parts) >= 0`` with sum ``<= limit``."""
    if parts == 0:
        yield ()
        return
    for first in range(limit + 1):
        for rest in _compositions(parts - 1, limit - first):
            yield (first,) + rest


def andrews_terms(p: AndrewsParams, side: str) -> list[FactorTerm]:
    """Nonvanishing-range summands of the chosen side as factored terms."""
    if p.c_to_infinity:
        n = tuple(-e for e in p.e_b)
        return andrews_limit_terms(p.m, p.N, n, side)
    m, N, ea = p.m, p.N, p.e_a
    eb, ec = p.e_b, p.e_c
    out = []
    if side == "lhs":
        ratio = m * ea + m + N - sum(eb) - sum(ec)
        for k in range(N + 1):
            t = FactorTerm()
            if k:
                t.poch(ea + 1, k - 1).factor(ea + 2 * k)
            for i in range(m):
                t.poch(eb[i], k).poch(ec[i], k)
                t.poch(ea + 1 - eb[i], k, -1).poch(ea + 1 - ec[i], k, -1)
            t.poch(-N, k).poch(1, k, -1).poch(ea + N + 1, k, -1)
            t.monomial(ratio * k)
            out.append(t)
        return out
    if side != "rhs":
        raise ValueError("side must be 'lhs' or 'rhs'")
    for ls in _compositions(m - 1, N):
        t = FactorTerm()
        t.poch(ea + 1, N).poch(ea + 1 - eb[-1] - ec[-1], N)
        t.poch(ea + 1 - eb[-1], N, -1).poch(ea + 1 - ec[-1], N, -1)
        big_l = sum(ls)
        lam = list(itertools.accumulate(ls))
        for i in range(m - 1):
            t.poch(ea + 1 - eb[i] - ec[i], ls[i]).poch(1, ls[i], -1)
            t.poch(eb[i + 1], lam[i]).poch(ec[i + 1], lam[i])
            t.poch(ea + 1 - eb[i], lam[i], -1).poch(ea + 1 - ec[i], lam[i], -1)
        t.poch(-N, big_l).poch(eb[-1] + ec[-1] - N - ea, big_l, -1)
        # (aq)^{l_{m-2} + 2 l_{m-3} + ... + (m-2) l_1} q^L
        t.monomial((ea + 1) * sum((m - 2 - i) * ls[i] for i in range(m - 1)))
        t.monomial(big_l)
        # 1 / ((b_2 c_2)^{lam_1} ... (b_{m-1} c_{m-1})^{lam_{m-2}})
        t.monomial(-sum((eb[i] + ec[i]) * lam[i - 1] for i in range(1, m - 1)))
        out.append(t)
    return out


def andrews_side(side: str, p: AndrewsParams, q_val) -> Fraction:
    """Exact value of one side at a rational ``q``; raises PoleHit."""
    x = to_rational(q_val)
    if x in (0, 1, -1):
        raise PoleHit(x, "sample points must avoid 0 and +-1")
    return sum((t.value(x) for t in andrews_terms(p, side)), Fraction(0))


# -- certificates --------------------------------------------------------


def _primes() -> Iterator[int]:
    found: list[int] = []
    for c in itertools.count(2):
        if all(c % f for f in found if f * f <= c):
            found.append(c)
            yield c


def sample_points(count: int, skip: Iterable[Fraction] = ()) -> list[Fraction]:
    """Deterministic distinct points ``p_i / p_{i+1}`` over successive primes."""
    bad = set(skip)
    out: list[Fraction] = []
    gen = _primes()
    prev = next(gen)
    while len(out) < count:
        cur = next(gen)
        x = Fraction(prev, cur)
        if x not in bad:
            out.append(x)
        prev = cur
    return out


@dataclass
class EvalCertificate:
    """Evidence that LHS - RHS vanishes identically.

    ``kind == "points"``: agreement at ``len(q_points) > degree_bound``
    distinct nonzero rationals, where ``degree_bound`` bounds the spread of
    exponents of (LHS - RHS) times the common denominator.

    ``kind == "height"``: that cleared numerator, a polynomial whose
    coefficients are bounded by ``coeff_bound`` in absolute value,
    vanishes at the single integer ``q_points[0] > coeff_bound + 1``;
    a nonzero such polynomial cannot, so this also decides the identity.
    """

    kind: str
    degree_bound: int
    q_points: list = field(default_factory=list)
    lhs_values: list = field(default_factory=list)
    rhs_values: list = field(default_factory=list)
    coeff_bound: int = 0

    def is_complete(self) -> bool:
        if self.kind == "points":
            return (len(set(self.q_points)) > self.degree_bound
                    and all(x not in (0, 1, -1) for x in self.q_points)
                    and self.lhs_values == self.rhs_values)
        if self.kind == "height":
            return (len(self.q_points) == 1 and self.q_points[0] > self.coeff_bound + 1
                    and self.lhs_values == self.rhs_values)
        return False

    def to_json(self) -> dict:
        d = {"kind": self.kind, "degree_bound": self.degree_bound,
             "points": len(self.q_points)}
        if self.kind == "points":
            d["q_points"] = [f"{x.numerator}/{x.denominator}" for x in self.q_points]
        else:
            d["coeff_bound_bits"] = self.coeff_bound.bit_length()
            d["point_bits"] = self.q_points[0].bit_length() - 1
        return d


def _cleared_difference(lhs: list[FactorTerm], rhs: list[FactorTerm]):
    signed = [t for t in lhs if not t.zero]
    for t in rhs:
        if not t.zero:
            u = FactorTerm()
            u.sign, u.power, u.mult, u.pole = -t.sign, t.power, t.mult, t.pole
            signed.append(u)
    return _cleared(signed, _common_denominator(signed))


def degree_bound(lhs: list[FactorTerm], rhs: list[FactorTerm]) -> int:
    """Exponent spread of ``(LHS - RHS) * common denominator``."""
    cleared = _cleared_difference(lhs, rhs)
    if not cleared:
        return 0
    lo = min(p for _, p, _ in cleared)
    hi = max(p + sum(e * v for e, v in mult.items()) for _, p, mult in cleared)
    return hi - lo


def _points_certificate(lhs, rhs) -> tuple[bool, EvalCertificate]:
    bound = degree_bound(lhs, rhs)
    cert = EvalCertificate("points", bound)
    for x in sample_points(bound + 1):
        lv = sum((t.value(x) for t in lhs), Fraction(0))
        rv = sum((t.value(x) for t in rhs), Fraction(0))
        cert.q_points.append(x)
        cert.lhs_values.append(lv)
        cert.rhs_values.append(rv)
        if lv != rv:
            return False, cert
    return True, cert


def _height_certificate(lhs, rhs) -> tuple[bool, EvalCertificate]:
    cleared = _cleared_difference(lhs, rhs)
    if not cleared:
        return True, EvalCertificate("height", 0, [2], [0], [0], 0)
    lo = min(p for _, p, _ in cleared)
    hi = max(p + sum(e * v for e, v in mult.items()) for _, p, mult in cleared)
    # |coefficients| <= sum over terms of 2^(number of binomial factors)
    bound = sum(1 << sum(mult.values()) for _, _, mult in cleared)
    bits = bound.bit_length() + 1
    x = 1 << bits
    powers: dict[int, int] = {}
    total = 0
    for sign, power, mult in cleared:
        val = 1 << (bits * (power - lo))
        for e, v in mult.items():
            f = powers.get(e)
            if f is None:
                f = powers[e] = 1 - (1 << (bits * e))
            val *= f ** v if v > 1 else f
        total += val if sign > 0 else -val
    # lhs_values holds (LHS - RHS) * denominator at x; rhs_values the target 0
    cert = EvalCertificate("height", hi - lo, [x], [total], [0], bound)
    return total == 0, cert


def andrews_check(p: AndrewsParams, method: str = "height") -> CheckResult:
    """Decide the identity for one specialization.

    Parameter sets with an identically vanishing denominator factor inside
    the summation ranges are reported as skipped (not pole-free).
    """
    params = p.as_dict()
    lhs = andrews_terms(p, "lhs")
    rhs = andrews_terms(p, "rhs")
    if any(t.pole for t in lhs + rhs):
        return skipped("andrews", params, reason="identically vanishing denominator")
    lhs = [t for t in lhs if not t.zero]
    rhs = [t for t in rhs if not t.zero]
    if method == "points":
        ok, cert = _points_certificate(lhs, rhs)
    elif method == "height":
        ok, cert = _height_certificate(lhs, rhs)
    else:
        raise ValueError(f"unknown certificate method {method!r}")
    if ok and cert.is_complete():
        return verified("andrews", params, certificate=cert.to_json())
    bad = next((i for i, (a, b) in enumerate(zip(cert.lhs_values, cert.rhs_values)) if a != b),
               None)
    witness = {"certificate": cert.to_json()}
    if bad is not None and cert.kind == "points":
        witness.update(point=cert.q_points[bad], lhs=cert.lhs_values[bad],
                       rhs=cert.rhs_values[bad])
    return counterexample("andrews", params, **witness)


# -- limit form: c_i -> infinity, a -> 1, b_i = q^{-n_i} -----------------


def andrews_limit_terms(m: int, N: int, n: Sequence[int], side: str) -> list[FactorTerm]:
    """Summands of the limit identity with ``b_i = q^{-n_i}``.

    ``1 + q^k`` is written as ``(1 - q^{2k}) / (1 - q^k)``.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    n = tuple(n)
    if len(n) == 1 and m > 1:
        n = n * m
    if len(n) != m:
        raise ValueError("need one exponent per b_i")
    eb = tuple(-x for x in n)
    out = []
    if side == "lhs":
        out.append(FactorTerm())
        for k in range(1, N + 1):
            t = FactorTerm()
            t.factor(2 * k).factor(k, -1)
            for e in eb:
                t.poch(e, k).poch(1 - e, k, -1)
            t.poch(-N, k).poch(N + 1, k, -1)
            t.negate(bool((m * k) & 1))
            t.monomial(m * comb(k, 2) + k * (m + N - sum(eb)))
            out.append(t)
        return out
    if side != "rhs":
        raise ValueError("side must be 'lhs' or 'rhs'")
    for ls in _compositions(m - 1, N):
        big_l = sum(ls)
        lam = list(itertools.accumulate(ls))
        t = FactorTerm()
        t.poch(1, N).poch(1 - eb[-1], N, -1)
        t.poch(1, N)
        for li in ls:
            t.poch(1, li, -1)
        t.poch(1, N - big_l, -1)
        for i in range(m - 1):
            li_acc = lam[i]
            t.poch(eb[i + 1], li_acc).poch(1 - eb[i], li_acc, -1)
            t.negate(bool(li_acc & 1))
            t.monomial(-eb[i + 1] * li_acc + comb(li_acc, 2) + (m - 1 - i) * ls[i])
        out.append(t)
    return out


def andrews_limit_check(m: int, N: int, n: Sequence[int]) -> CheckResult:
    """Exact rational-function equality of both sides of the limit form."""
    params = {"m": m, "N": N, "n": list(n)}
    lhs = andrews_limit_terms(m, N, n, "lhs")
    rhs = andrews_limit_terms(m, N, n, "rhs")
    try:
        ln, ld = terms_to_fraction(lhs)
        rn, rd = terms_to_fraction(rhs)
    except PoleHit:
        return skipped("andrews-limit", params, reason="identically vanishing denominator")
    if ln * rd == rn * ld:
        return verified("andrews-limit", params)
    return counterexample("andrews-limit", params, lhs_num=ln, lhs_den=ld, rhs_num=rn, rhs_den=rd)


def andrews_limit_bridge(n: Sequence[int]) -> CheckResult:
    """Limit form with ``m -> m-1``, ``N = n_m`` against the multisum identity.

    Checks ``alt_sum(n; m-1) = P * LHS`` and ``thm1_rhs(n) = P * RHS``
    with ``P = prod_i [n_i + n_{i+1}, n_i]``.
    """
    from .qcore import qbinom
    from .sums import SumSpec, alt_sum, thm1_rhs

    n = tuple(n)
    m = len(n)
    params = {"n": list(n)}
    prod = ONE
    for i in range(m):
        prod = prod * qbinom(n[i] + n[(i + 1) % m], n[i])
    ln, ld = terms_to_fraction(andrews_limit_terms(m - 1, n[-1], n[:-1], "lhs"))
    rn, rd = terms_to_fraction(andrews_limit_terms(m - 1, n[-1], n[:-1], "rhs"))
    left = alt_sum(SumSpec(n, m - 1))
    right = thm1_rhs(n)
    if left * ld != prod * ln:
        return counterexample("andrews-bridge", params, side="lhs")
    if right * rd != prod * rn:
        return counterexample("andrews-bridge", params, side="rhs")
    return verified("andrews-bridge", params)


# -- specializations used for the Schmidt kernels ------------------------


def schmidt_specialization(n: int, j: int, r: int) -> AndrewsParams:
    """Parameters turning Andrews' identity into a closed form or multisum
    for ``t_{n,j}^{(r)}``: ``a = q^{-(2n+1)}``, ``N = n - j``."""
    d = -(n - j)
    if r == 2:
        return AndrewsParams(1, n - j, -(2 * n + 1), (-n,), (d,))
    if r == 3:
        return AndrewsParams(1, n - j, -(2 * n + 1), (d,), (d,))
    s, odd = divmod(r, 2)
    if s < 2:
        raise ValueError("r must be 2, 3 or >= 4")
    if odd:
        return AndrewsParams(s, n - j, -(2 * n + 1), (d,) * s, (d,) * s)
    return AndrewsParams(s, n - j, -(2 * n + 1), (-n,) + (d,) * (s - 1), (d,) * s)
