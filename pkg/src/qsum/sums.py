"""Alternating sums of cyclic products of q-binomials and their identities.

For ``n = (n_1, ..., n_m)`` with ``n_{m+1} = n_1`` the basic object is

    alt_sum(n; j) = sum_{k=-n_1}^{n_1} (-1)^k q^{j k^2 + k(k-1)/2}
                    prod_i [n_i + n_{i+1}, n_i + k]

and ``S(n; j) = alt_sum(n; j) / [n_1 + n_m, n_1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .checks import CheckResult, counterexample, expect_equal, verified
from .exact import ONE, ZERO, LaurentPoly, NotDivisible, lp_div_exact, lp_reciprocal
from .qcore import inv_qfac_is_zero, qbinom, qfac, qpoch

__all__ = [
    "SumSpec",
    "alt_sum",
    "S",
    "lambda_sequences",
    "thm1_rhs",
    "check_thm1",
    "check_positivity",
    "check_lemma_rec",
    "lemma_rhs",
    "check_duality",
    "duality_exponent",
    "check_qdixon",
    "qdixon_lhs",
    "qdixon_rhs",
    "check_qpfaff",
    "qpfaff_rhs",
    "m3_closed",
    "check_m3",
]


@dataclass(frozen=True)
class SumSpec:
    """Parameters ``(n_1, ..., n_m; j)``; ``n_1 = 0`` is allowed internally."""

    n: tuple[int, ...]
    j: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if not self.n:
            raise ValueError("SumSpec needs m >= 1")
        if self.n[0] < 0 or any(x < 1 for x in self.n[1:]):
            raise ValueError(f"invalid SumSpec entries {self.n}")

    @property
    def m(self) -> int:
        return len(self.n)

    def cyclic(self, i: int) -> int:
        """``n_i`` for 1-based ``i`` with ``n_{m+1} = n_1``."""
        return self.n[(i - 1) % self.m]


def _k_exponent(j: int, k: int) -> int:
    # k(k-1)/2 is also used for negative k, where it is positive.
    return j * k * k + k * (k - 1) // 2


def alt_sum(spec: SumSpec | Sequence[int], j: int | None = None) -> LaurentPoly:
    """Numerator of ``S``: the signed sum over ``-n_1 <= k <= n_1``."""
    if not isinstance(spec, SumSpec):
        spec = SumSpec(tuple(spec), 0 if j is None else j)
    elif j is not None:
        spec = SumSpec(spec.n, j)
    n = spec.n
    m = len(n)
    pairs = [(n[i] + n[(i + 1) % m], n[i]) for i in range(m)]
    total = ZERO
    for k in range(-n[0], n[0] + 1):
        term = ONE
        for top, base in pairs:
            b = qbinom(top, base + k)
            if not b:
                term = ZERO
                break
            term = term * b
        if not term:
            continue
        term = term.shift(_k_exponent(spec.j, k))
        total = total - term if k & 1 else total + term
    return total


def S(spec: SumSpec | Sequence[int], j: int | None = None) -> LaurentPoly:
    """``alt_sum / [n_1 + n_m, n_1]``; raises NotDivisible if inexact."""
    if not isinstance(spec, SumSpec):
        spec = SumSpec(tuple(spec), 0 if j is None else j)
    elif j is not None:
        spec = SumSpec(spec.n, j)
    denom = qbinom(spec.n[0] + spec.n[-1], spec.n[0])
    return lp_div_exact(alt_sum(spec), denom)


# -- the multisum side ---------------------------------------------------


def lambda_sequences(n: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Weakly decreasing ``(lambda_1..lambda_{m-2})`` with ``lambda_0 = n_1``.

    Branches where ``[n_{i+1}+n_{i+2}, n_{i+1}-lambda_i]`` vanishes are
    pruned, so only sequences with a nonzero summand are produced.
    """
    depth = len(n) - 2

    def rec(i: int, prev: int, acc: tuple[int, ...]):
        if i > depth:
            yield acc
            return
        for lam in range(min(prev, n[i]), -1, -1):
            yield from rec(i + 1, lam, acc + (lam,))

    # n[i] below is n_{i+1} in 1-based terms.
    return rec(1, n[0], ())


def thm1_rhs(n: Sequence[int]) -> LaurentPoly:
    """``[n_1+n_m, n_1] * sum_lambda prod q^{lambda_i^2} [lambda_{i-1}, lambda_i]
    [n_{i+1}+n_{i+2}, n_{i+1}-lambda_i]``."""
    n = tuple(n)
    m = len(n)
    if m < 3:
        raise ValueError("thm1_rhs needs m >= 3")
    total = ZERO
    for lam in lambda_sequences(n):
        term = ONE
        prev = n[0]
        for i, li in enumerate(lam, start=1):
            nxt = n[i]
            after = n[(i + 1) % m]
            term = term * qbinom(prev, li) * qbinom(nxt + after, nxt - li)
            term = term.shift(li * li)
            prev = li
        total = total + term
    return qbinom(n[0] + n[-1], n[0]) * total


def check_thm1(n: Sequence[int]) -> CheckResult:
    n = tuple(n)
    lhs = alt_sum(SumSpec(n, len(n) - 1))
    rhs = thm1_rhs(n)
    return expect_equal("thm1", {"n": list(n)}, lhs, rhs)


def check_positivity(n: Sequence[int], j: int) -> CheckResult:
    """``S(n; j)`` is a polynomial with nonnegative integer coefficients."""
    params = {"n": list(n), "j": j}
    try:
        s = S(SumSpec(tuple(n), j))
    except NotDivisible as exc:
        return counterexample("thm2-positivity", params, reason="not divisible",
                              remainder=exc.remainder)
    if s.min_exp < 0:
        return counterexample("thm2-positivity", params, reason="negative exponent", S=s)
    if not s.is_nonneg():
        return counterexample("thm2-positivity", params, reason="negative coefficient", S=s)
    return verified("thm2-positivity", params, degree=s.max_exp, value_at_1=sum(s.coeffs))


# -- recurrence and duality ----------------------------------------------


def lemma_rhs(spec: SumSpec) -> tuple[LaurentPoly, LaurentPoly]:
    """Both sides of the recurrence with denominators cleared.

    Multiplying by ``(q^{n_m+1})_{n_1} = (q)_{n_1+n_m}/(q)_{n_m}`` turns every
    ``S`` into a polynomial expression, so the comparison stays exact for
    any integer ``j`` (including ones where ``S`` itself is not a polynomial).
    Returns ``(lhs_cleared, rhs_cleared)``.
    """
    n = spec.n
    if len(n) < 3:
        raise ValueError("the recurrence needs m >= 3")
    n1, n2, n3, nm = n[0], n[1], n[2], n[-1]
    lhs = alt_sum(spec) * qfac(n1)
    rhs = ZERO
    for l in range(n1 + 1):
        weight = qbinom(n1, l) * qbinom(n2 + n3, n2 - l)
        if not weight:
            continue
        sub = SumSpec((l,) + n[2:], spec.j - 1)
        # [l + n_m, l]^{-1} * (q)_{n_1+n_m}/(q)_{n_m} = (q)_l (q^{l+n_m+1})_{n_1-l}
        clear = qfac(l) * qpoch(l + nm + 1, n1 - l)
        rhs = rhs + (weight * alt_sum(sub) * clear).shift(l * l)
    return lhs, rhs


def check_lemma_rec(spec: SumSpec | Sequence[int], j: int | None = None) -> CheckResult:
    if not isinstance(spec, SumSpec):
        spec = SumSpec(tuple(spec), 0 if j is None else j)
    lhs, rhs = lemma_rhs(spec)
    return expect_equal("lemma21", {"n": list(spec.n), "j": spec.j}, lhs, rhs)


def duality_exponent(n: Sequence[int]) -> int:
    """``n_1 n_2 + n_2 n_3 + ... + n_{m-1} n_m`` (no wrap-around term)."""
    return sum(a * b for a, b in zip(n, n[1:]))


def check_duality(n: Sequence[int]) -> CheckResult:
    """``S(n; 0, q) = q^N S(n; m-1, 1/q)``."""
    n = tuple(n)
    big_n = duality_exponent(n)
    params = {"n": list(n)}
    try:
        s0 = S(SumSpec(n, 0))
        top = S(SumSpec(n, len(n) - 1))
    except NotDivisible as exc:
        return counterexample("duality", params, reason="not divisible", remainder=exc.remainder)
    if top and top.max_exp > big_n:
        return counterexample("duality", params, reason="degree bound exceeded",
                              degree=top.max_exp, bound=big_n)
    return expect_equal("duality", params, s0, lp_reciprocal(top, big_n), N=big_n)


# -- classical identities ------------------------------------------------


def qdixon_lhs(n1: int, n2: int, n3: int) -> LaurentPoly:
    total = ZERO
    for k in range(-n1, n1 + 1):
        term = qbinom(n1 + n2, n1 + k) * qbinom(n2 + n3, n2 + k) * qbinom(n3 + n1, n3 + k)
        if not term:
            continue
        term = term.shift((3 * k * k - k) // 2)
        total = total - term if k & 1 else total + term
    return total


def qdixon_rhs(n1: int, n2: int, n3: int) -> LaurentPoly:
    """``(q)_{n1+n2+n3} / ((q)_{n1} (q)_{n2} (q)_{n3})`` by exact division."""
    den = qfac(n1) * qfac(n2) * qfac(n3)
    return lp_div_exact(qfac(n1 + n2 + n3), den)


def check_qdixon(n1: int, n2: int, n3: int) -> CheckResult:
    return expect_equal("qdixon", {"n": [n1, n2, n3]}, qdixon_lhs(n1, n2, n3),
                        qdixon_rhs(n1, n2, n3))


def qpfaff_rhs(n1: int, n2: int, n3: int, k: int, *, weight: str = "r2") -> LaurentPoly:
    """Finite sum side of q-Pfaff-Saalschutz.

    Summand ``r`` is ``q^{r^2+2kr} (q)_{A} / ((q)_r (q)_{r+2k} (q)_{n1-k-r}
    (q)_{n2-k-r} (q)_{n3-k-r})`` with ``A = n1+n2+n3-k-r``; each is built as
    one exact division.  ``weight="k2"`` swaps the weight for
    ``q^{k^2+2kr}``, a variant that does not give an identity (kept so the
    discrepancy can be demonstrated).
    """
    if weight not in ("r2", "k2"):
        raise ValueError("weight must be 'r2' or 'k2'")
    total = ZERO
    for r in range(0, n1 - k + 1):
        lows = [r, r + 2 * k, n1 - k - r, n2 - k - r, n3 - k - r]
        if any(inv_qfac_is_zero(x) for x in lows):
            continue
        top = n1 + n2 + n3 - k - r
        num = qfac(top)
        den = ONE
        for x in lows:
            den = den * qfac(x)
        term = lp_div_exact(num, den)
        e = k * k + 2 * k * r if weight == "k2" else r * r + 2 * k * r
        total = total + term.shift(e)
    return total


def check_qpfaff(n1: int, n2: int, n3: int, k: int, *, weight: str = "r2") -> CheckResult:
    if abs(k) > min(n1, n2, n3):
        raise ValueError("q-Pfaff-Saalschutz check needs |k| <= min(n1, n2, n3)")
    lhs = qbinom(n1 + n2, n1 + k) * qbinom(n2 + n3, n2 + k) * qbinom(n3 + n1, n3 + k)
    rhs = qpfaff_rhs(n1, n2, n3, k, weight=weight)
    name = "qpfaff" if weight == "r2" else "qpfaff-k2"
    return expect_equal(name, {"n": [n1, n2, n3], "k": k}, lhs, rhs)


# -- m = 3 closed forms ---------------------------------------------------


def m3_closed(n1: int, n2: int, n3: int, j: int) -> LaurentPoly:
    if j == 1:
        return qbinom(n1 + n2 + n3, n2)
    if j not in (0, 2):
        raise ValueError("m3_closed is defined for j in {0, 1, 2}")
    total = ZERO
    for l in range(n1 + 1):
        term = qbinom(n1, l) * qbinom(n2 + n3, n2 - l)
        if not term:
            continue
        e = l * l if j == 2 else (n1 - l) * (n2 - l) + n3 * l
        total = total + term.shift(e)
    return total


def check_m3(n1: int, n2: int, n3: int, j: int) -> CheckResult:
    return expect_equal("m3", {"n": [n1, n2, n3], "j": j}, S(SumSpec((n1, n2, n3), j)),
                        m3_closed(n1, n2, n3, j))

