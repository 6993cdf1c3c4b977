"""Integer (q = 1) layer: Calkin sums, divisibility corollaries, conjecture sums.

Nothing here touches polynomials.  Binomials come from a local
multiplicative routine so that this module can serve as an independent
oracle for the q-layer evaluated at ``q = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterator, Sequence

from .checks import CheckResult, Report, counterexample, expect_equal, verified
from .exact import NotDivisible

__all__ = [
    "binomial",
    "IntSumSpec",
    "alt_sum_int",
    "calkin_sum",
    "calkin_m4",
    "calkin_m5",
    "calkingeneral_rhs",
    "check_calkin",
    "check_calkingeneral",
    "check_rebino",
    "rebino_value",
    "SUITES",
    "suite_instances",
    "check_suite_instance",
    "check_divisibility_suite",
    "central_power_sum",
    "schmidt_c_int",
]


@lru_cache(maxsize=None)
def binomial(n: int, k: int) -> int:
    """``C(n, k)`` by the multiplicative formula; 0 outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    k = min(k, n - k)
    acc = 1
    for i in range(1, k + 1):
        acc = acc * (n - k + i) // i
    return acc


def _exact_quotient(num: int, den: int) -> int:
    qt, rem = divmod(num, den)
    if rem:
        raise NotDivisible(rem, f"{num} is not divisible by {den}")
    return qt


@dataclass(frozen=True)
class IntSumSpec:
    """``sum_k (-1)^k prod_i F_i(k)^{r_i}``.

    ``form="central"``: ``F_i = C(2 n_i, n_i + k)``.
    ``form="cyclic"``: ``F_i = C(n_i + n_{i+1}, n_i + k)`` with ``n_{m+1} = n_1``.
    """

    n: tuple[int, ...]
    r: tuple[int, ...] = ()
    form: str = "central"

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", tuple(self.n))
        object.__setattr__(self, "r", tuple(self.r) or (1,) * len(self.n))
        if len(self.r) != len(self.n):
            raise ValueError("n and r must have the same length")
        if any(x < 1 for x in self.n) or any(x < 1 for x in self.r):
            raise ValueError("all entries must be positive")
        if self.form not in ("central", "cyclic"):
            raise ValueError(f"unknown form {self.form!r}")


def alt_sum_int(spec: IntSumSpec) -> int:
    n, r = spec.n, spec.r
    m = len(n)
    if spec.form == "central":
        tops = [(2 * x, x) for x in n]
        reach = min(n)
    else:
        tops = [(n[i] + n[(i + 1) % m], n[i]) for i in range(m)]
        reach = n[0]
    total = 0
    for k in range(-reach, reach + 1):
        term = 1
        for (top, base), e in zip(tops, r):
            b = binomial(top, base + k)
            if not b:
                term = 0
                break
            term *= b ** e
        total += -term if k & 1 else term
    return total


def central_power_sum(n: int, r: int) -> int:
    """``sum_{k=-n}^{n} (-1)^k C(2n, n+k)^r``."""
    return alt_sum_int(IntSumSpec((n,), (r,)))


def calkin_sum(n: int, m: int) -> int:
    """``C(2n, n)^{-1} sum_k (-1)^k C(2n, n+k)^m``; NotDivisible if not integral."""
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    return _exact_quotient(central_power_sum(n, m), binomial(2 * n, n))


def calkin_m4(n: int) -> int:
    return sum(binomial(2 * n + k, k) * binomial(2 * n, n + k) ** 2 for k in range(n + 1))


def calkin_m5(n: int) -> int:
    return sum(binomial(3 * n - k, n - k) * binomial(2 * n + k, k) * binomial(2 * n, n + k) ** 2
               for k in range(n + 1))


def check_calkin(n: int) -> list[CheckResult]:
    expected = {1: 0, 2: 1, 3: binomial(3 * n, n), 4: calkin_m4(n), 5: calkin_m5(n)}
    out = []
    for m, want in expected.items():
        try:
            got = calkin_sum(n, m)
        except NotDivisible as exc:
            out.append(counterexample("calkin", {"n": n, "m": m}, remainder=exc.remainder))
            continue
        out.append(expect_equal("calkin", {"n": n, "m": m}, got, want))
    return out


def _lambdas(n: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # Plain enumeration without pruning (independent of the q-layer's walker).
    ranges = [range(0, n[0] + 1)] * (len(n) - 2)
    for lam in itertools.product(*ranges):
        full = (n[0],) + lam
        if all(full[i] >= full[i + 1] for i in range(len(lam))):
            yield lam


def calkingeneral_rhs(n: Sequence[int]) -> int:
    n = tuple(n)
    m = len(n)
    total = 0
    for lam in _lambdas(n):
        term = 1
        prev = n[0]
        for i, li in enumerate(lam, start=1):
            term *= binomial(prev, li) * binomial(n[i] + n[(i + 1) % m], n[i] - li)
            prev = li
        total += term
    return binomial(n[0] + n[-1], n[0]) * total


def check_calkingeneral(n: Sequence[int]) -> CheckResult:
    n = tuple(n)
    lhs = alt_sum_int(IntSumSpec(n, form="cyclic"))
    return expect_equal("calkingeneral", {"n": list(n)}, lhs, calkingeneral_rhs(n))


def rebino_value(n: Sequence[int], r: Sequence[int] | None = None) -> Fraction:
    """``n_1! prod (n_i+n_{i+1})!/(2n_i)! * sum_k (-1)^k prod C(2n_i, n_i+k)^{r_i}``
    with ``n_{m+1} = 0``."""
    n = tuple(n)
    ext = n + (0,)
    factor = Fraction(factorial(n[0]))
    for i in range(len(n)):
        factor *= Fraction(factorial(ext[i] + ext[i + 1]), factorial(2 * ext[i]))
    return factor * alt_sum_int(IntSumSpec(n, tuple(r or ())))


def check_rebino(n: Sequence[int], r: Sequence[int] | None = None) -> CheckResult:
    params = {"n": list(n)}
    if r:
        params["r"] = list(r)
    value = rebino_value(n, r)
    if value.denominator != 1:
        return counterexample("rebino", params, reason="not an integer", value=value)
    if value < 0:
        return counterexample("rebino", params, reason="negative", value=value)
    return verified("rebino", params, value=value.numerator)


_SCHMIDT_ROWS: dict[int, list[int]] = {}


def schmidt_c_int(n: int, r: int) -> int:
    """Integer ``c_n^{(r)}`` from
    ``sum_k C(n,k)^r C(n+k,k)^r = sum_k C(n,k) C(n+k,k) c_k^{(r)}``."""
    if r < 1 or n < 0:
        raise ValueError("need n >= 0 and r >= 1")
    rows = _SCHMIDT_ROWS.setdefault(r, [])
    while len(rows) <= n:
        m = len(rows)
        rest = sum((binomial(m, k) * binomial(m + k, k)) ** r for k in range(m + 1))
        rest -= sum(binomial(m, k) * binomial(m + k, k) * rows[k] for k in range(m))
        rows.append(_exact_quotient(rest, binomial(2 * m, m)))
    return rows[n]


# -- divisibility suites -------------------------------------------------


def _sum_powers(factors: Sequence[tuple[int, int, int]], reach: int) -> int:
    """``sum_{|k|<=reach} (-1)^k prod C(top, base + k)^e``."""
    total = 0
    for k in range(-reach, reach + 1):
        term = 1
        for top, base, e in factors:
            if e:
                term *= binomial(top, base + k) ** e
        total += -term if k & 1 else term
    return total


@dataclass
class Suite:
    name: str
    params: tuple[str, ...]
    grid: Callable[[int, int], Iterator[tuple[int, ...]]]
    value: Callable[..., int]
    divisors: Callable[..., dict[str, int]]
    description: str = ""
    exclude: Callable[..., bool] = field(default=lambda *a: False)


def _exps(count: int, total_max: int, min_each: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for combo in itertools.product(range(0, total_max + 1), repeat=count):
        if sum(combo) <= total_max and all(c >= lo for c, lo in zip(combo, min_each)):
            yield combo


def _grid_43(n_max, e_max):
    for m, n in itertools.product(range(1, n_max + 1), repeat=2):
        for r in range(1, e_max // 2 + 1):
            yield (m, n, r)


def _grid_44(n_max, e_max):
    for l, m, n in itertools.product(range(1, n_max + 1), repeat=3):
        for r in range(1, e_max // 3 + 1):
            yield (l, m, n, r)


def _grid_46(n_max, e_max):
    for n in range(1, n_max + 1):
        for r in range(1, e_max + 1):
            for s in range(1, e_max - 2 * r + 1):
                yield (n, r, s)


def _grid_47(n_max, e_max):
    for n in range(1, n_max + 1):
        for r, s, t in _exps(3, e_max, (0, 0, 1)):
            yield (n, r, s, t)


def _grid_rst(n_max, e_max):
    for n in range(1, n_max + 1):
        for r, s, t in _exps(3, e_max, (1, 1, 1)):
            yield (n, r, s, t)


SUITES: dict[str, Suite] = {
    "cor43": Suite(
        "cor43", ("m", "n", "r"), _grid_43,
        lambda m, n, r: _sum_powers([(m + n, m, r), (m + n, n, r)], m),
        lambda m, n, r: {"C(m+n,m)": binomial(m + n, m)},
        "sum (-1)^k C(m+n,m+k)^r C(m+n,n+k)^r",
    ),
    "cor44": Suite(
        "cor44", ("l", "m", "n", "r"), _grid_44,
        lambda l, m, n, r: _sum_powers([(l + m, l, r), (m + n, m, r), (n + l, n, r)], l),
        lambda l, m, n, r: {"C(l+m,l)": binomial(l + m, l), "C(m+n,m)": binomial(m + n, m),
                            "C(n+l,n)": binomial(n + l, n)},
        "sum (-1)^k C(l+m,l+k)^r C(m+n,m+k)^r C(n+l,n+k)^r",
    ),
    "cor46": Suite(
        "cor46", ("n", "r", "s"), _grid_46,
        lambda n, r, s: _sum_powers([(2 * n + 1, n + 1, r), (2 * n + 1, n, r), (2 * n, n, s)], n),
        lambda n, r, s: {"(2n+1)C(2n,n)": (2 * n + 1) * binomial(2 * n, n)},
        "sum (-1)^k C(2n+1,n+k+1)^r C(2n+1,n+k)^r C(2n,n+k)^s",
    ),
    "cor47": Suite(
        "cor47", ("n", "r", "s", "t"), _grid_47,
        lambda n, r, s, t: _sum_powers([(2 * n + 1, n + 1, r), (2 * n + 1, n, s), (2 * n, n, t)], n),
        lambda n, r, s, t: {"C(2n,n)": binomial(2 * n, n)},
        "sum (-1)^k C(2n+1,n+k+1)^r C(2n+1,n+k)^s C(2n,n+k)^t",
    ),
    "cor246": Suite(
        "cor246", ("n", "r", "s", "t"), _grid_rst,
        lambda n, r, s, t: _sum_powers([(6 * n, 3 * n, r), (4 * n, 2 * n, s), (2 * n, n, t)], n),
        lambda n, r, s, t: {"C(6n,n)": binomial(6 * n, n), "C(6n,3n)": binomial(6 * n, 3 * n)},
        "sum (-1)^k C(6n,3n+k)^r C(4n,2n+k)^s C(2n,n+k)^t",
    ),
    "cor248": Suite(
        "cor248", ("n", "r", "s", "t"), _grid_rst,
        lambda n, r, s, t: _sum_powers([(8 * n, 4 * n, r), (4 * n, 2 * n, s), (2 * n, n, t)], n),
        lambda n, r, s, t: {"C(8n,3n)": binomial(8 * n, 3 * n)},
        "sum (-1)^k C(8n,4n+k)^r C(4n,2n+k)^s C(2n,n+k)^t",
    ),
    "conj51": Suite(
        "conj51", ("n", "r", "s", "t"), _grid_rst,
        lambda n, r, s, t: _sum_powers([(6 * n, 3 * n, r), (4 * n, 2 * n, s), (2 * n, n, t)], n),
        lambda n, r, s, t: {"2C(6n,n)": 2 * binomial(6 * n, n),
                            "6C(6n,3n)": 6 * binomial(6 * n, 3 * n)},
        "sum (-1)^k C(6n,3n+k)^r C(4n,2n+k)^s C(2n,n+k)^t",
    ),
    "conj52": Suite(
        "conj52", ("n", "r", "s", "t"), _grid_rst,
        lambda n, r, s, t: _sum_powers([(8 * n, 4 * n, r), (4 * n, 2 * n, s), (2 * n, n, t)], n),
        lambda n, r, s, t: {"2C(8n,3n)": 2 * binomial(8 * n, 3 * n)},
        "sum (-1)^k C(8n,4n+k)^r C(4n,2n+k)^s C(2n,n+k)^t",
        exclude=lambda n, r, s, t: (r, s, t) == (1, 1, 1),
    ),
}


def suite_instances(name: str, n_max: int, exp_sum_max: int) -> Iterator[tuple[int, ...]]:
    """Parameter tuples of a suite in lexicographic order (exclusions removed).

    ``n_max`` bounds every size parameter, ``exp_sum_max`` the sum of the
    exponents of the binomial factors.
    """
    suite = SUITES[name]
    for params in sorted(suite.grid(n_max, exp_sum_max)):
        if not suite.exclude(*params):
            yield params


def check_suite_instance(name: str, params: Sequence[int]) -> CheckResult:
    suite = SUITES[name]
    params = tuple(params)
    value = suite.value(*params)
    named = dict(zip(suite.params, params))
    divisors = suite.divisors(*params)
    failed = {label: value % d for label, d in divisors.items() if value % d}
    if failed:
        return counterexample(name, named, value=value, remainders=failed)
    return verified(name, named, quotients={label: value // d for label, d in divisors.items()})


def check_divisibility_suite(name: str, n_max: int, exp_sum_max: int,
                             tool_version: str = "") -> Report:
    """Run one suite over its grid; counterexamples are collected, not raised."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    report = Report(tool_version, {"suite": name, "n_max": n_max, "exp_sum_max": exp_sum_max})
    for params in suite_instances(name, n_max, exp_sum_max):
        report.records.append(check_suite_instance(name, params))
    return report
