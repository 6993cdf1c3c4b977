"""Digit statistics in bases 3, 7, 13, least-n searches and gcd windows.

Each statistic is a two-state counting automaton read from the most
significant digit.  Leading zeros leave every automaton in its start
state, which lets the vectorized scanner use fixed-width digit arrays.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from .numeric import binomial, central_power_sum

__all__ = [
    "Automaton",
    "AUTOMATA",
    "DigitStats",
    "digits",
    "digit_stats",
    "alpha",
    "beta",
    "gamma",
    "first_with",
    "first_with_brute",
    "GcdReport",
    "gcd_window",
    "residue_window",
    "conjectured_gcd",
]


@dataclass(frozen=True)
class Automaton:
    """``step[state][digit] = (next_state, gain)``; ``final[state]`` is added at the end."""

    name: str
    base: int
    step: tuple[tuple[tuple[int, int], ...], ...]
    final: tuple[int, ...]

    @property
    def states(self) -> int:
        return len(self.step)

    def run(self, ds: Sequence[int]) -> int:
        state, total = 0, 0
        for d in ds:
            state, g = self.step[state][d]
            total += g
        return total + self.final[state]

    @lru_cache(maxsize=None)
    def gain_bounds(self, length: int) -> tuple[tuple[int, int], ...]:
        """Per state, (min, max) total gain over ``length`` further digits plus the end."""
        if length == 0:
            return tuple((f, f) for f in self.final)
        nxt = self.gain_bounds(length - 1)
        out = []
        for row in self.step:
            lo = min(g + nxt[s][0] for s, g in row)
            hi = max(g + nxt[s][1] for s, g in row)
            out.append((lo, hi))
        return tuple(out)

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        nxt = np.array([[s for s, _ in row] for row in self.step], dtype=np.int8)
        gain = np.array([[g for _, g in row] for row in self.step], dtype=np.int8)
        return nxt, gain, np.array(self.final, dtype=np.int8)


def _alpha_automaton() -> Automaton:
    # state 1: a run of 2's has started since the last 0
    step = (
        ((0, 0), (0, 0), (1, 1)),
        ((0, 0), (1, 0), (1, 0)),
    )
    return Automaton("alpha", 3, step, (0, 0))


def _beta_automaton() -> Automaton:
    # state 1: the previous digit was a 1 still waiting for its follower
    rows = []
    for state in (0, 1):
        row = []
        for d in range(7):
            g = 1 if state == 1 and d not in (4, 5, 6) else 0
            row.append((1 if d == 1 else 0, g))
        rows.append(tuple(row))
    return Automaton("beta", 7, tuple(rows), (0, 1))


def _gamma_automaton() -> Automaton:
    # state 1: a 1 followed so far only by 6's
    rows = []
    for state in (0, 1):
        row = []
        for d in range(13):
            if state == 1 and d >= 7:
                row.append((0, 1))
            elif d == 1 or (state == 1 and d == 6):
                row.append((1, 0))
            else:
                row.append((0, 0))
        rows.append(tuple(row))
    return Automaton("gamma", 13, tuple(rows), (0, 0))


AUTOMATA: dict[str, Automaton] = {
    "alpha": _alpha_automaton(),
    "beta": _beta_automaton(),
    "gamma": _gamma_automaton(),
}

_ALIASES = {"α": "alpha", "β": "beta", "γ": "gamma", "a": "alpha", "b": "beta", "g": "gamma"}


def _automaton(stat: str) -> Automaton:
    key = _ALIASES.get(stat, stat)
    try:
        return AUTOMATA[key]
    except KeyError:
        raise ValueError(f"unknown statistic {stat!r}") from None


def digits(n: int, base: int) -> list[int]:
    """Most-significant-first digits; ``[]`` for 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    while n:
        n, d = divmod(n, base)
        out.append(d)
    return out[::-1]


@dataclass(frozen=True)
class DigitStats:
    n: int
    base: int
    digits: tuple[int, ...]
    value: int

    def to_text(self) -> str:
        sep = "," if self.base > 10 else ""
        return f"[{sep.join(map(str, self.digits))}]_{self.base}"


def digit_stats(stat: str, n: int) -> DigitStats:
    auto = _automaton(stat)
    ds = digits(n, auto.base)
    return DigitStats(n, auto.base, tuple(ds), auto.run(ds))


def alpha(n: int) -> int:
    """Number of groups of 2's in base 3, groups being separated by 0's."""
    return digit_stats("alpha", n).value


def beta(n: int) -> int:
    """Base-7 digits 1 whose next digit (if any) is not 4, 5 or 6."""
    return digit_stats("beta", n).value


def gamma(n: int) -> int:
    """Base-13 digits 1 followed by zero or more 6's and then a digit in 7..12."""
    return digit_stats("gamma", n).value


# -- least n with a given statistic ---------------------------------------


def _least_of_length(auto: Automaton, length: int, target: int) -> int | None:
    base = auto.base

    def dfs(pos: int, state: int, count: int, value: int) -> int | None:
        rest = length - pos
        lo, hi = auto.gain_bounds(rest)[state]
        if not count + lo <= target <= count + hi:
            return None
        if rest == 0:
            return value
        for d in range(1 if pos == 0 else 0, base):
            s, g = auto.step[state][d]
            found = dfs(pos + 1, s, count + g, value * base + d)
            if found is not None:
                return found
        return None

    return dfs(0, 0, 0, 0)


def first_with(stat: str, target: int, limit: int) -> int | None:
    """Least ``n <= limit`` with ``stat(n) == target``, or None.

    Digit strings are generated most-significant-first in increasing
    order; a branch is cut once the remaining digits can no longer reach
    the target exactly.
    """
    if target < 0:
        raise ValueError("target must be nonnegative")
    auto = _automaton(stat)
    if target == 0:
        return 0 if limit >= 0 else None
    length = 1
    while auto.base ** (length - 1) <= limit:
        found = _least_of_length(auto, length, target)
        if found is not None:
            return found if found <= limit else None
        length += 1
    return None


def _scan_chunk(args: tuple[str, int, int, int]) -> int | None:
    stat, target, start, stop = args
    auto = _automaton(stat)
    nxt, gain, final = auto.tables()
    width = max(1, len(digits(max(stop - 1, 1), auto.base)))
    chunk = 1 << 20
    for lo in range(start, stop, chunk):
        values = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        state = np.zeros(values.shape, dtype=np.int8)
        count = np.zeros(values.shape, dtype=np.int16)
        for p in range(width - 1, -1, -1):
            d = (values // auto.base ** p) % auto.base
            count += gain[state, d]
            state = nxt[state, d]
        count += final[state]
        hits = np.flatnonzero(count == target)
        if hits.size:
            return int(values[hits[0]])
    return None


def first_with_brute(stat: str, target: int, limit: int, workers: int = 1) -> int | None:
    """Vectorized scan of ``0..limit``; the cross-check for :func:`first_with`."""
    _automaton(stat)
    stop = limit + 1
    if workers <= 1:
        return _scan_chunk((stat, target, 0, stop))
    step = -(-stop // (workers * 4))
    jobs = [(stat, target, a, min(a + step, stop)) for a in range(0, stop, step)]
    with ProcessPoolExecutor(workers) as pool:
        # map keeps job order, so the first hit is the least one
        for hit in pool.map(_scan_chunk, jobs):
            if hit is not None:
                return hit
    return None


# -- gcd windows -----------------------------------------------------------


@dataclass
class GcdReport:
    n: int
    exponents: list[int]
    sums: list[int]
    running: list[int]
    conjectured: int
    label: str
    stabilized: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def gcd(self) -> int:
        return self.running[-1]

    @property
    def divides(self) -> bool:
        return self.gcd % self.conjectured == 0

    @property
    def equal(self) -> bool:
        return self.gcd == self.conjectured

    @property
    def consistent(self) -> bool:
        """Divisibility always; equality too once the window has stabilized."""
        return self.divides and (self.equal or not self.stabilized)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "label": self.label,
            "exponents": list(self.exponents),
            "gcd": str(self.gcd),
            "conjectured": str(self.conjectured),
            "stabilized": self.stabilized,
            "divides": self.divides,
            "equal": self.equal,
            **self.extra,
        }


def conjectured_gcd(n: int, residue: int | None) -> tuple[int, str, dict]:
    """Conjectured gcd for the exponent class ``r = residue (mod 3)``;
    ``residue=None`` is the all-exponents family."""
    c = binomial(2 * n, n)
    if residue is None:
        return c, "C(2n,n)", {}
    if residue == 0:
        a = alpha(n)
        return c * 3 ** a, "C(2n,n)*3^alpha", {"alpha": a}
    if residue == 1:
        b, g = beta(n), gamma(n)
        return c * 7 ** b * 13 ** g, "C(2n,n)*7^beta*13^gamma", {"beta": b, "gamma": g}
    if residue == 2:
        return c, "C(2n,n)", {}
    raise ValueError("residue must be 0, 1, 2 or None")


def gcd_window(n: int, exponents: Sequence[int], residue: int | None = None,
               workers: int = 1) -> GcdReport:
    """gcd of ``sum_k (-1)^k C(2n, n+k)^r`` over ``r`` in ``exponents``.

    With ``residue`` set, every exponent must lie in that class mod 3 and
    the refined conjecture is used.  ``stabilized`` means the running gcd
    is constant on the trailing half of the window.
    """
    exps = list(exponents)
    if not exps:
        raise ValueError("need at least one exponent")
    if any(r < 1 for r in exps):
        raise ValueError("exponents must be positive")
    if residue is not None and any(r % 3 != residue for r in exps):
        raise ValueError(f"exponents must all be {residue} mod 3")
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            sums = list(pool.map(central_power_sum, [n] * len(exps), exps))
    else:
        sums = [central_power_sum(n, r) for r in exps]
    running, acc = [], 0
    for s in sums:
        acc = gcd(acc, s)
        running.append(acc)
    conj, label, extra = conjectured_gcd(n, residue)
    tail = running[len(running) // 2:]
    stable = len(running) >= 2 and len(set(tail)) == 1
    return GcdReport(n, exps, sums, running, conj, label, stable, extra)


def residue_window(residue: int, count: int) -> list[int]:
    """First ``count`` exponents ``3r + residue`` with ``r >= 1``."""
    return [3 * r + residue for r in range(1, count + 1)]
