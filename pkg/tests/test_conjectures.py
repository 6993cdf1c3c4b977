from math import comb, gcd

import pytest
from hypothesis import given, strategies as st

from oracles import alpha_str, beta_str, gamma_str, to_base
from qsum.conjectures import (
    AUTOMATA, alpha, beta, conjectured_gcd, digit_stats, digits, first_with, first_with_brute,
    gamma, gcd_window, residue_window,
)
from qsum.numeric import central_power_sum


def test_worked_examples():
    assert alpha(185) == 2
    assert digit_stats("alpha", 185).digits == (2, 0, 2, 1, 2)
    assert beta(2480) == 1
    assert digit_stats("beta", 2480).digits == (1, 0, 1, 4, 2)
    assert gamma(3296) == 1
    assert digit_stats("gamma", 3296).digits == (1, 6, 6, 7)
    assert alpha(1640) == 4
    assert beta(400) == 4
    assert gamma(97110800) == 4
    assert digit_stats("gamma", 97110800).to_text() == "[1,7,1,7,1,7,1,7]_13"


def test_trivial_values():
    assert alpha(0) == beta(0) == gamma(0) == 0
    assert beta(4) == 0
    assert gamma(1) == 0
    assert beta(1) == 1
    assert digits(0, 3) == []
    with pytest.raises(ValueError):
        digits(-1, 3)
    with pytest.raises(ValueError):
        digit_stats("delta", 4)


@given(st.integers(0, 10**9), st.sampled_from([3, 7, 13]))
def test_digit_roundtrip(n, base):
    ds = digits(n, base)
    assert all(0 <= d < base for d in ds)
    assert not ds or ds[0] != 0
    value = 0
    for d in ds:
        value = value * base + d
    assert value == n


@given(st.integers(0, 10**12))
def test_automata_match_string_oracles(n):
    assert alpha(n) == alpha_str(n)
    assert beta(n) == beta_str(n)
    assert gamma(n) == gamma_str(n)


@given(st.integers(1, 10**9))
def test_alpha_trailing_zero(n):
    assert alpha(3 * n) == alpha(n)


@given(st.integers(1, 10**9), st.integers(0, 3))
def test_beta_append_digit(n, d):
    ds = to_base(n, 7) + [d]
    expect = sum(1 for i, x in enumerate(ds)
                 if x == 1 and (i + 1 == len(ds) or ds[i + 1] not in (4, 5, 6)))
    assert beta(7 * n + d) == expect


def test_gain_bounds():
    auto = AUTOMATA["beta"]
    assert auto.gain_bounds(0) == ((0, 0), (1, 1))
    assert auto.gain_bounds(4)[0] == (0, 4)


@pytest.mark.parametrize("stat,target,limit,expect", [
    ("alpha", 4, 10**4, 1640),
    ("alpha", 4, 10**5, 1640),
    ("beta", 4, 10**3, 400),
    ("gamma", 4, 10**8, 97110800),
    ("gamma", 4, 10**7, None),
    ("alpha", 1, 10, 2),
    ("beta", 0, 5, 0),
])
def test_first_with(stat, target, limit, expect):
    assert first_with(stat, target, limit) == expect


@pytest.mark.parametrize("stat", ["alpha", "beta", "gamma"])
def test_search_matches_brute(stat):
    for target in range(0, 4):
        assert first_with(stat, target, 3 * 10**5) == first_with_brute(stat, target, 3 * 10**5)


def test_brute_workers_agree():
    assert first_with_brute("alpha", 4, 10**4, workers=2) == 1640
    assert first_with_brute("beta", 5, 10**5, workers=3) == first_with("beta", 5, 10**5)


def test_gcd_window_examples():
    rep = gcd_window(1, residue_window(0, 6), 0)
    assert rep.conjectured == 2 and rep.divides
    rep = gcd_window(2, residue_window(2, 6), 2)
    assert rep.conjectured == 6 and rep.divides
    rep = gcd_window(1, range(2, 9))
    assert rep.gcd == 2 == comb(2, 1)
    assert rep.stabilized and rep.equal


def test_gcd_window_validation():
    with pytest.raises(ValueError):
        gcd_window(3, [])
    with pytest.raises(ValueError):
        gcd_window(3, [3, 4], 0)
    with pytest.raises(ValueError):
        gcd_window(3, [0])
    with pytest.raises(ValueError):
        conjectured_gcd(3, 5)


@given(st.integers(1, 25), st.integers(1, 6))
def test_running_gcd_divides_every_sum(n, width):
    # r = 1 gives the zero sum, so start at 2
    rep = gcd_window(n, range(2, width + 2))
    for s in rep.sums:
        assert s % rep.gcd == 0
    assert rep.sums == [central_power_sum(n, r) for r in range(2, width + 2)]


@given(st.integers(1, 25), st.sampled_from([0, 1, 2]))
def test_window_monotone(n, residue):
    exps = residue_window(residue, 7)
    prev = None
    for w in range(1, 8):
        g = gcd_window(n, exps[:w], residue).gcd
        if prev is not None:
            assert prev % g == 0
        prev = g


def test_refined_values_with_extra_primes():
    # n = 2 = [2]_3 has alpha = 1; check that 3 really enters the gcd
    rep = gcd_window(2, residue_window(0, 6), 0)
    assert rep.extra["alpha"] == 1
    assert rep.gcd == 6 * 3
    # n = 1 = [1]_7 has beta = 1
    rep = gcd_window(1, residue_window(1, 6), 1)
    assert rep.extra["beta"] == 1
    assert rep.gcd == 2 * 7


def test_gcd_matches_direct_fold():
    exps = residue_window(1, 5)
    acc = 0
    for r in exps:
        acc = gcd(acc, central_power_sum(8, r))
    assert gcd_window(8, exps, 1).gcd == acc
