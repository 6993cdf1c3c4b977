from math import comb

import pytest
from hypothesis import given, strategies as st

from qsum.exact import ONE, ZERO, LaurentPoly, lp_eval, monomial, one_minus_q_pow, lp_div_exact
from qsum.numeric import schmidt_c_int
from qsum.qcore import qbinom
from qsum.schmidt import (
    TCParams, c2_closed, c_triangular, c_via_t, check_c_routes, check_legendre, check_t_closed,
    check_t_multisum, check_zud, legendre_forward, legendre_inverse, random_sequence, t_closed,
    t_direct, t_multisum, zud_quantity,
)

# Frozen from a sympy evaluation of the defining sum with rational-function
# cancellation (independent of the exact-division code used here).
FROZEN_T = {
    (2, 1, 2): [(-1, 1), (0, 1), (1, 2), (2, 1), (3, 1)],
    (3, 1, 3): [(-3, 1), (-2, 2), (-1, 5), (0, 7), (1, 11), (2, 12), (3, 14), (4, 12), (5, 11),
                (6, 7), (7, 5), (8, 2), (9, 1)],
    (4, 2, 2): [(-4, 1), (-3, 1), (-2, 2), (-1, 3), (0, 5), (1, 5), (2, 7), (3, 7), (4, 8),
                (5, 7), (6, 7), (7, 5), (8, 5), (9, 3), (10, 2), (11, 1), (12, 1)],
    (3, 2, 5): [(-12, 1), (-11, 5), (-10, 15), (-9, 35), (-8, 70), (-7, 121), (-6, 185),
                (-5, 255), (-4, 319), (-3, 364), (-2, 380), (-1, 364), (0, 319), (1, 255),
                (2, 185), (3, 121), (4, 70), (5, 35), (6, 15), (7, 5), (8, 1)],
}
FROZEN_C = {
    3: [[(0, 1)], [(0, 1), (1, 2), (2, 1)],
        [(0, 2), (1, 7), (2, 15), (3, 16), (4, 13), (5, 7), (6, 5), (7, 2), (8, 1)]],
    4: [[(0, 1)], [(0, 1), (1, 3), (2, 3), (3, 1)],
        [(0, 2), (1, 10), (2, 32), (3, 61), (4, 83), (5, 78), (6, 61), (7, 40), (8, 28), (9, 16),
         (10, 9), (11, 3), (12, 1)]],
}


@pytest.mark.parametrize("key", sorted(FROZEN_T))
def test_frozen_t(key):
    assert t_direct(TCParams(*key)).terms() == FROZEN_T[key]


@pytest.mark.parametrize("r", sorted(FROZEN_C))
def test_frozen_c(r):
    assert [c.terms() for c in c_triangular(2, r)] == FROZEN_C[r]


def test_params_validation():
    with pytest.raises(ValueError):
        TCParams(2, 3, 2)
    with pytest.raises(ValueError):
        TCParams(2, 1, 0)
    with pytest.raises(ValueError):
        t_closed((3, 1, 4))
    with pytest.raises(ValueError):
        t_multisum((3, 1, 3))
    with pytest.raises(ValueError):
        c_via_t(2, 1)


def test_small_j_vanishes():
    # 2j < n makes the r = 2 closed form vanish
    assert t_direct((1, 0, 2)) == ZERO
    assert t_closed((5, 2, 2)) == ZERO


def test_c_first_rows():
    assert [c.to_text() for c in c_triangular(2, 2)] == ["1", "1 + q", "2 + 3*q + 3*q^2 + q^3 + q^4"]
    assert lp_eval(c2_closed(2), 1) == 10
    assert all(c == ONE for c in c_triangular(5, 1))


@pytest.mark.parametrize("r", [2, 3, 4])
def test_c_routes(r):
    for n in range(6):
        assert check_c_routes(n, r).ok


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_c_at_one_matches_integer_solve(r):
    rows = c_triangular(8, r)
    assert [lp_eval(c, 1) for c in rows] == [schmidt_c_int(n, r) for n in range(9)]


@pytest.mark.parametrize("n", range(0, 16))
def test_c2_closed_sum_of_cubes(n):
    assert c2_closed(n) == c_triangular(n, 2)[n]
    assert lp_eval(c2_closed(n), 1) == sum(comb(n, j) ** 3 for j in range(n + 1))


@given(st.integers(0, 7), st.integers(2, 5), st.data())
def test_zud_membership(n, r, data):
    j = data.draw(st.integers(0, n))
    assert check_zud(n, j, r).ok
    z = zud_quantity((n, j, r))
    assert z.min_exp >= 0 or not z


@pytest.mark.parametrize("r", [2, 3])
def test_closed_forms(r):
    for n in range(9):
        for j in range(n + 1):
            assert check_t_closed(n, j, r).ok


@pytest.mark.parametrize("r", [4, 5, 6, 7])
def test_multisums(r):
    for n in range(6):
        for j in range(n + 1):
            assert check_t_multisum(n, j, r).ok


def test_legendre_examples():
    delta0 = [ONE] + [ZERO] * 5
    for n in range(6):
        assert legendre_forward(delta0, n) == monomial(n * (n - 1) // 2)
        delta_n = [ZERO] * n + [ONE]
        assert legendre_forward(delta_n, n) == ONE
        expect = lp_div_exact(one_minus_q_pow(1) * qbinom(2 * n, n), one_minus_q_pow(n + 1))
        assert legendre_inverse(delta0, n) == (expect if n % 2 == 0 else -expect)
    b = [LaurentPoly([3, 1])]
    assert legendre_inverse(b, 0) == b[0]
    with pytest.raises(ValueError):
        legendre_forward([ONE], 2)


@given(st.integers(0, 5), st.integers(0, 10**6))
def test_legendre_roundtrip(n, seed):
    assert check_legendre(n, seed).ok


def test_random_sequence_is_seeded():
    assert random_sequence(4, 7) == random_sequence(4, 7)
    assert random_sequence(4, 7) != random_sequence(4, 8)
