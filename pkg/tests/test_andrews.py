import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

import qsum.andrews as andrews_mod
from oracles import andrews_direct, andrews_limit_direct
from qsum.andrews import (
    AndrewsParams, FactorTerm, PoleHit, andrews_check, andrews_limit_bridge, andrews_limit_check,
    andrews_side, andrews_terms, sample_points, schmidt_specialization, terms_to_fraction,
)
from qsum.exact import lp_eval

exps = st.integers(-4, 4)


@st.composite
def params(draw, m_max=2, n_max=3):
    m = draw(st.integers(1, m_max))
    N = draw(st.integers(0, n_max))
    ea = draw(exps)
    eb = tuple(draw(exps) for _ in range(m))
    ec = tuple(draw(exps) for _ in range(m))
    return AndrewsParams(m, N, ea, eb, ec)


def test_frozen_value():
    # Both sides evaluated by hand from the product form (rational arithmetic).
    p = AndrewsParams(2, 1, -5, (-2, -1), (-1, -1))
    x = Fraction(2, 3)
    assert andrews_side("lhs", p, x) == Fraction(6643, 6859)
    assert andrews_side("rhs", p, x) == Fraction(6643, 6859)


def test_params_validation():
    with pytest.raises(ValueError):
        AndrewsParams(2, 1, 0, (1,), (1, 1))
    with pytest.raises(ValueError):
        AndrewsParams(1, 1, 2, (1,), (1,), a_to_one=True)
    with pytest.raises(ValueError):
        AndrewsParams(1, 1, 0, (1,), (1,), c_to_infinity=True)
    with pytest.raises(PoleHit):
        andrews_side("lhs", AndrewsParams(1, 1, -3, (1,), (2,)), 1)


@given(params(m_max=3, n_max=3), st.sampled_from([Fraction(2, 3), Fraction(-3, 5), Fraction(7, 2)]))
def test_sides_match_direct_evaluation(p, x):
    try:
        want_l, want_r = andrews_direct(p.m, p.N, p.e_a, p.e_b, p.e_c, x)
    except ZeroDivisionError:
        assume(False)
    try:
        got_l = andrews_side("lhs", p, x)
        got_r = andrews_side("rhs", p, x)
    except PoleHit:
        assume(False)
    assert got_l == want_l
    assert got_r == want_r


@given(params())
def test_certificates_agree(p):
    a = andrews_check(p, "height")
    b = andrews_check(p, "points")
    assert a.status == b.status
    assert a.status in ("verified", "skipped")


def test_certificate_contents():
    p = AndrewsParams(2, 2, -7, (-2, -1), (-1, -3))
    res = andrews_check(p, "points")
    assert res.status == "verified"
    cert = res.witness["certificate"]
    assert cert["points"] > cert["degree_bound"]
    res = andrews_check(p, "height")
    assert res.witness["certificate"]["kind"] == "height"


@pytest.mark.parametrize("method", ["height", "points"])
def test_false_identity_is_caught(monkeypatch, method):
    real = andrews_mod.andrews_terms

    def broken(p, side):
        terms = real(p, side)
        if side == "rhs":
            terms.append(FactorTerm().monomial(p.N + 1).factor(3, -1).factor(1))
        return terms

    monkeypatch.setattr(andrews_mod, "andrews_terms", broken)
    res = andrews_check(AndrewsParams(2, 2, -7, (-2, -1), (-1, -3)), method)
    assert res.status == "counterexample"


def test_unknown_method():
    with pytest.raises(ValueError):
        andrews_check(AndrewsParams(1, 1, -3, (1,), (2,)), "magic")


def test_structural_pole_is_skipped():
    # aq/b_1 = 1 makes (aq/b_1)_k vanish for k >= 1
    res = andrews_check(AndrewsParams(1, 2, 0, (1,), (3,)), "height")
    assert res.status == "skipped"


def test_sample_points_are_distinct_and_deterministic():
    pts = sample_points(50)
    assert len(set(pts)) == 50
    assert pts == sample_points(50)
    assert all(x not in (0, 1, -1) for x in pts)


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", range(1, 6))
def test_schmidt_specializations(n, r):
    for j in range(n + 1):
        for method in ("height", "points"):
            assert andrews_check(schmidt_specialization(n, j, r), method).status == "verified"


def test_specialization_shapes():
    assert schmidt_specialization(3, 1, 4).m == 2
    assert schmidt_specialization(3, 1, 5).m == 2
    assert schmidt_specialization(3, 1, 7).m == 3
    with pytest.raises(ValueError):
        schmidt_specialization(3, 1, 1)


@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_limit_form_against_direct_evaluation(m, N, data):
    n = tuple(data.draw(st.integers(1, 3)) for _ in range(m))
    x = Fraction(3, 7)
    ln, ld = terms_to_fraction(andrews_mod.andrews_limit_terms(m, N, n, "lhs"))
    rn, rd = terms_to_fraction(andrews_mod.andrews_limit_terms(m, N, n, "rhs"))
    want_l, want_r = andrews_limit_direct(m, N, n, x)
    assert lp_eval(ln, x) / lp_eval(ld, x) == want_l
    assert lp_eval(rn, x) / lp_eval(rd, x) == want_r
    assert andrews_limit_check(m, N, n).ok


def test_limit_broadcast_scalar():
    assert andrews_limit_check(3, 2, (2,)).ok
    with pytest.raises(ValueError):
        andrews_mod.andrews_limit_terms(3, 2, (1, 2), "lhs")


@pytest.mark.parametrize("n", [(1, 1, 1), (2, 1, 3), (1, 2, 1, 2), (2, 2, 1, 3, 1)])
def test_limit_bridge_to_multisum(n):
    assert andrews_limit_bridge(n).ok


def test_lhs_term_count():
    p = AndrewsParams(1, 3, -5, (2,), (3,))
    assert len(andrews_terms(p, "lhs")) == 4
