"""End-to-end acceptance criteria, one test per criterion.

Every comparison is exact.  Each test prints a single
``CRITERION k: PASS|FAIL ...`` line (visible with ``pytest -s`` or in the
verbose log) before asserting.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from qsum import conjectures as cj
from qsum import numeric as nm
from qsum.andrews import AndrewsParams, andrews_check, andrews_limit_check, schmidt_specialization
from qsum.exact import LaurentPoly, lp_eval, monomial
from qsum.qcore import qbinom
from qsum.schmidt import (
    c2_closed, c_triangular, check_c_routes, check_t_closed, check_t_multisum, check_zud,
    t_direct, TCParams,
)
from qsum.sums import (
    S, SumSpec, alt_sum, check_duality, check_lemma_rec, check_m3, check_positivity,
    check_qdixon, check_qpfaff, check_thm1, qdixon_lhs, thm1_rhs,
)

ONE = LaurentPoly.constant(1)
ZERO = LaurentPoly.constant(0)


@pytest.fixture
def announce(capsys):
    start = time.perf_counter()

    def emit(k, ok, detail):
        secs = time.perf_counter() - start
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} {detail} [{secs:.1f}s]")
        return ok
    return emit


def tuples(ms, values):
    for m in ms:
        yield from itertools.product(values, repeat=m)


def statuses(results):
    out = {"verified": 0, "counterexample": 0, "skipped": 0}
    for r in results:
        out[r.status] += 1
    return out


def test_criterion_1_multisum_identity(announce):
    bad = [n for n in tuples((3, 4, 5), range(1, 5)) if not check_thm1(n).ok]
    total = 4 ** 3 + 4 ** 4 + 4 ** 5
    assert announce(1, not bad, f"{total - len(bad)}/{total} instances")
    assert not bad


def test_criterion_2_positivity(announce):
    results = [check_positivity(n, j) for n in tuples(range(1, 6), range(1, 5))
               for j in range(len(n))]
    counts = statuses(results)
    ok = counts["verified"] == len(results)
    assert announce(2, ok, f"{counts['verified']}/{len(results)} in N[q]")
    assert ok


def test_criterion_3_base_cases_recurrence_duality(announce):
    failures = []
    for n1 in range(1, 11):
        if S(SumSpec((n1,), 0)) != ZERO:
            failures.append(("S(n1;0)", n1))
        for n2 in range(1, 11):
            if S(SumSpec((n1, n2), 1)) != ONE:
                failures.append(("S(n1,n2;1)", n1, n2))
            if S(SumSpec((n1, n2), 0)) != monomial(n1 * n2):
                failures.append(("S(n1,n2;0)", n1, n2))
    rng = random.Random(20240601)
    lemma = duality = 0
    for _ in range(200):
        # the recurrence is stated for m >= 3
        m = rng.randint(3, 5)
        n = tuple(rng.randint(1, 4) for _ in range(m))
        j = rng.randint(-2, m)
        if not check_lemma_rec(n, j).ok:
            failures.append(("lemma", n, j))
        lemma += 1
    for _ in range(200):
        m = rng.randint(1, 5)
        n = tuple(rng.randint(1, 4) for _ in range(m))
        if not check_duality(n).ok:
            failures.append(("duality", n))
        duality += 1
    ok = not failures
    assert announce(3, ok, f"base cases n<=10, {lemma} recurrence + {duality} duality specs,"
                           f" {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_4_dixon_pfaff(announce):
    dixon = [check_qdixon(*t) for t in itertools.product(range(1, 9), repeat=3)]
    pfaff = []
    for n1, n2, n3 in itertools.product(range(1, 6), repeat=3):
        lim = min(n1, n2, n3)
        pfaff.extend(check_qpfaff(n1, n2, n3, k) for k in range(-lim, lim + 1))
    m3 = [check_m3(*t, j) for t in itertools.product(range(1, 5), repeat=3) for j in range(3)]
    bad = [r for r in dixon + pfaff + m3 if not r.ok]
    ok = not bad
    assert announce(4, ok, f"q-Dixon {len(dixon)}, q-Pfaff {len(pfaff)}, m=3 closed {len(m3)},"
                           f" {len(bad)} counterexamples")
    assert ok


def test_criterion_5_calkin(announce):
    results = [r for n in range(1, 31) for r in nm.check_calkin(n)]
    bad = [r for r in results if r.status != "verified"]
    assert nm.calkin_sum(4, 3) == nm.binomial(12, 4)
    ok = not bad and len(results) == 150
    assert announce(5, ok, f"{len(results) - len(bad)}/{len(results)} quotients, m=1..5, n<=30")
    assert ok


def test_criterion_6_schmidt_layer(announce):
    routes = [check_c_routes(n, r) for r in range(2, 6) for n in range(0, 9)]
    c2 = []
    for n in range(0, 51):
        value = c2_closed(n)
        same = n > 8 or value == c_triangular(n, 2)[n]
        at_one = lp_eval(value, 1) == sum(nm.binomial(n, j) ** 3 for j in range(n + 1))
        c2.append(same and at_one and value.is_nonneg())
    zud = [check_zud(n, j, r) for r in range(2, 7) for n in range(0, 9) for j in range(n + 1)]
    closed = [check_t_closed(n, j, r) for r in (2, 3) for n in range(0, 11) for j in range(n + 1)]
    multi = [check_t_multisum(n, j, r) for r in range(4, 8) for n in range(0, 7)
             for j in range(n + 1)]
    bad = [r for r in routes + zud + closed + multi if r.status != "verified"]
    ok = not bad and all(c2)
    assert announce(6, ok, f"c routes {len(routes)}, c2 n<=50 {sum(c2)}/{len(c2)}, "
                           f"zud {len(zud)}, t-closed {len(closed)}, t-multisum {len(multi)}")
    assert ok


def _andrews_grid(m, N, exps):
    for combo in itertools.product(exps, repeat=2 * m + 1):
        yield AndrewsParams(m, N, combo[0], combo[1:m + 1], combo[m + 1:])


def test_criterion_7_andrews(announce):
    height = {"verified": 0, "counterexample": 0, "skipped": 0}
    points = {"verified": 0, "counterexample": 0, "skipped": 0}
    exps = range(-4, 5)
    index = 0
    for m in (1, 2):
        for N in range(0, 4):
            for p in _andrews_grid(m, N, exps):
                height[andrews_check(p, "height").status] += 1
                # the rational-point certificate on a fixed 1-in-10 subsample
                if index % 10 == 0:
                    points[andrews_check(p, "points").status] += 1
                index += 1
    spec = [andrews_check(schmidt_specialization(n, j, r), method)
            for r in (2, 3) for n in range(1, 6) for j in range(n + 1)
            for method in ("height", "points")]
    limit = [andrews_limit_check(m, N, n) for m in (2, 3) for N in range(0, 4)
             for n in itertools.product(range(1, 4), repeat=m)]
    # r >= 4 multisum specializations: some hit structural poles, none may fail
    wide = [andrews_check(schmidt_specialization(n, j, r)) for r in range(4, 8)
            for n in range(1, 6) for j in range(n + 1)]
    spec_ok = (all(r.status == "verified" for r in spec)
               and all(r.ok for r in wide) and any(r.status == "verified" for r in wide))
    limit_ok = all(r.status == "verified" for r in limit)
    ok = (height["counterexample"] == 0 and points["counterexample"] == 0
          and height["verified"] > 0 and spec_ok and limit_ok)
    assert announce(7, ok, f"height {height['verified']} verified/{height['skipped']} poles, "
                           f"points {points['verified']}/{points['skipped']}, "
                           f"specializations {len(spec)} + r>=4 "
                           f"{statuses(wide)['verified']}/{len(wide)}, limit {len(limit)}")
    assert ok


def test_criterion_8_integer_suite(announce):
    rng = random.Random(49)
    rebino = []
    for _ in range(100):
        m = rng.randint(1, 4)
        rebino.append(nm.check_rebino(tuple(rng.randint(1, 6) for _ in range(m))))
    reports = {name: nm.check_divisibility_suite(name, 20, 7)
               for name in ("cor43", "cor44", "cor46", "cor47", "cor246", "cor248")}
    reports.update({name: nm.check_divisibility_suite(name, 40, 7)
                    for name in ("conj51", "conj52")})
    bad = [r for r in rebino if not r.ok]
    bad += [r for rep in reports.values() for r in rep.records if not r.ok]
    sizes = ", ".join(f"{k} {len(v.records)}" for k, v in reports.items())
    ok = not bad and all(v.records for v in reports.values())
    assert announce(8, ok, f"rebino 100, {sizes}")
    assert ok


def test_criterion_9_golden_digit_values(announce):
    values = (cj.alpha(185), cj.beta(2480), cj.gamma(3296))
    t0 = time.perf_counter()
    found = (cj.first_with("alpha", 4, 10**5), cj.first_with("beta", 4, 10**3),
             cj.first_with("gamma", 4, 2 * 10**8))
    fast = time.perf_counter() - t0
    t0 = time.perf_counter()
    brute = cj.first_with_brute("gamma", 4, 10**8)
    slow = time.perf_counter() - t0
    ok = (values == (2, 1, 1) and found == (1640, 400, 97110800) and brute == 97110800
          and fast < 60 and slow < 15 * 60)
    assert announce(9, ok, f"stats {values}, first {found} in {fast:.2f}s, "
                           f"brute gamma {brute} in {slow:.1f}s")
    assert ok


def test_criterion_10_gcd_windows(announce):
    reports = [cj.gcd_window(n, cj.residue_window(c, 6), c) for n in range(1, 61) for c in (0, 1, 2)]
    divides = all(r.divides for r in reports)
    equal = all(r.equal for r in reports)
    stable = sum(r.stabilized for r in reports)
    ok = divides and equal
    # "stabilized" here is the stricter heuristic that the running gcd is
    # constant on the trailing half of the window; equality is what is asserted
    assert announce(10, ok, f"{len(reports)} windows, divides {divides}, equal {equal}, "
                            f"trailing-half stable {stable}/{len(reports)}")
    assert ok


def test_criterion_11_cross_layer(announce):
    checks = []
    rng = random.Random(11)
    for n in tuples((3, 4, 5), range(1, 4)):
        checks.append(lp_eval(thm1_rhs(n), 1) == nm.calkingeneral_rhs(n))
        checks.append(lp_eval(alt_sum(SumSpec(n, len(n) - 1)), 1)
                      == nm.alt_sum_int(nm.IntSumSpec(n, form="cyclic")))
    for n in tuples(range(1, 6), range(1, 4)):
        j = rng.randint(0, len(n) - 1)
        value = lp_eval(S(SumSpec(n, j)), 1)
        expect = Fraction(nm.alt_sum_int(nm.IntSumSpec(n, form="cyclic")),
                          nm.binomial(n[0] + n[-1], n[0]))
        checks.append(value == expect)
    for t in itertools.product(range(1, 7), repeat=3):
        checks.append(lp_eval(qdixon_lhs(*t), 1) == nm.alt_sum_int(nm.IntSumSpec(t, form="cyclic")))
    for r in range(1, 6):
        for n in range(0, 9):
            checks.append(lp_eval(c_triangular(n, r)[n], 1) == nm.schmidt_c_int(n, r))
    for a in range(0, 16):
        for b in range(0, a + 1):
            checks.append(lp_eval(qbinom(a, b), 1) == nm.binomial(a, b))
    # t at q = 1 recombines with C(2j, j)^r into C(2n, n) c_n
    for r in (2, 3):
        for n in range(0, 8):
            total = sum(nm.binomial(2 * j, j) ** r * lp_eval(t_direct(TCParams(n, j, r)), 1)
                        for j in range(n + 1))
            checks.append(total == nm.binomial(2 * n, n) * nm.schmidt_c_int(n, r))
    ok = all(checks) and len(checks) >= 500
    assert announce(11, ok, f"{sum(checks)}/{len(checks)} q=1 evaluations agree")
    assert ok
