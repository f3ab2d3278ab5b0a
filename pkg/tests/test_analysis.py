import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rng_for
from polymul.analysis import (Recurrence, check_sum_lemmas, closed_form_size, ifp_recurrence,
                              imp_recurrence, inplace_recurrence, isp_recurrence, mp_constants,
                              predict_fp_ratio, predict_mp_bound, predict_sp_ratio, unroll)
from polymul.harness import build, make_instance, run_instance
from polymul.regspace import InputView, Session
from polymul.ring import Ring

R = Ring(998244353)


def test_unroll_sums_levels():
    rec = Recurrence(Fraction(1, 2), 0, lambda n: n, lambda n: 100, stop=2)
    u = unroll(rec, 16)
    assert [lv[0] for lv in u.levels] == [16, 8, 4, 2]
    assert u.final_size == 1 and u.total == 30 + 100


def test_unroll_rejects_stalled_size():
    # alpha = 3/4, beta = 1 has fixed point 4
    with pytest.raises(ValueError):
        unroll(Recurrence(Fraction(3, 4), 1, lambda n: 1, stop=4), 100)
    assert unroll(Recurrence(Fraction(3, 4), 1, lambda n: 1, stop=5), 100).final_size == 4


def test_alpha_range():
    with pytest.raises(ValueError):
        Recurrence(1, 0, lambda n: 0)


@pytest.mark.parametrize("c", [0, 1, 2, 4])
def test_shrink_rules_match_loops(c):
    ifp = inplace_recurrence("ifp_hi", c, lambda n: 0)
    isp = inplace_recurrence("isp_lo", c, lambda n: 0)
    for n in range(c + 2, 400):
        assert ifp.step(n) == n - (n + 1) // (c + 3)
        assert isp.step(n) == n - n // (c + 2)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(Fraction(3, 4), 1), (Fraction(2, 3), 0), (Fraction(4, 5), Fraction(3, 5))]),
       st.integers(10, 10**6))
def test_closed_form_envelope(ab, n):
    a, b = ab
    rec = Recurrence(a, b, lambda x: 0, stop=1)
    x, i = n, 0
    while x > 8 and i < 60:
        gap = closed_form_size(a, b, n, i) - x
        assert 0 <= gap < b * a ** i + 1 / (1 - a)
        x, i = rec.step(x), i + 1


def test_closed_form_drift_exceeds_one():
    # floors accumulate: the gap is not bounded by 1
    a, b, n = Fraction(3, 4), 1, 1000
    rec = Recurrence(a, b, lambda x: 0)
    x, worst = n, Fraction(0)
    for i in range(15):
        worst = max(worst, closed_form_size(a, b, n, i) - x)
        x = rec.step(x)
    assert worst > 1


def test_ratio_constants():
    assert predict_fp_ratio(2) == 11
    assert predict_sp_ratio(0) == 5
    assert predict_sp_ratio(4) == 13
    with pytest.raises(ValueError):
        predict_fp_ratio(-1)


def test_mp_constants_quadratic():
    mu, nu = mp_constants(2, 2)
    assert (mu, nu) == (1, Fraction(1, 7))
    b = predict_mp_bound(2, 10, gamma=2)
    assert b.coefficient == Fraction(8, 7) and b.value == Fraction(800, 7)


def test_mp_constants_karatsuba_exponent():
    mu, nu = mp_constants(2, mpmath.log(3, 2))
    g = math.log2(3)
    assert float(mu) == pytest.approx(1 / (4 ** (g - 1) - 3 ** (g - 1)), rel=1e-12)
    assert float(nu) == pytest.approx(1 / (4 ** g - 3 ** g), rel=1e-12)
    assert float(mu) == pytest.approx(2.86950, abs=1e-5)
    assert float(nu) == pytest.approx(0.30345, abs=1e-5)


def test_quasi_linear_log_base():
    b = predict_mp_bound(2, 1024, M=lambda n: n, quasi_linear=True)
    assert b.log_base == Fraction(4, 3)
    assert b.value > 1024 * math.log(1024, 4 / 3)
    with pytest.raises(ValueError):
        predict_mp_bound(2, 10, quasi_linear=True)
    with pytest.raises(ValueError):
        predict_mp_bound(2, 10, gamma=1)


@pytest.mark.parametrize("a,b", [(Fraction(3, 4), 1), (Fraction(4, 5), Fraction(3, 5)), (Fraction(1, 2), 0)])
def test_sum_lemmas(a, b):
    checks = check_sum_lemmas(a, b, 10**4, 12)
    assert all(c.passed for c in checks), [(c.name, c.lhs, c.rhs) for c in checks]


def _cost(profile):
    cache = {}

    def cost(k):
        if k not in cache:
            inst = make_instance(profile.kind, k, R, rng_for(k))
            s = Session(R)
            profile.run(InputView(inst.f), InputView(inst.g), inst.out.copy(), s)
            cache[k] = s.counter.total()
        return cache[k]
    return cost


@pytest.mark.parametrize("n", [10, 57, 256])
def test_analytic_recurrences_bound_measurements(n):
    for algo in ("ifp", "isplo", "imp"):
        b = build(algo, "karatsuba")
        inst = make_instance(b.kind, n, R, rng_for(n))
        s = Session(R)
        run_instance(b, inst, s)
        bases = b.in_place.bases
        if algo == "ifp":
            rec = ifp_recurrence(b.c, _cost(bases[0]), lambda k: 2 * k * k)
        elif algo == "isplo":
            rec = isp_recurrence(b.c, _cost(bases[0]), _cost(bases[1]), lambda k: k * k)
        else:
            rec = imp_recurrence(b.c, n, _cost(bases[0]), lambda k: 2 * n * k)
        assert s.counter.total() <= unroll(rec, n).total


def test_mp_growth_with_karatsuba_base():
    # Karatsuba sits in the polynomial regime (gamma = log2 3), where T(n)/M(n)
    # tends to mu + nu from below.
    b = build("imp", "karatsuba")
    mu, nu = mp_constants(b.c, mpmath.log(3, 2))
    target = float(mu + nu)
    ratios = {}
    for e in range(6, 13):
        n = 2 ** e
        inst = make_instance("MP", n, R, rng_for(n), oracle=False)
        s, sb = Session(R), Session(R)
        run_instance(b, inst, s)
        run_instance(b.base, inst, sb)
        ratios[n] = s.counter.total() / sb.counter.total()
    seq = [ratios[n] for n in sorted(ratios)]
    assert seq == sorted(seq)
    for n in (2 ** 10, 2 ** 11, 2 ** 12):
        assert abs(ratios[n] / target - 1) <= 0.25
