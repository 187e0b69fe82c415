import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as si

from wienercert.bernstein import (
    CERTIFIED,
    DIVERGENT,
    INCONCLUSIVE,
    ResolutionError,
    ScaleRange,
    bernstein_sum_1d,
    bernstein_sum_nd,
    dyadic_step,
    tail_verdict,
)
from wienercert.field import SampledField, sample


def gauss1(n=2**14, R=8.0):
    return sample(lambda x: np.exp(-x[..., 0] ** 2), [-R], [R], [n])


def hat1(n=4001, R=2.0):
    return sample(lambda x: np.maximum(0, 1 - np.abs(x[..., 0])), [-R], [R], [n])


def gaussian_difference_norm(h):
    # Plancherel: ||f(.+h) - f(.-h)||_2^2 = (1/2pi) int 4 sin^2(h xi) |fhat|^2, fhat = sqrt(pi) e^{-xi^2/4}
    # 4 sin^2(h xi) = 2 - 2 cos(2 h xi); the oscillatory half goes through the cosine-weighted rule
    g = lambda xi: math.pi * math.exp(-xi * xi / 2)  # noqa: E731
    flat, _ = si.quad(g, -40, 40)
    osc, _ = si.quad(g, 0, 40, weight="cos", wvar=2 * h)
    return math.sqrt((2 * flat - 4 * osc) / (2 * math.pi))


def hat_difference_norm(h):
    t = sp.symbols("t", real=True)
    hs = sp.nsimplify(h)
    hat = lambda s: sp.Piecewise((0, sp.Abs(s) >= 1), (1 - sp.Abs(s), True))  # noqa: E731
    expr = (hat(t + hs) - hat(t - hs)) ** 2
    val = sp.integrate(sp.piecewise_fold(expr.rewrite(sp.Piecewise)), (t, -1 - hs, 1 + hs))
    return math.sqrt(float(val))


def test_scale_range_contract():
    assert list(ScaleRange(-1, 2)) == [-1, 0, 1, 2]
    assert len(ScaleRange.parse("-3..4")) == 8
    with pytest.raises(ValueError):
        ScaleRange(3, 2)
    with pytest.raises(ValueError):
        ScaleRange(0, 65)
    assert dyadic_step(2) == pytest.approx(math.pi / 4)


def test_zero_field():
    f = SampledField((0.0,), (0.01,), np.zeros(101))
    rep = bernstein_sum_1d(f, ScaleRange(-2, 5))
    assert rep.partial_sum == 0 and all(v == 0 for v in rep.terms.values())
    assert rep.verdict == CERTIFIED
    rep2 = bernstein_sum_nd(SampledField((0.0, 0.0), (0.1, 0.1), np.zeros((11, 11))), [ScaleRange(0, 4)] * 2)
    assert rep2.partial_sum == 0 and rep2.verdict == CERTIFIED


def test_gaussian_terms_match_transform_side():
    rng = ScaleRange(-10, 8)
    rep = bernstein_sum_1d(gauss1(), rng)
    assert rep.verdict == CERTIFIED
    for nu in rng:
        want = 2 ** (nu / 2) * gaussian_difference_norm(dyadic_step(nu))
        assert rep.terms[(nu,)] == pytest.approx(want, rel=1e-2)
    assert rep.partial_sum == pytest.approx(math.fsum(rep.terms.values()))


def test_gaussian_term_asymptotics():
    rep = bernstein_sum_1d(gauss1(), ScaleRange(-10, 8))
    fine = rep.terms[(8,)] / rep.terms[(7,)]
    coarse = rep.terms[(-10,)] / rep.terms[(-9,)]
    assert fine == pytest.approx(2**-0.5, rel=2e-3)
    assert coarse == pytest.approx(2**-0.5, rel=1e-6)


@pytest.mark.parametrize("nu", [-1, 1, 3])
def test_hat_terms_against_symbolic(nu):
    h = dyadic_step(nu)
    rep = bernstein_sum_1d(hat1(), ScaleRange(nu, nu), shells=2)
    assert rep.terms[(nu,)] == pytest.approx(2 ** (nu / 2) * hat_difference_norm(h), rel=1e-5)


def test_hat_is_certified():
    assert bernstein_sum_1d(hat1(), ScaleRange(-8, 8)).verdict == CERTIFIED


def test_separable_gaussian_factorizes():
    g2 = sample(lambda x: np.exp(-(x**2).sum(-1)), [-8.0, -8.0], [8.0, 8.0], [513, 513])
    g1 = sample(lambda x: np.exp(-x[..., 0] ** 2), [-8.0], [8.0], [513])
    rng = ScaleRange(-4, 6)
    r2 = bernstein_sum_nd(g2, [rng, rng])
    r1 = bernstein_sum_1d(g1, rng)
    assert r2.partial_sum == pytest.approx(r1.partial_sum**2, rel=1e-6)
    assert r2.terms[(0, 3)] == pytest.approx(r1.terms[(0,)] * r1.terms[(3,)], rel=1e-6)
    assert r2.verdict == CERTIFIED
    assert len(r2.tail_ratios) == 2


def test_hat_tensor_hat_certified():
    h2 = sample(lambda x: np.prod(np.maximum(0, 1 - np.abs(x)), axis=-1), [-2.0, -2.0], [2.0, 2.0], [257, 257])
    assert bernstein_sum_nd(h2, [ScaleRange(-4, 6)] * 2).verdict == CERTIFIED


def test_rough_field_diverges():
    # lacunary series with Hoelder exponent 1/4: ||Delta_h f||_2 ~ h^{1/4}, so terms grow like 2^{nu/4}
    gamma, phi = 0.25, 1.37

    def fn(x):
        t = x[..., 0]
        s = sum(2.0 ** (-k * gamma) * np.cos(phi * 2.0**k * t) for k in range(18))
        return np.exp(-t * t) * s

    f = sample(fn, [-6.0], [6.0], [2**17 + 1])
    rep = bernstein_sum_1d(f, ScaleRange(-2, 12))
    assert rep.verdict == DIVERGENT
    ts = [rep.terms[(nu,)] for nu in range(8, 13)]
    assert all(b >= a for a, b in zip(ts, ts[1:]))
    assert rep.tail_ratio >= 1


def test_resolution_error_names_limit():
    f = hat1(n=101)  # spacing 0.04 -> finest usable scale 6
    with pytest.raises(ResolutionError, match="up to 6"):
        bernstein_sum_1d(f, ScaleRange(0, 7))
    bernstein_sum_1d(f, ScaleRange(0, 6))


def test_tail_verdict_examples():
    geo = {(k,): 2.0**-k for k in range(0, 12)}
    v, rho = tail_verdict(geo, [ScaleRange(0, 11)], ends="high")
    assert v == CERTIFIED and rho[0] == pytest.approx(0.5)
    const = {(k,): 1.0 for k in range(0, 12)}
    assert tail_verdict(const, [ScaleRange(0, 11)])[0] == DIVERGENT
    # 1/k^2 over the short range 1..20 still fits (17/20)^{2/3} ~ 0.90 on the last four shells;
    # the blind spot shows once the window sits far out
    slow = {(k,): 1.0 / k**2 for k in range(1, 61)}
    v, rho = tail_verdict(slow, [ScaleRange(1, 60)], ends="high")
    assert v == INCONCLUSIVE
    assert rho[0] == pytest.approx((57 / 60) ** (2 / 3))
    assert rho[0] < 1


def test_tail_verdict_too_few_shells():
    terms = {(k,): 1.0 for k in range(3)}
    assert tail_verdict(terms, [ScaleRange(0, 2)])[0] == INCONCLUSIVE


def test_report_serializations():
    rep = bernstein_sum_1d(hat1(n=401), ScaleRange(0, 5))
    d = rep.to_dict()
    assert set(d["terms"]) == {str(k) for k in range(6)}
    rows = rep.csv_rows()
    assert rows[0] == ["s1", "step_product", "term"] and len(rows) == 7


small_fields = st.lists(st.floats(-4, 4), min_size=8, max_size=40).map(lambda v: SampledField((0.0,), (0.25,), np.array(v)))


@settings(max_examples=30, deadline=None)
@given(small_fields, st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3))
def test_scaling_covariance(f, c):
    rng = ScaleRange(-3, 3)
    a = bernstein_sum_1d(f, rng)
    b = bernstein_sum_1d(f.scaled(c), rng)
    assert b.partial_sum == pytest.approx(abs(c) * a.partial_sum, rel=1e-9, abs=1e-12)
    for k in a.terms:
        assert b.terms[k] == pytest.approx(abs(c) * a.terms[k], rel=1e-9, abs=1e-12)
    if a.partial_sum > 1e-9:
        assert a.verdict == b.verdict


@settings(max_examples=30, deadline=None)
@given(small_fields, st.integers(-4, 0), st.integers(0, 3), st.integers(0, 3))
def test_monotone_truncation(f, lo, extra_lo, hi):
    small = bernstein_sum_1d(f, ScaleRange(lo, hi))
    big = bernstein_sum_1d(f, ScaleRange(lo - extra_lo, hi))
    assert big.partial_sum >= small.partial_sum - 1e-12
