import math

import numpy as np
import pytest

from zetamoll.errors import InvalidArgumentError
from zetamoll.series import BivariateJet, LaurentSeries, TruncatedSeries
from zetamoll.special import EULER_C0, STIELTJES, zeta_laurent_jet


def test_series_mul_matches_polynomial():
    a = TruncatedSeries(np.array([1.0, 2.0, 3.0]))
    b = TruncatedSeries(np.array([-1.0, 0.5, 0.0]))
    prod = a * b
    full = np.convolve(a.coeffs, b.coeffs)
    assert np.allclose(prod.coeffs, full[:3])


def test_series_exp_vs_reference():
    a = TruncatedSeries(np.array([0.3, -1.2, 0.7, 0.1]))
    e = a.exp()
    for u in (0.0, 0.01, -0.02):
        assert e.eval(u) == pytest.approx(math.exp(a.eval(u)), rel=1e-6)


def test_laurent_pole_cancellation_and_guard():
    order = 5
    u = TruncatedSeries.variable(order)
    pos = zeta_laurent_jet(u, order)
    neg = zeta_laurent_jet(-1.0 * u, order)
    total = pos + neg
    assert total.constant_term() == pytest.approx(2 * EULER_C0, rel=1e-14)
    with pytest.raises(InvalidArgumentError):
        pos.taylor()  # pole has not cancelled


def test_zeta_laurent_remark_identity():
    # zeta(1+s) + zeta(1-s) y^s = 2 C0 - log y + O(s)
    order = 6
    u = TruncatedSeries.variable(order)
    for y in (2 * math.pi, 0.5, 17.3):
        total = zeta_laurent_jet(u, order) + zeta_laurent_jet(-1.0 * u, order) * (
            math.log(y) * u
        ).exp()
        assert total.constant_term() == pytest.approx(
            2 * EULER_C0 - math.log(y), rel=1e-13
        )


def test_zeta_laurent_euler_constant_from_independent_oracle():
    # independent oracle: symmetrized Euler-Maclaurin values near s = 0
    from conftest import zeta_oracle

    s = 1e-3
    c0_est = (zeta_oracle(1 + s) - 1 / s + zeta_oracle(1 - s) + 1 / s).real / 2.0
    series = zeta_laurent_jet(TruncatedSeries.variable(2), 2)
    assert series.series.coeffs[0] == pytest.approx(c0_est, abs=5e-8)
    assert series.series.coeffs[0] == pytest.approx(0.5772156649, abs=1e-10)
    assert series.pole == 1.0


def test_zeta_laurent_nonzero_base():
    order = 4
    s0 = 0.25
    comp = zeta_laurent_jet(TruncatedSeries.variable(order, shift=s0), order)
    assert isinstance(comp, TruncatedSeries)
    # value and first derivative against the direct Laurent sum
    def direct(s):
        acc = 1.0 / s
        for k, g in enumerate(STIELTJES):
            acc += ((-1) ** k) * g * s**k / math.factorial(k)
        return acc

    assert comp.coeffs[0] == pytest.approx(direct(s0), rel=1e-14)
    h = 1e-6
    fd = (direct(s0 + h) - direct(s0 - h)) / (2 * h)
    assert comp.coeffs[1] == pytest.approx(fd, rel=1e-8)


def test_zeta_laurent_order_guard():
    with pytest.raises(InvalidArgumentError):
        zeta_laurent_jet(TruncatedSeries.variable(13), 13)


def test_jet_mul_truncation_commutes(rng):
    order = 6
    for _ in range(5):
        big = order + 3
        a = BivariateJet((0.1, -0.2), big, _random_triangular(rng, big))
        b = BivariateJet((0.1, -0.2), big, _random_triangular(rng, big))
        full_then_trunc = (a * b).truncate(order)
        trunc_then_mul = a.truncate(order) * b.truncate(order)
        assert np.allclose(
            full_then_trunc.coeffs, trunc_then_mul.coeffs, rtol=1e-13, atol=1e-13
        )


def _random_triangular(rng, order):
    g = rng.standard_normal((order + 1, order + 1))
    for i in range(order + 1):
        g[i, order + 1 - i :] = 0.0
    return g


def test_jet_exp_linear_derivatives():
    ca, cb = -1.7, 0.9
    base = (0.05, -0.03)
    jet = BivariateJet.exp_linear(ca, cb, base, 4)
    val = math.exp(ca * base[0] + cb * base[1])
    assert jet.value() == pytest.approx(val, rel=1e-15)
    assert jet.derivative(1, 0) == pytest.approx(ca * val, rel=1e-14)
    assert jet.derivative(2, 1) == pytest.approx(ca * ca * cb * val, rel=1e-13)
    with pytest.raises(InvalidArgumentError):
        jet.derivative(3, 2)


def test_jet_from_sum_series():
    # f(a, b) = (a + b)^2 around (0, 0)
    series = TruncatedSeries(np.array([0.0, 0.0, 1.0]))
    jet = BivariateJet.from_sum_series(series, (0.0, 0.0), 2)
    assert jet.coeffs[2, 0] == 1.0
    assert jet.coeffs[1, 1] == 2.0
    assert jet.coeffs[0, 2] == 1.0


def test_jet_incompatible_bases():
    a = BivariateJet((0.0, 0.0), 2)
    b = BivariateJet((0.1, 0.0), 2)
    with pytest.raises(InvalidArgumentError):
        _ = a + b
