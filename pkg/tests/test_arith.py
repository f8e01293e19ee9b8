import math

import numpy as np
import pytest

from zetamoll import arith
from zetamoll.errors import InvalidArgumentError

from conftest import brute_dirichlet_convolve, divisors


def test_mobius_examples():
    mu = arith.sieve_mobius(30)
    assert mu.value(1) == 1.0  # empty product
    assert mu.value(4) == 0.0  # square factor
    assert mu.value(30) == -1.0  # three distinct primes
    assert mu.kind == "mobius"


def test_mobius_range_and_limit_zero():
    mu = arith.sieve_mobius(2000)
    assert set(np.unique(mu.values[1:])) <= {-1.0, 0.0, 1.0}
    with pytest.raises(InvalidArgumentError):
        arith.sieve_mobius(0)


def test_von_mangoldt_examples():
    lam = arith.sieve_von_mangoldt(10)
    assert lam.value(8) == pytest.approx(math.log(2), abs=0)
    assert lam.value(6) == 0.0
    assert lam.value(7) == pytest.approx(math.log(7), abs=0)
    with pytest.raises(InvalidArgumentError):
        arith.sieve_von_mangoldt(0)


def test_von_mangoldt_prime_power_structure():
    lam = arith.sieve_von_mangoldt(500)
    spf = arith.smallest_prime_factor(500)
    for n in range(2, 501):
        m, p = n, spf[n]
        while m % p == 0:
            m //= p
        if m == 1:
            assert lam.value(n) == math.log(p)
        else:
            assert lam.value(n) == 0.0


def test_convolve_mobius_inversion_identity():
    N = 300
    mu = arith.sieve_mobius(N)
    one = arith.ArithTable(N, np.ones(N + 1), "custom")
    conv = arith.dirichlet_convolve(mu, one)
    assert conv.value(1) == 1.0
    assert np.all(conv.values[2:] == 0.0)


def test_convolve_mu_lambda_at_primes():
    N = 100
    mu = arith.sieve_mobius(N)
    lam = arith.sieve_von_mangoldt(N)
    conv = arith.dirichlet_convolve(mu, lam)
    for p in (2, 3, 5, 7, 11, 97):
        assert conv.value(p) == pytest.approx(math.log(p), rel=1e-15)


def test_convolve_against_brute_force_oracle():
    N = 64
    mu = arith.sieve_mobius(N)
    lam2 = arith.mu_lambda_power(2, N)
    # (mu * Lambda*2)(12) from direct divisor-sum enumeration
    lam = arith.sieve_von_mangoldt(N)
    lam_lam = [
        brute_dirichlet_convolve(lam.values, lam.values, n) for n in range(N + 1)
    ]
    expected_12 = brute_dirichlet_convolve(mu.values, np.array(lam_lam), 12)
    assert lam2.value(12) == pytest.approx(expected_12, rel=1e-12)
    for n in range(1, N + 1):
        expected = brute_dirichlet_convolve(mu.values, np.array(lam_lam), n)
        assert lam2.value(n) == pytest.approx(expected, rel=1e-11, abs=1e-11)


def test_convolve_mismatched_limits():
    mu = arith.sieve_mobius(10)
    lam = arith.sieve_von_mangoldt(20)
    with pytest.raises(InvalidArgumentError):
        arith.dirichlet_convolve(mu, lam)


def test_mu_lambda_power_examples():
    N = 60
    assert np.array_equal(
        arith.mu_lambda_power(0, N).values, arith.sieve_mobius(N).values
    )
    k1 = arith.mu_lambda_power(1, N)
    for p in (2, 3, 5, 53):
        assert k1.value(p) == pytest.approx(math.log(p), rel=1e-15)
    k2 = arith.mu_lambda_power(2, N)
    assert k2.value(6) == pytest.approx(2 * math.log(2) * math.log(3), rel=1e-14)
    assert k2.value(35) == pytest.approx(2 * math.log(5) * math.log(7), rel=1e-14)


def test_mu_lambda_power_vanishes_at_one():
    for k in (1, 2, 3):
        assert arith.mu_lambda_power(k, 40).value(1) == 0.0


def test_convolution_commutative_associative(rng):
    N = 48
    tables = []
    for _ in range(3):
        v = np.zeros(N + 1)
        v[1:] = rng.standard_normal(N)
        tables.append(arith.ArithTable(N, v, "custom"))
    f, g, h = tables
    fg = arith.dirichlet_convolve(f, g)
    gf = arith.dirichlet_convolve(g, f)
    assert np.allclose(fg.values, gf.values, rtol=1e-12, atol=1e-12)
    left = arith.dirichlet_convolve(fg, h)
    right = arith.dirichlet_convolve(f, arith.dirichlet_convolve(g, h))
    scale = np.abs(left.values).max()
    assert np.allclose(left.values, right.values, atol=1e-12 * max(scale, 1.0))


def test_mobius_inversion_round_trip(rng):
    N = 2000
    v = np.zeros(N + 1)
    v[1:] = rng.standard_normal(N)
    f = arith.ArithTable(N, v, "custom")
    one = arith.ArithTable(N, np.ones(N + 1), "custom")
    mu = arith.sieve_mobius(N)
    back = arith.dirichlet_convolve(arith.dirichlet_convolve(f, one), mu)
    assert np.abs(back.values - f.values).max() < 1e-12 * max(
        1.0, np.abs(f.values).max()
    )


def test_chebyshev_identity():
    N = 10_000
    lam = arith.sieve_von_mangoldt(N)
    one = arith.ArithTable(N, np.ones(N + 1), "custom")
    conv = arith.dirichlet_convolve(lam, one)
    ns = np.arange(1, N + 1)
    assert np.abs(conv.values[1:] - np.log(ns)).max() < 1e-12


def test_divisor_count_and_phi():
    tau = arith.divisor_count(120)
    phi = arith.euler_phi(120)
    for n in (1, 2, 12, 97, 120):
        assert tau[n] == len(divisors(n))
        assert phi[n] == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_table_immutable():
    mu = arith.sieve_mobius(10)
    with pytest.raises(ValueError):
        mu.values[3] = 7.0
