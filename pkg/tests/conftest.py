"""Shared oracles for the test suite.

Every oracle here is independent of the library code paths it checks:
the zeta oracle is a separate Euler-Maclaurin loop run at double the
library's term count, divisor sums are enumerated brute-force, and
quadrature cross-checks use a plain Simpson rule pair.
"""

import cmath
import math

import numpy as np
import pytest

_B2N = [1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
        5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510]


def zeta_oracle(s: complex) -> complex:
    """Euler-Maclaurin zeta at double the library's term count."""
    s = complex(s)
    t = abs(s.imag)
    M = int(math.ceil(t)) + 40  # library uses ceil(t/2) + 20
    tot = 0j
    for n in range(1, M):
        tot += cmath.exp(-s * math.log(n))
    tot += M ** (-s) / 2.0 + M ** (1.0 - s) / (s - 1.0)
    poch = s
    Mp = M ** (-s - 1.0)
    for j in range(1, 9):
        tot += _B2N[j - 1] / math.factorial(2 * j) * poch * Mp
        poch = poch * (s + 2 * j - 1) * (s + 2 * j)
        Mp = Mp / M / M
    return tot


def divisors(n: int) -> list:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def brute_dirichlet_convolve(f, g, n: int) -> float:
    """sum_{d | n} f(d) g(n/d) by divisor enumeration."""
    return sum(f[d] * g[n // d] for d in divisors(n))


def simpson_pair(f, a: float, b: float, n: int = 512):
    """(Simpson at n panels, Simpson at 2n panels) for a vectorized f."""

    def simpson(npan):
        xs = np.linspace(a, b, 2 * npan + 1)
        ys = f(xs)
        h = (b - a) / (2 * npan)
        return h / 3.0 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-1:2].sum())

    return simpson(n), simpson(2 * n)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
