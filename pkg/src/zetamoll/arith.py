"""Sieved arithmetic functions and Dirichlet convolution on finite tables.

Provides:
- Mobius function mu(n) and von Mangoldt function Lambda(n) as 1-based tables
- Dirichlet convolution (f * g)(n) = sum_{d|n} f(d) g(n/d)
- iterated convolutions mu * Lambda^{*k}
- helper arrays: smallest prime factor, divisor counts tau(n), Euler phi(n)

Tables are immutable after construction and safe to share across threads.
Lambda stores exact log p values recomputed from the smallest-prime-factor
sieve, so repeated convolutions do not accumulate error beyond rounding.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InvalidArgumentError

if _backend.NUMBA_ENABLED:
    from . import _kernels_nb as _K
else:
    from . import _kernels_np as _K

_VALID_KINDS = ("mobius", "von_mangoldt", "convolution", "custom")


@dataclass(frozen=True)
class ArithTable:
    """Values of an arithmetic function on 1..limit.

    Attributes:
        limit: Largest argument stored.
        values: float64 array of length limit+1; index 0 is unused (kept 0)
            so the table is 1-based like the functions it holds.
        kind: One of "mobius", "von_mangoldt", "convolution", "custom".
    """

    limit: int
    values: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        if self.limit < 1:
            raise InvalidArgumentError("table limit must be >= 1")
        if len(self.values) != self.limit + 1:
            raise InvalidArgumentError(
                f"values must have limit+1 entries, got {len(self.values)}"
            )
        if self.kind not in _VALID_KINDS:
            raise InvalidArgumentError(f"unknown table kind {self.kind!r}")
        self.values.setflags(write=False)

    def value(self, n: int) -> float:
        """Entry at n, 1 <= n <= limit."""
        if not 1 <= n <= self.limit:
            raise InvalidArgumentError(f"n={n} outside 1..{self.limit}")
        return float(self.values[n])


def sieve_mobius(limit: int) -> ArithTable:
    """Mobius function table mu(1..limit).

    Args:
        limit: Upper bound (inclusive), >= 1.

    Returns:
        ArithTable of kind "mobius"; every entry is -1, 0 or 1.
    """
    if limit < 1:
        raise InvalidArgumentError("limit must be >= 1")
    mu = _K.sieve_mobius_arr(limit).astype(np.float64)
    return ArithTable(limit, mu, "mobius")


def smallest_prime_factor(limit: int) -> np.ndarray:
    """Smallest-prime-factor array; spf[n] = least prime dividing n, spf[1] = 0."""
    if limit < 1:
        raise InvalidArgumentError("limit must be >= 1")
    return _K.sieve_spf(limit)


def sieve_von_mangoldt(limit: int) -> ArithTable:
    """Von Mangoldt function table Lambda(1..limit).

    Lambda(n) = log p when n = p^k, else 0; log p is taken once per prime
    from the spf sieve.
    """
    if limit < 1:
        raise InvalidArgumentError("limit must be >= 1")
    spf = _K.sieve_spf(limit)
    lam = _K.von_mangoldt_arr(limit, spf)
    return ArithTable(limit, lam, "von_mangoldt")


def sieve_mu_squared(limit: int) -> ArithTable:
    """Squarefree indicator mu^2(1..limit)."""
    mu = sieve_mobius(limit)
    return ArithTable(limit, (mu.values != 0.0).astype(np.float64), "custom")


def divisor_count(limit: int) -> np.ndarray:
    """tau(n) = number of divisors, as int64 array indexed 0..limit."""
    if limit < 1:
        raise InvalidArgumentError("limit must be >= 1")
    return _K.divisor_count_arr(limit)


def euler_phi(limit: int) -> np.ndarray:
    """Euler totient phi(n) as int64 array indexed 0..limit."""
    if limit < 1:
        raise InvalidArgumentError("limit must be >= 1")
    return _K.euler_phi_arr(limit)


def dirichlet_convolve(f: ArithTable, g: ArithTable) -> ArithTable:
    """Dirichlet convolution (f * g)(n) = sum_{d|n} f(d) g(n/d).

    Iterates d then multiples of d, O(limit log limit); both tables must
    share the same limit.
    """
    if f.limit != g.limit:
        raise InvalidArgumentError(
            f"mismatched limits {f.limit} != {g.limit}"
        )
    out = _K.dirichlet_convolve_arr(
        np.asarray(f.values, dtype=np.float64),
        np.asarray(g.values, dtype=np.float64),
    )
    return ArithTable(f.limit, out, "convolution")


def mu_lambda_power(k: int, limit: int) -> ArithTable:
    """mu * Lambda^{*k}: k successive convolutions of Lambda onto mu.

    k = 0 returns the plain Mobius table.
    """
    if k < 0:
        raise InvalidArgumentError("k must be >= 0")
    mu = sieve_mobius(limit)
    if k == 0:
        return mu
    lam = sieve_von_mangoldt(limit)
    cur = mu
    for _ in range(k):
        cur = dirichlet_convolve(cur, lam)
    return cur
