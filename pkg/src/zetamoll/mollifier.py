"""Mollifier coefficient families.

Builds the finite Dirichlet-polynomial coefficient tables a_1..a_N:

- the Mobius-type family ("conrey"):      a_n = mu(n) n^shift P(log(N/n)/log N)
- the iterated-convolution family ("feng"):
      a_n = n^shift sum_{2<=k<=K} mu^2(n) (mu * Lambda^{*k})(n)
                     P_k(log(N/n)/log N) / log_scale^k
- two-piece sums and Dirichlet convolutions of tables
- a loader for custom tables from two-column text files

The smooth weight P(log(N/n)/log N) uses the natural logarithm throughout.
The k-th normalizer 1/log_scale^k is a *parameter*: the zero-proportion
pipeline passes log T, while length-local normalizations pass log N.  The
polynomial argument's denominator is log N of the table being built.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import mu_lambda_power, sieve_mobius
from .errors import InvalidArgumentError

_KINDS = ("generic", "conrey", "feng", "two_piece", "convolution", "delta", "custom")


@dataclass(frozen=True)
class UnitPolynomial:
    """Real polynomial on [0,1], ascending coefficients."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(float(c) for c in self.coefficients)
        )
        if len(self.coefficients) == 0:
            raise InvalidArgumentError("polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = np.zeros_like(np.asarray(x, dtype=np.float64))
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc if acc.shape else float(acc)

    @classmethod
    def one(cls) -> "UnitPolynomial":
        return cls((1.0,))

    @classmethod
    def from_momentum_basis(cls, terms) -> "UnitPolynomial":
        """Build from [(c, j), ...] meaning sum of c * x (1-x)^j."""
        coeffs = np.zeros(max(j for _, j in terms) + 2)
        for c, j in terms:
            # x (1-x)^j expanded
            for i in range(j + 1):
                coeffs[i + 1] += c * math.comb(j, i) * ((-1.0) ** i)
        return cls(tuple(coeffs))

    @classmethod
    def from_reflected_basis(cls, terms) -> "UnitPolynomial":
        """Build from [(c, j), ...] meaning sum of c * (1-2x)^j."""
        coeffs = np.zeros(max(j for _, j in terms) + 1)
        for c, j in terms:
            for i in range(j + 1):
                coeffs[i] += c * math.comb(j, i) * ((-2.0) ** i)
        return cls(tuple(coeffs))


@dataclass(frozen=True)
class CoefficientTable:
    """Mollifier coefficients a_1..a_N with provenance.

    values has length N+1 with index 0 unused; sigma0_shift records the
    n^shift weight already applied at build time (0 = unweighted).
    """

    length: int
    values: np.ndarray
    kind: str = "custom"
    sigma0_shift: float = 0.0

    def __post_init__(self):
        if self.length < 1:
            raise InvalidArgumentError("table length must be >= 1")
        if len(self.values) != self.length + 1:
            raise InvalidArgumentError("values must have length N+1 (index 0 unused)")
        if self.kind not in _KINDS:
            raise InvalidArgumentError(f"unknown coefficient kind {self.kind!r}")
        self.values.setflags(write=False)

    def value(self, n: int) -> float:
        if not 1 <= n <= self.length:
            raise InvalidArgumentError(f"n={n} outside 1..{self.length}")
        return float(self.values[n])

    def nonzero_support(self) -> np.ndarray:
        idx = np.arange(1, self.length + 1)
        return idx[self.values[1:] != 0.0]


def delta_coeffs(length: int = 1) -> CoefficientTable:
    """The table with a_1 = 1 and all other entries 0 (A(s) = 1)."""
    v = np.zeros(length + 1)
    v[1] = 1.0
    return CoefficientTable(length, v, "delta")


def conrey_coeffs(
    N: int, P: UnitPolynomial, sigma0_shift: float = 0.0
) -> CoefficientTable:
    """Mobius-type mollifier: a_n = mu(n) n^shift P(log(N/n)/log N)."""
    if N < 1:
        raise InvalidArgumentError("N must be >= 1")
    mu = sieve_mobius(N).values
    n = np.arange(1, N + 1, dtype=np.float64)
    lN = math.log(N) if N > 1 else 1.0
    x = np.log(N / n) / lN
    vals = np.zeros(N + 1)
    vals[1:] = mu[1:] * n**sigma0_shift * P(x)
    return CoefficientTable(N, vals, "conrey", sigma0_shift)


def feng_coeffs(
    N: int,
    polys,
    K: int,
    log_scale: float,
    sigma0_shift: float = 0.0,
) -> CoefficientTable:
    """Iterated-convolution mollifier.

    a_n = n^shift sum_{2<=k<=K} mu^2(n) (mu*Lambda^{*k})(n)
                   P_k(log(N/n)/log N) / log_scale^k

    Args:
        N: table length.
        polys: sequence of K-1 polynomials, P_2 first.
        K: largest convolution order, >= 2.
        log_scale: the normalizer base (log T in the zero-proportion runs).
        sigma0_shift: exponent of the n^shift weight, 0 for unweighted.
    """
    if K < 2:
        raise InvalidArgumentError("K must be >= 2")
    if len(polys) != K - 1:
        raise InvalidArgumentError(f"need K-1 = {K-1} polynomials, got {len(polys)}")
    if log_scale <= 0:
        raise InvalidArgumentError("log_scale must be positive")
    if N < 1:
        raise InvalidArgumentError("N must be >= 1")
    mu = sieve_mobius(N).values
    mu2 = (mu != 0.0).astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    lN = math.log(N) if N > 1 else 1.0
    x = np.log(N / n) / lN
    vals = np.zeros(N + 1)
    for k in range(2, K + 1):
        conv = mu_lambda_power(k, N).values
        Pk = polys[k - 2]
        vals[1:] += mu2[1:] * conv[1:] * Pk(x) / log_scale**k
    vals[1:] *= n**sigma0_shift
    return CoefficientTable(N, vals, "feng", sigma0_shift)


def two_piece_coeffs(
    c1: CoefficientTable, c2: CoefficientTable
) -> CoefficientTable:
    """Entrywise sum of two tables, padded to the longer length."""
    N = max(c1.length, c2.length)
    vals = np.zeros(N + 1)
    vals[: c1.length + 1] += c1.values
    vals[: c2.length + 1] += c2.values
    shift = c1.sigma0_shift if c1.sigma0_shift == c2.sigma0_shift else 0.0
    return CoefficientTable(N, vals, "two_piece", shift)


def convolve_coeffs(
    a: CoefficientTable, b: CoefficientTable, max_length: int = 10_000_000
) -> CoefficientTable:
    """Dirichlet convolution: out_d = sum_{n k = d} a_n b_k, d <= N*K."""
    NK = a.length * b.length
    if NK > max_length:
        raise InvalidArgumentError(
            f"convolved length {NK} exceeds max_length {max_length}"
        )
    vals = np.zeros(NK + 1)
    bn = b.values
    for n in range(1, a.length + 1):
        an = a.values[n]
        if an != 0.0:
            vals[n :: n][: b.length] += an * bn[1:]
    return CoefficientTable(NK, vals, "convolution")


def load_coeffs(path) -> CoefficientTable:
    """Read a custom table from a two-column text file: lines of "n a_n".

    Missing indices are zero; blank lines and '#' comments are skipped.
    """
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidArgumentError(f"expected 'n a_n', got {line!r}")
            pairs.append((int(parts[0]), float(parts[1])))
    if not pairs:
        raise InvalidArgumentError(f"no coefficients in {path}")
    N = max(n for n, _ in pairs)
    if min(n for n, _ in pairs) < 1:
        raise InvalidArgumentError("indices must be >= 1")
    vals = np.zeros(N + 1)
    for n, a in pairs:
        vals[n] = a
    return CoefficientTable(N, vals, "custom")
