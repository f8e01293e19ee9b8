"""Truncated-series algebra: univariate Taylor/Laurent series and bivariate jets.

The jets carry exact truncated Taylor expansions through arithmetic, so
high-order mixed derivatives (needed to apply a degree-5 differential
operator in each of two variables) come out of series coefficients rather
than hopeless numerical differentiation.

Conventions:
- ``TruncatedSeries`` holds coefficients c[0..order] of sum c_k u^k.
- ``LaurentSeries`` adds a single symbolic 1/u term (``pole``); it appears
  when expanding zeta(1+u) at u=0 and survives until an addition or a
  multiplication by a series vanishing at 0 cancels it.
- ``BivariateJet`` holds a triangular grid c[i, j] (i+j <= order) of Taylor
  coefficients around a base point; c[i, j] * i! * j! is the mixed partial.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class TruncatedSeries:
    """Taylor polynomial sum_{k<=order} c_k u^k with hard truncation."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", np.asarray(self.coeffs, dtype=np.float64)
        )

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c: float, order: int) -> "TruncatedSeries":
        co = np.zeros(order + 1)
        co[0] = c
        return cls(co)

    @classmethod
    def variable(cls, order: int, shift: float = 0.0) -> "TruncatedSeries":
        """The series of (shift + u)."""
        co = np.zeros(order + 1)
        co[0] = shift
        if order >= 1:
            co[1] = 1.0
        return cls(co)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            co = self.coeffs.copy()
            co[0] += other
            return TruncatedSeries(co)
        n = max(self.order, other.order)
        co = np.zeros(n + 1)
        co[: self.order + 1] += self.coeffs
        co[: other.order + 1] += other.coeffs
        return TruncatedSeries(co)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -float(other))

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return TruncatedSeries(self.coeffs * other)
        n = max(self.order, other.order)
        co = np.convolve(self.coeffs, other.coeffs)[: n + 1]
        return TruncatedSeries(co)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            co = np.zeros(order + 1)
            co[: self.order + 1] = self.coeffs
            return TruncatedSeries(co)
        return TruncatedSeries(self.coeffs[: order + 1].copy())

    def eval(self, u: float) -> float:
        acc = 0.0
        for c in self.coeffs[::-1]:
            acc = acc * u + c
        return acc

    def exp(self) -> "TruncatedSeries":
        """exp of the series, exact truncated composition."""
        n = self.order
        out = np.zeros(n + 1)
        out[0] = np.exp(self.coeffs[0])
        # out' = self' * out  =>  (k+1) out_{k+1} = sum_{j} (j+1) a_{j+1} out_{k-j}
        for k in range(n):
            acc = 0.0
            for j in range(k + 1):
                if j + 1 <= n:
                    acc += (j + 1) * self.coeffs[j + 1] * out[k - j]
            out[k + 1] = acc / (k + 1)
        return TruncatedSeries(out)


@dataclass(frozen=True)
class LaurentSeries:
    """pole/u + Taylor part; ``pole`` is the coefficient of u^{-1}."""

    pole: float
    series: TruncatedSeries

    @property
    def order(self) -> int:
        return self.series.order

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            return LaurentSeries(self.pole + other.pole, self.series + other.series)
        if isinstance(other, TruncatedSeries):
            return LaurentSeries(self.pole, self.series + other)
        return LaurentSeries(self.pole, self.series + float(other))

    __radd__ = __add__

    def __mul__(self, other):
        """Multiply by a Taylor series; the 1/u term folds in exactly.

        (p/u + S(u)) * B(u) = p b_0 / u + (p * (B - b_0)/u + S B),
        where (B - b_0)/u is the exact coefficient shift.
        """
        if isinstance(other, (int, float)):
            return LaurentSeries(self.pole * other, self.series * other)
        if not isinstance(other, TruncatedSeries):
            raise InvalidArgumentError("can only multiply by a TruncatedSeries")
        n = max(self.order, other.order)
        shifted = np.zeros(n + 1)
        shifted[: other.order] = other.coeffs[1:]
        part = TruncatedSeries(shifted) * self.pole
        return LaurentSeries(
            self.pole * other.coeffs[0], (self.series * other).truncate(n) + part
        )

    __rmul__ = __mul__

    def taylor(self) -> TruncatedSeries:
        """Drop to a plain series; requires the pole to have cancelled."""
        if abs(self.pole) > 1e-12 * max(1.0, np.abs(self.series.coeffs).max()):
            raise InvalidArgumentError(
                f"pole coefficient {self.pole} has not cancelled"
            )
        return self.series

    def constant_term(self) -> float:
        return self.taylor().coeffs[0]


class BivariateJet:
    """Truncated bivariate Taylor expansion around a base point.

    coeffs[i, j] is the coefficient of (a - a0)^i (b - b0)^j; entries with
    i + j > order are identically zero.  Multiplication truncates to the
    same triangle, and truncating inputs first gives the same result.
    """

    __slots__ = ("base", "order", "coeffs")

    def __init__(self, base, order, coeffs=None):
        self.base = (float(base[0]), float(base[1]))
        self.order = int(order)
        if coeffs is None:
            self.coeffs = np.zeros((order + 1, order + 1))
        else:
            coeffs = np.asarray(coeffs, dtype=np.float64)
            if coeffs.shape != (order + 1, order + 1):
                raise InvalidArgumentError("coefficient grid shape mismatch")
            self.coeffs = coeffs.copy()
            self._mask()

    def _mask(self):
        n = self.order
        for i in range(n + 1):
            self.coeffs[i, n + 1 - i :] = 0.0

    @classmethod
    def constant(cls, c, base, order):
        jet = cls(base, order)
        jet.coeffs[0, 0] = c
        return jet

    @classmethod
    def exp_linear(cls, ca, cb, base, order):
        """exp(ca*a + cb*b) expanded around base=(a0, b0), exact."""
        jet = cls(base, order)
        xa = np.zeros(order + 1)
        xb = np.zeros(order + 1)
        xa[0] = np.exp(ca * base[0])
        xb[0] = np.exp(cb * base[1])
        for i in range(1, order + 1):
            xa[i] = xa[i - 1] * ca / i
            xb[i] = xb[i - 1] * cb / i
        jet.coeffs = np.outer(xa, xb)
        jet._mask()
        return jet

    @classmethod
    def from_sum_series(cls, series: TruncatedSeries, base, order):
        """Lift a univariate series in u = (a-a0)+(b-b0) to a bivariate jet."""
        jet = cls(base, order)
        for r in range(min(series.order, order) + 1):
            cr = series.coeffs[r]
            if cr == 0.0:
                continue
            for i in range(r + 1):
                jet.coeffs[i, r - i] += cr * _binom(r, i)
        return jet

    def _check_compat(self, other):
        if self.base != other.base or self.order != other.order:
            raise InvalidArgumentError("jets have different base point or order")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            out = BivariateJet(self.base, self.order, self.coeffs)
            out.coeffs[0, 0] += other
            return out
        self._check_compat(other)
        return BivariateJet(self.base, self.order, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return BivariateJet(self.base, self.order, self.coeffs * other)
        self._check_compat(other)
        n = self.order
        out = BivariateJet(self.base, n)
        a, b = self.coeffs, other.coeffs
        for i in range(n + 1):
            for j in range(n + 1 - i):
                acc = 0.0
                for u in range(i + 1):
                    row = a[u]
                    col = b[i - u]
                    for v in range(j + 1):
                        acc += row[v] * col[j - v]
                out.coeffs[i, j] = acc
        return out

    __rmul__ = __mul__

    def truncate(self, order: int) -> "BivariateJet":
        out = BivariateJet(self.base, order)
        n = min(order, self.order)
        out.coeffs[: n + 1, : n + 1] = self.coeffs[: n + 1, : n + 1]
        out._mask()
        return out

    def derivative(self, i: int, j: int) -> float:
        """Mixed partial d^{i+j}/da^i db^j at the base point."""
        if i + j > self.order:
            raise InvalidArgumentError(
                f"derivative order ({i},{j}) exceeds jet order {self.order}"
            )
        return float(self.coeffs[i, j]) * _factorial(i) * _factorial(j)

    def value(self) -> float:
        return float(self.coeffs[0, 0])


def _factorial(n: int) -> float:
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out


def _binom(n: int, k: int) -> float:
    out = 1.0
    for i in range(1, k + 1):
        out = out * (n - k + i) / i
    return out
