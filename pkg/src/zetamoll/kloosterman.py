"""Exact exponential-sum evaluators and the error-term combinatorics.

Complete Kloosterman sums S(a,b;c) with their square-root cancellation
certificates, incomplete sums over an interval with a squarefree weight,
the two combinatorial identities decomposing mu and Lambda into
short-variable convolutions, the constructive Type I / Type II range
split, and direct measurement of the two bilinear/trilinear sum bounds
used for the error terms.

The measurement operations never assert the bounds (their implicit
constants are unknown); they emit ratio reports for stability checks.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .arith import divisor_count, sieve_mobius, smallest_prime_factor
from .errors import InvalidArgumentError

if _backend.NUMBA_ENABLED:
    from . import _kernels_nb as _K
else:
    from . import _kernels_np as _K


# ---------------------------------------------------------------------------
# complete sums and the square-root bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KloostermanRecord:
    """One complete sum with its certificate.

    weil_bound = tau(c) sqrt(c) sqrt(gcd(a,b,c)); satisfied records
    |value| <= weil_bound (up to 1e-7 rounding slack).  The value is real
    up to rounding: x -> -x pairs conjugate terms.
    """

    a: int
    b: int
    c: int
    value: complex
    weil_bound: float
    satisfied: bool

    def csv_row(self) -> str:
        return (
            f"{self.a},{self.b},{self.c},{self.value.real!r},"
            f"{self.value.imag!r},{self.weil_bound!r},{int(self.satisfied)}"
        )


def _gcd3(a: int, b: int, c: int) -> int:
    return math.gcd(math.gcd(a, b), c)


def complete_kloosterman(a: int, b: int, c: int) -> KloostermanRecord:
    """S(a,b;c) = sum over x mod c, (x,c)=1, of e((a x + b xbar)/c)."""
    if c < 1:
        raise InvalidArgumentError("modulus c must be >= 1")
    re, im = _K.kloosterman_value(int(a), int(b), int(c))
    tau_c = int(divisor_count(c)[c])
    g = _gcd3(a % c if a % c else c, b % c if b % c else c, c)
    bound = tau_c * math.sqrt(c) * math.sqrt(g)
    val = complex(re, im)
    return KloostermanRecord(a, b, c, val, bound, abs(val) <= bound + 1e-7)


@dataclass(frozen=True)
class WeilCampaignReport:
    checked: int
    failures: int
    max_ratio: float
    cmax: int
    seed: int | None = None


def weil_certificate_exhaustive(cmax: int) -> WeilCampaignReport:
    """Every (a, b) mod c for every c <= cmax against the bound."""
    if cmax < 1:
        raise InvalidArgumentError("cmax must be >= 1")
    tau = divisor_count(cmax).astype(np.float64)
    res = _K.weil_exhaustive(cmax, tau)
    failures = int(res[:, 0].sum())
    checked = int(sum(c * c for c in range(1, cmax + 1)))
    return WeilCampaignReport(checked, failures, float(res[:, 1].max()), cmax)


def weil_certificate_random(
    count: int, cmax: int, seed: int = 0
) -> WeilCampaignReport:
    """``count`` uniform triples (a, b, c) with c <= cmax against the bound."""
    if count < 1 or cmax < 1:
        raise InvalidArgumentError("count and cmax must be >= 1")
    rng = np.random.default_rng(seed)
    cs = rng.integers(1, cmax + 1, size=count)
    as_ = rng.integers(0, 1 << 30, size=count) % cs
    bs = rng.integers(0, 1 << 30, size=count) % cs
    vals = _K.kloosterman_batch(as_, bs, cs)
    tau = divisor_count(cmax).astype(np.float64)
    g = np.gcd(np.gcd(np.where(as_ == 0, cs, as_), np.where(bs == 0, cs, bs)), cs)
    bounds = tau[cs] * np.sqrt(cs.astype(np.float64)) * np.sqrt(g.astype(np.float64))
    mags = np.hypot(vals[:, 0], vals[:, 1])
    failures = int(np.count_nonzero(mags > bounds + 1e-7))
    return WeilCampaignReport(
        count, failures, float((mags / bounds).max()), cmax, seed
    )


# ---------------------------------------------------------------------------
# incomplete sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncompleteSumReport:
    value: complex
    bound: float  # F^{1/2} v^{1/4} (1 + F^{1/2} v^{-1/2}) (n,v)^{1/2}, eps dropped
    terms: int

    @property
    def ratio(self) -> float:
        return abs(self.value) / self.bound


def incomplete_kloosterman(
    interval: tuple[int, int],
    e_val: int,
    v: int,
    n_val: int,
    squarefree_weight: bool = False,
) -> IncompleteSumReport:
    """sum over f in the interval, (f, v e) = 1, of
    [mu^2(f)] e(-n inverse(e f, v) / v), plus the reference bound."""
    f_lo, f_hi = int(interval[0]), int(interval[1])
    if v < 1:
        raise InvalidArgumentError("modulus v must be >= 1")
    if math.gcd(e_val, v) != 1:
        raise InvalidArgumentError("multiplier e must be coprime to v")
    if f_hi < f_lo:
        raise InvalidArgumentError("empty interval")
    F = f_hi - f_lo + 1
    if F > 1_000_000:
        raise InvalidArgumentError("interval length above 1e6")
    mu2 = np.zeros(1)
    if squarefree_weight:
        mu2 = (sieve_mobius(max(f_hi, 1)).values != 0.0).astype(np.float64)
    re, im = _K.incomplete_kloosterman_sum(
        f_lo, f_hi, int(e_val), int(v), int(n_val), squarefree_weight, mu2
    )
    g = math.gcd(n_val % v if n_val % v else v, v)
    bound = math.sqrt(F) * v**0.25 * (1.0 + math.sqrt(F) / math.sqrt(v)) * math.sqrt(g)
    return IncompleteSumReport(complex(re, im), bound, F)


# ---------------------------------------------------------------------------
# the two short-variable decomposition identities (K = 2)
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list:
    out = [1]
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            powers = []
            while m % d == 0:
                m //= d
                powers.append(d)
            cur = list(out)
            pk = 1
            for p in powers:
                pk *= p
                out.extend([x * pk for x in cur])
        d += 1
    if m > 1:
        out.extend([x * m for x in out])
    return sorted(out)


def heath_brown_mu(n: int, U: int) -> float:
    """The K = 2 decomposition of mu(n), valid for n <= 2U.

    mu(n) = 2 [n <= sqrt(2U)] mu(n)
            - sum_{m1 m2 n1 = n, m1,m2 <= sqrt(2U)} mu(m1) mu(m2)
    evaluated by direct nested summation over factorizations.
    """
    if not 1 <= n <= 2 * U:
        raise InvalidArgumentError("identity holds only for 1 <= n <= 2U")
    cut = math.isqrt(2 * U)
    mu = sieve_mobius(max(n, 1)).values
    total = 0.0
    if n <= cut:
        total += 2.0 * mu[n]
    for m1 in _divisors(n):
        if m1 > cut:
            continue
        r = n // m1
        for m2 in _divisors(r):
            if m2 > cut:
                continue
            total -= mu[m1] * mu[m2]
    return total


def heath_brown_lambda(n: int, U: int) -> float:
    """The K = 2 decomposition of Lambda(n), valid for n <= 2U.

    Lambda(n) = 2 sum_{d | n, d <= sqrt(2U)} mu(d) log(n/d)
                - sum_{m1 m2 n1 n2 = n, m1,m2 <= sqrt(2U)} mu(m1) mu(m2) log(n2)
    """
    if not 1 <= n <= 2 * U:
        raise InvalidArgumentError("identity holds only for 1 <= n <= 2U")
    cut = math.isqrt(2 * U)
    mu = sieve_mobius(max(n, 1)).values
    total = 0.0
    for d in _divisors(n):
        if d <= cut:
            total += 2.0 * mu[d] * math.log(n / d)
    for m1 in _divisors(n):
        if m1 > cut:
            continue
        r1 = n // m1
        for m2 in _divisors(r1):
            if m2 > cut:
                continue
            r2 = r1 // m2
            for n1 in _divisors(r2):
                n2 = r2 // n1
                total -= mu[m1] * mu[m2] * math.log(n2)
    return total


# ---------------------------------------------------------------------------
# Type I / Type II range split
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RangeSplit:
    """Outcome of the constructive dyadic-range case analysis.

    For type_I the subset holds the single witnessing index; for type_II
    the subset's scale product lies in [W/2^{4s+3}, 2^{4s+3} U/W].
    """

    decision: str
    subset: tuple
    witness_products: dict


def type_split(ranges, U: float, W: float) -> RangeSplit:
    """Classify a dyadic-scale tuple into Type I or Type II.

    ``ranges`` holds the 4s+3 dyadic scales X_i.  With the explicit
    constant c = 2^{4s+3}:

    1. some X_i >= U/(cW)                      -> type_I at the first such i;
    2. else some X_i >= W/c (mid-range)        -> type_II, subset {i};
    3. else all X_i < W/c                      -> type_II with the minimal
       prefix whose product reaches W/c.

    Ties break to the smallest qualifying index.
    """
    X = [float(x) for x in ranges]
    k = len(X)
    if k < 3 or (k - 3) % 4 != 0:
        raise InvalidArgumentError("need 4s+3 ranges for integer s >= 0")
    s = (k - 3) // 4
    c = 2.0 ** (4 * s + 3)
    if not 1.0 <= W <= c * U ** (1.0 / 3.0) * (1 + 1e-12):
        raise InvalidArgumentError("need 1 <= W <= 2^{4s+3} U^{1/3}")
    prod = 1.0
    for x in X:
        prod *= x
    if not U / c <= prod <= 2.0 * U * (1 + 1e-12):
        raise InvalidArgumentError("scale product outside [2^{-(4s+3)} U, 2U]")
    cut = math.sqrt(2.0 * U)
    for i in range(min(2 * s + 2, k)):
        if X[i] > cut * (1 + 1e-12):
            raise InvalidArgumentError(
                f"X_{i+1} = {X[i]} above sqrt(2U) in a mu-slot"
            )

    witness = {"c": c, "U": U, "W": W, "product": prod}
    for i, x in enumerate(X):
        if x >= U / (c * W):
            witness["X_i"] = x
            return RangeSplit("type_I", (i,), witness)
    for i, x in enumerate(X):
        if x >= W / c:
            witness["subset_product"] = x
            return RangeSplit("type_II", (i,), witness)
    run = 1.0
    for i, x in enumerate(X):
        run *= x
        if run >= W / c:
            witness["subset_product"] = run
            return RangeSplit("type_II", tuple(range(i + 1)), witness)
    raise InvalidArgumentError(
        "no qualifying prefix; the scale product precondition should prevent this"
    )


# ---------------------------------------------------------------------------
# bound-shape measurements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioReport:
    """One measured |LHS| against a reference RHS (eps = 0), never asserted."""

    lhs: float
    rhs: float
    params: dict
    seed: int | None = None

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else math.inf

    def csv_row(self) -> str:
        keys = ",".join(str(v) for v in self.params.values())
        return f"{keys},{self.lhs!r},{self.rhs!r},{self.ratio!r},{self.seed}"


def bilinear_sum_measure(nu, alpha_m, beta_n) -> RatioReport:
    """Exact LHS of the bilinear Kloosterman-sum bound over dyadic blocks.

    LHS = sum_{a~A, m~M, n~N, (m,n)=1} nu_a alpha_m beta_n e(a mbar / n);
    RHS = |nu| |alpha| |beta| (1 + A/(MN))^{1/2}
          ((AMN)^{7/20} (M+N)^{1/4} + (AMN)^{3/8} (AN+AM)^{1/8}).
    """
    nu = np.asarray(nu, dtype=np.complex128)
    alpha_m = np.asarray(alpha_m, dtype=np.complex128)
    beta_n = np.asarray(beta_n, dtype=np.complex128)
    A, M, N = len(nu), len(alpha_m), len(beta_n)
    if max(A, M, N) > 2000:
        raise InvalidArgumentError("blocks above 2000 are not direct-summable")
    parts = _K.bilinear_lhs(nu, alpha_m, beta_n, A, M, N)
    lhs = abs(complex(parts[:, 0].sum(), parts[:, 1].sum()))
    norms = (
        float(np.linalg.norm(nu))
        * float(np.linalg.norm(alpha_m))
        * float(np.linalg.norm(beta_n))
    )
    amn = float(A) * M * N
    rhs = (
        norms
        * math.sqrt(1.0 + A / (float(M) * N))
        * (amn ** 0.35 * (M + N) ** 0.25 + amn ** 0.375 * (A * N + A * M) ** 0.125)
    )
    return RatioReport(lhs, rhs, {"A": A, "M": M, "N": N})


def trilinear_sum_measure(c, A, B, N, V, rho) -> RatioReport:
    """Exact LHS of the trilinear bound (absolute value over the inner
    double sum), against the eps = 0 reference RHS."""
    c = np.asarray(c, dtype=np.complex128)
    if c.shape != (A, N):
        raise InvalidArgumentError("coefficient array must have shape (A, N)")
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise InvalidArgumentError("coefficients must satisfy |c(a,n)| <= 1")
    if max(A, B, N, V) > 500:
        raise InvalidArgumentError("blocks above 500 are not direct-summable")
    if rho < 1:
        raise InvalidArgumentError("rho must be >= 1")
    partial = _K.trilinear_lhs(c, A, B, N, V, int(rho))
    lhs = float(partial.sum())
    abnv = float(A) * B * N * V
    rhs = math.sqrt(abnv) * (
        math.sqrt(float(B) * V)
        + (A + N) ** 0.25
        * (float(B) * V * (N + rho * A) * (V + rho * A * A) + rho * A * A * B * B * N)
        ** 0.25
    )
    return RatioReport(lhs, rhs, {"A": A, "B": B, "N": N, "V": V, "rho": rho})
