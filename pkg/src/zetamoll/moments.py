"""Main-term evaluators for the twisted second moment, the direct
quadrature oracle, exact jet differentiation, and the critical-zero
proportion pipeline.

The central object is

    I(alpha, beta) = int zeta(1/2+alpha+it) zeta(1/2+beta-it)
                         |A(1/2+it)|^2 Phi(t/T) dt

whose main term is a double sum over coefficient pairs (d, e):

    sum_{d,e} (a_d a_e / [d,e]) ((d,e)^{alpha+beta} / d^alpha e^beta)
      * int ( zeta(1+s) + zeta(1-s) (2 pi d e / (t (d,e)^2))^s ) Phi(t/T) dt,

with s = alpha + beta.  Writing d = h m, e = h n with (m, n) = 1 the pair
weight collapses to a_d a_e / (h m n) * m^-alpha n^-beta and the bracket
depends on (d, e) only through y = 2 pi m n, so the t-integral reduces to
fixed Mellin moments of the bump:

    bracket = T [ zeta(1+s) M_0 + zeta(1-s) e^{s (log y - log T)} M_Phi(-s) ].

In jet mode each pair contributes exact truncated Taylor expansions in
(alpha, beta): the zeta Laurent series in s = alpha+beta (whose 1/s pole
cancels inside the bracket exactly as in the alpha, beta -> 0 limit) times
an exponential jet in each variable separately.  All mixed partials up to
the jet order are therefore exact series coefficients; the degree-5
smoothing operator of the zero-proportion pipeline is applied by
contracting against them, never by numerical differentiation.

Pair sums run in fixed chunks with compensated summation and a
deterministic combination order, so results are bit-identical across
thread counts.
"""

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _backend
from .errors import (
    BudgetExceededError,
    InvalidArgumentError,
    InvalidResultError,
)
from .mollifier import (
    CoefficientTable,
    UnitPolynomial,
    conrey_coeffs,
    convolve_coeffs,
    delta_coeffs,
    feng_coeffs,
    two_piece_coeffs,
)
from .series import BivariateJet
from .special import (
    EULER_C0,
    STIELTJES,
    T_SWITCH,
    ShiftPair,
    bump,
    bump_log_moments,
    zeta,
    zeta_1p_small,
)

if _backend.NUMBA_ENABLED:
    from . import _kernels_nb as _K
else:
    from . import _kernels_np as _K

DEFAULT_PAIR_BUDGET = 4_000_000_000
_MOMENTS_KMAX = 24


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentReport:
    """Value of a main-term or quadrature evaluation plus diagnostics.

    For main-term evaluations ``zeta_plus_piece``/``zeta_minus_piece`` are
    the zeta(1+s) and zeta(1-s) contributions (the pointwise split; jet
    and limit modes report the whole value in the plus piece, where the
    split is not separately finite).  ``t_integral`` is the plain bump
    integral T * M_0.  ``comp_residual`` is the leftover compensation of
    the pair summation; for the quadrature oracle ``error_estimate`` and
    ``panel_count`` describe the rule-pair adaptive integration instead.
    """

    value: float
    zeta_plus_piece: float
    zeta_minus_piece: float
    t_integral: float
    pair_count: int
    comp_residual: float
    mode: str
    error_estimate: float | None = None
    panel_count: int | None = None
    imag_residual: float | None = None
    degraded: bool = False

    def __post_init__(self):
        for name in ("value", "zeta_plus_piece", "zeta_minus_piece",
                     "t_integral", "comp_residual", "error_estimate",
                     "imag_residual"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))

    def to_text(self) -> str:
        lines = []
        for key in (
            "value",
            "zeta_plus_piece",
            "zeta_minus_piece",
            "t_integral",
            "pair_count",
            "comp_residual",
            "mode",
            "error_estimate",
            "panel_count",
            "imag_residual",
            "degraded",
        ):
            lines.append(f"{key}={getattr(self, key)!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        return json.dumps(d, sort_keys=True)


# ---------------------------------------------------------------------------
# shared series tables
# ---------------------------------------------------------------------------


def _mphi(s: float) -> float:
    """M_Phi(-s) = int x^{-s} Phi(x) dx via the log-moment series."""
    mom = bump_log_moments(_MOMENTS_KMAX)
    acc = 0.0
    term = 1.0
    for q in range(len(mom)):
        acc += mom[q] * term
        term = term * (-s) / (q + 1)
    return acc


def _k_series_tables(s0: float, order: int):
    """Taylor tables at base s0 for the bracket's building blocks.

    Returns (A, B, mM) of length order+2: the entire parts of
    zeta(1+s0+u) and zeta(1-s0-u), and M_Phi(-(s0+u)).
    """
    # the zeta entire parts feed grid indices up to `order` only (the
    # order+1 slot of the bracket comes from the bump moments), so the
    # 13 stored Stieltjes constants cover jet orders up to 12
    P = order + 2
    if order > len(STIELTJES) - 1:
        raise InvalidArgumentError(
            f"jet order {order} exceeds the stored Stieltjes table"
        )
    A = np.zeros(P)
    B = np.zeros(P)
    for k, g in enumerate(STIELTJES):
        ck = g / math.factorial(k)
        for j in range(min(k, P - 1) + 1):
            bn = math.comb(k, j)
            A[j] += ((-1) ** k) * ck * bn * s0 ** (k - j)
            B[j] += ck * bn * s0 ** (k - j)
    mom = bump_log_moments(_MOMENTS_KMAX)
    mM = np.zeros(P)
    for q in range(P):
        mM[q] = sum(
            mom[r] * ((-1) ** r) * math.comb(r, q) * s0 ** (r - q) / math.factorial(r)
            for r in range(q, len(mom))
        )
    return A, B, mM


def _support_arrays(table: CoefficientTable):
    nz = table.nonzero_support()
    if len(nz) == 0:
        raise InvalidArgumentError("coefficient table is identically zero")
    return nz.astype(np.int64), table.values[nz].astype(np.float64)


def _check_budget(nd: int, ne: int, budget: int | None):
    budget = DEFAULT_PAIR_BUDGET if budget is None else budget
    if nd * ne > budget:
        raise BudgetExceededError(
            f"pair count {nd}*{ne} = {nd*ne} exceeds budget {budget}; lower N"
        )


def _combine_partials(partials: np.ndarray) -> tuple[float, float]:
    """Neumaier-combine (sum, comp) chunk rows in fixed order."""
    total = 0.0
    comp = 0.0
    for k in range(partials.shape[0]):
        for x in (partials[k, 0], partials[k, 1]):
            t = total + x
            if abs(total) >= abs(x):
                comp += (total - t) + x
            else:
                comp += (x - t) + total
            total = t
    return total + comp, comp


# ---------------------------------------------------------------------------
# main terms
# ---------------------------------------------------------------------------


def main_term_pair(
    table_d: CoefficientTable,
    table_e: CoefficientTable,
    shifts: ShiftPair,
    T: float,
    mode: str = "auto",
    jet_order: int = 0,
    budget: int | None = None,
) -> MomentReport:
    """Main term of the twisted second moment for a (d, e) coefficient pair.

    ``table_d`` and ``table_e`` may be the same table (the |A|^2 case) or
    different ones (the A * conj(B) cross moment); the summation range is
    the full rectangle of nonzero support.
    """
    if T <= 0:
        raise InvalidArgumentError("T must be positive")
    s = shifts.total
    if mode == "auto":
        mode = "pointwise" if s != 0.0 else "jet"
    nzd, avd = _support_arrays(table_d)
    nze, ave = _support_arrays(table_e)
    _check_budget(len(nzd), len(nze), budget)
    lt = math.log(T)
    mom = bump_log_moments(_MOMENTS_KMAX)
    m0 = float(mom[0])
    npairs = len(nzd) * len(nze)

    if mode == "pointwise":
        if s == 0.0:
            raise InvalidArgumentError(
                "pointwise mode needs alpha + beta != 0; use jet mode"
            )
        parts = _K.pair_pointwise(nzd, avd, nze, ave, shifts.alpha, shifts.beta, lt)
        s1, c1 = _combine_partials(parts[:, (0, 1)])
        s2, c2 = _combine_partials(parts[:, (2, 3)])
        z1 = zeta_1p_small(s)
        z2 = zeta_1p_small(-s)
        plus = z1 * m0 * T * s1
        minus = z2 * _mphi(s) * T * s2
        return MomentReport(
            value=plus + minus,
            zeta_plus_piece=plus,
            zeta_minus_piece=minus,
            t_integral=T * m0,
            pair_count=npairs,
            comp_residual=abs(c1) + abs(c2),
            mode="pointwise",
        )

    if mode == "limit":
        parts = _K.pair_limit(nzd, avd, nze, ave, lt, m0, float(mom[1]), 2.0 * EULER_C0)
        s1, c1 = _combine_partials(parts)
        return MomentReport(
            value=T * s1,
            zeta_plus_piece=T * s1,
            zeta_minus_piece=0.0,
            t_integral=T * m0,
            pair_count=npairs,
            comp_residual=abs(c1) * T,
            mode="limit",
        )

    if mode == "jet":
        jet = main_term_jet(
            table_d, shifts, T, max(jet_order, 0), table_e=table_e, budget=budget
        )
        return MomentReport(
            value=jet.value(),
            zeta_plus_piece=jet.value(),
            zeta_minus_piece=0.0,
            t_integral=T * m0,
            pair_count=npairs,
            comp_residual=0.0,
            mode="jet",
        )

    raise InvalidArgumentError(f"unknown mode {mode!r}")


def main_term_I(
    coeffs: CoefficientTable,
    shifts: ShiftPair,
    T: float,
    mode: str = "auto",
    jet_order: int = 0,
    budget: int | None = None,
) -> MomentReport:
    """Main term of I(alpha, beta) = int zeta zeta |A|^2 Phi(t/T) dt."""
    return main_term_pair(coeffs, coeffs, shifts, T, mode, jet_order, budget)


def main_term_limit(
    coeffs: CoefficientTable, T: float, budget: int | None = None
) -> MomentReport:
    """The alpha, beta -> 0 closed form:

    sum_{d,e} (a_d a_e/[d,e]) int (log(t (d,e)^2 / 2 pi d e) + 2 C0) Phi(t/T) dt
    """
    sh = ShiftPair(0.0, 0.0, max(math.log(max(T, 3.0)), 1.0))
    return main_term_pair(coeffs, coeffs, sh, T, mode="limit", budget=budget)


def main_term_upsilon(
    a: CoefficientTable,
    b: CoefficientTable,
    shifts: ShiftPair,
    T: float,
    mode: str = "auto",
    jet_order: int = 0,
    budget: int | None = None,
) -> MomentReport:
    """Main term of the cross moment int zeta zeta A conj(B) Phi(t/T) dt."""
    return main_term_pair(a, b, shifts, T, mode, jet_order, budget)


def main_term_J(
    a: CoefficientTable,
    b: CoefficientTable,
    shifts: ShiftPair,
    T: float,
    mode: str = "auto",
    jet_order: int = 0,
    budget: int | None = None,
) -> MomentReport:
    """Main term of int zeta zeta |A|^2 |B|^2 Phi(t/T) dt.

    Forms the Dirichlet-convolution coefficients out_d = sum_{nk=d} a_n b_k
    on length N*K and delegates; requires N >= K.
    """
    if a.length < b.length:
        raise InvalidArgumentError("needs len(a) >= len(b)")
    conv = convolve_coeffs(a, b)
    return main_term_pair(conv, conv, shifts, T, mode, jet_order, budget)


def main_term_jet(
    coeffs: CoefficientTable,
    shifts: ShiftPair,
    T: float,
    order: int,
    table_e: CoefficientTable | None = None,
    budget: int | None = None,
) -> BivariateJet:
    """Bivariate jet of the main term around (alpha, beta).

    The grid entry [i, j] is the Taylor coefficient; multiply by i! j! for
    the mixed partial.  Exact truncated-series algebra throughout; the
    zeta pole at alpha+beta = 0 cancels inside the bracket, so the base
    point may sit anywhere (including the origin).
    """
    if T <= 0:
        raise InvalidArgumentError("T must be positive")
    if order < 0:
        raise InvalidArgumentError("order must be >= 0")
    other = coeffs if table_e is None else table_e
    nzd, avd = _support_arrays(coeffs)
    nze, ave = _support_arrays(other)
    _check_budget(len(nzd), len(nze), budget)
    a0, b0 = shifts.alpha, shifts.beta
    s0 = a0 + b0
    A, B, mM = _k_series_tables(s0, order)
    mom = bump_log_moments(_MOMENTS_KMAX)
    binom2 = np.array(
        [[math.comb(i + j, i) for j in range(order + 1)] for i in range(order + 1)],
        dtype=np.float64,
    )
    parts = _K.pair_jet(
        nzd, avd, nze, ave, a0, b0, math.log(T), order, A, B, mM, float(mom[0]), binom2
    )
    grid = np.zeros((order + 1, order + 1))
    for k in range(parts.shape[0]):
        grid += parts[k, 0] + parts[k, 1]
    return BivariateJet((a0, b0), order, grid * T)


# ---------------------------------------------------------------------------
# quadrature oracle
# ---------------------------------------------------------------------------

# Gauss-Kronrod 15(7) nodes/weights on [-1, 1]
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG7 = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])


@dataclass(frozen=True)
class QuadratureControl:
    """Step control for the quadrature oracle."""

    rel_tol: float = 1e-8
    max_points: int = 20_000_000
    panels_per_spacing: float = 1.25
    max_refinements: int = 3
    term_op_budget: int = 6_000_000_000


def _integrand_batch(pts, coeffs: CoefficientTable, shifts: ShiftPair):
    alpha, beta = shifts.alpha, shifts.beta
    nz = coeffs.nonzero_support().astype(np.int64)
    if len(nz) == 1 and nz[0] == 1:
        a2 = np.full(len(pts), coeffs.values[1] ** 2)
    else:
        a2 = _K.dirichlet_poly_sq_batch(
            pts, nz, coeffs.values[nz] / np.sqrt(nz.astype(np.float64))
        )
    out = np.empty(len(pts), dtype=np.complex128)
    hi = pts > T_SWITCH
    if np.any(~hi):
        tlo = pts[~hi]
        em_m = int(math.ceil(tlo.max() / 2.0)) + 20
        out[~hi] = _K.em_pair_product_batch(tlo, alpha, beta, em_m, 8)
    if np.any(hi):
        thi = pts[hi]
        if alpha == 0.0 and beta == 0.0:
            z = _K.rs_z_batch(thi)
            out[hi] = z * z
        else:
            em_m = int(math.ceil(thi.max() / 2.0)) + 20
            out[hi] = _K.em_pair_product_batch(thi, alpha, beta, em_m, 8)
    return out * a2


def _estimate_term_ops(pts, shifts):
    tmax = 2.0  # placeholder overwritten below
    tmax = float(np.max(pts))
    if shifts.alpha == 0.0 and shifts.beta == 0.0:
        per = math.sqrt(max(tmax, 1.0) / (2 * math.pi)) + 30
        below = np.count_nonzero(pts <= T_SWITCH)
        return int(len(pts) - below) * int(per) + below * int(
            min(tmax, T_SWITCH) / 2 + 20
        )
    return len(pts) * int(tmax / 2 + 20)


def quadrature_I(
    coeffs: CoefficientTable,
    shifts: ShiftPair,
    T: float,
    step_control: QuadratureControl | None = None,
) -> MomentReport:
    """Direct adaptive quadrature of the moment integral over [T, 2T].

    Independent of the main-term evaluators: the integrand is built from
    the zeta evaluator and a direct Dirichlet-polynomial sum, integrated
    with Gauss-Kronrod 15(7) panels whose rule-pair differences drive
    refinement and the error estimate.
    """
    if T <= 0 or T > 2.0e5:
        raise InvalidArgumentError("quadrature oracle supports 0 < T <= 2e5")
    if coeffs.length > 1000:
        raise InvalidArgumentError("quadrature oracle supports N <= 1000")
    ctl = step_control or QuadratureControl()
    spacing = 2 * math.pi / math.log(2 * T / (2 * math.pi))
    npan = int(math.ceil(T / (spacing / ctl.panels_per_spacing)))
    value = err = imag = 0.0
    pts_used = 0
    degraded = True
    for _ in range(ctl.max_refinements + 1):
        if npan * 15 > ctl.max_points:
            raise BudgetExceededError(
                f"panel refinement needs {npan*15} points > {ctl.max_points}"
            )
        edges = np.linspace(T, 2 * T, npan + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        pts = (mids[:, None] + half[:, None] * _XGK[None, :]).ravel()
        if _estimate_term_ops(pts, shifts) > ctl.term_op_budget:
            raise BudgetExceededError(
                "integrand cost exceeds the term-operation budget; "
                "lower T or zero the shifts"
            )
        f = _integrand_batch(pts, coeffs, shifts) * bump(pts / T)
        F = f.reshape(npan, 15)
        k15 = (F * _WGK[None, :]).sum(axis=1) * half
        g7 = (F[:, 1::2] * _WG7[None, :]).sum(axis=1) * half
        tot = k15.sum()
        value, imag = float(tot.real), float(tot.imag)
        err = float(np.abs(k15 - g7).sum())
        pts_used = len(pts)
        if err <= ctl.rel_tol * max(abs(value), 1e-300):
            degraded = False
            break
        npan *= 2
    mom = bump_log_moments(_MOMENTS_KMAX)
    return MomentReport(
        value=value,
        zeta_plus_piece=value,
        zeta_minus_piece=0.0,
        t_integral=T * float(mom[0]),
        pair_count=pts_used,
        comp_residual=0.0,
        mode="quadrature",
        error_estimate=err,
        panel_count=pts_used // 15,
        imag_residual=imag,
        degraded=degraded,
    )


# ---------------------------------------------------------------------------
# smoothing operator and the zero-proportion pipeline
# ---------------------------------------------------------------------------


def apply_Q_operator(
    Q: UnitPolynomial,
    coeffs: CoefficientTable,
    T: float,
    eval_point: float,
    jet_order: int = 12,
    budget: int | None = None,
) -> float:
    """Q(-(1/L) d/dalpha) Q(-(1/L) d/dbeta) of the main term at a diagonal point.

    L = log T.  The jet order must cover mixed partials up to twice the
    polynomial degree.
    """
    L = math.log(T)
    deg = Q.degree
    if jet_order < 2 * deg:
        raise InvalidArgumentError(
            f"jet order {jet_order} insufficient for operator degree {deg}"
        )
    sh = ShiftPair(eval_point, eval_point, L)
    jet = main_term_jet(coeffs, sh, T, jet_order, budget=budget)
    q = Q.coefficients
    total = 0.0
    for i in range(deg + 1):
        if q[i] == 0.0:
            continue
        for j in range(deg + 1):
            if q[j] == 0.0:
                continue
            total += (
                q[i]
                * q[j]
                * (-1.0 / L) ** (i + j)
                * math.factorial(i)
                * math.factorial(j)
                * jet.coeffs[i, j]
            )
    return float(total)


@dataclass(frozen=True)
class KappaConfig:
    """Parameters of the zero-proportion run (two-piece mollifier + operator)."""

    T: float
    R: float = 1.3025
    theta1: float = 4.0 / 7.0
    theta2: float = 6.0 / 11.0
    K: int = 3
    P1: UnitPolynomial = None
    feng_polys: tuple = None
    Q: UnitPolynomial = None
    jet_order: int = 12
    budget: int | None = None


def preset_feng2011(T: float) -> KappaConfig:
    """The published two-piece configuration: R = 1.3025, K = 3, and the
    fixed smoothing polynomials."""
    P1 = UnitPolynomial.from_momentum_basis(
        [(1.0, 0), (0.327608, 1), (-1.62086, 2), (-0.160377, 3), (1.29018, 4)]
    )
    P2 = UnitPolynomial((0.0, 0.197567, 2.40831))
    P3 = UnitPolynomial((0.0, 0.649142, 1.042))
    Q = UnitPolynomial.from_reflected_basis(
        [(0.491203, 0), (0.630413, 1), (-0.149615, 3), (0.0279997, 5)]
    )
    return KappaConfig(T=T, P1=P1, feng_polys=(P2, P3), Q=Q)


@dataclass(frozen=True)
class KappaReport:
    kappa_est: float
    E_value: float
    mean_ratio: float
    T: float
    R: float
    N1: int
    N2: int
    note: str = (
        "smoothed-to-sharp normalization: mean = E / (T * int Phi); "
        "desk-scale heuristic, kappa_est is a trend diagnostic"
    )

    def csv_row(self) -> str:
        return (
            f"{self.T!r},{self.N1},{self.N2},{self.E_value!r},{self.kappa_est!r}"
        )


def mollifier_lengths(config: KappaConfig) -> tuple[int, int]:
    L = math.log(config.T)
    N1 = max(1, int(config.T**config.theta1 / L))
    N2 = max(1, int(config.T**config.theta2 / L))
    return N1, N2


def build_two_piece(config: KappaConfig) -> CoefficientTable:
    """The two-piece mollifier table used by the kappa pipeline.

    Coefficients are the half-line recentered ones (sigma0_shift = 0):
    evaluating the sigma0-weighted mollifier at sigma0 + it is identically
    the unweighted Dirichlet polynomial at 1/2 + it, which is what the
    moment integral sees.
    """
    L = math.log(config.T)
    N1, N2 = mollifier_lengths(config)
    c1 = conrey_coeffs(N1, config.P1, 0.0)
    c2 = feng_coeffs(N2, list(config.feng_polys), config.K, L, 0.0)
    return two_piece_coeffs(c1, c2)


def kappa_lower_bound(config: KappaConfig) -> KappaReport:
    """Finite-size estimate of the critical-line zero proportion bound.

    Builds the two-piece mollifier, applies the smoothing operator to the
    moment main term at alpha = beta = -R/L, normalizes the smoothed
    integral to a sharp mean, and returns 1 - log(mean)/R.
    """
    if config.P1 is None or config.feng_polys is None or config.Q is None:
        raise InvalidArgumentError("config needs P1, feng_polys and Q (see preset)")
    T, R = config.T, config.R
    L = math.log(T)
    table = build_two_piece(config)
    E = apply_Q_operator(
        config.Q, table, T, -R / L, jet_order=config.jet_order, budget=config.budget
    )
    mom = bump_log_moments(_MOMENTS_KMAX)
    m = E / (T * float(mom[0]))
    if m <= 0.0:
        raise InvalidResultError(f"normalized moment mean {m} <= 0")
    N1, N2 = mollifier_lengths(config)
    return KappaReport(
        kappa_est=1.0 - math.log(m) / R,
        E_value=float(E),
        mean_ratio=float(m),
        T=T,
        R=R,
        N1=N1,
        N2=N2,
    )


def kappa_trivial(T: float, R: float = 1.3025) -> KappaReport:
    """The no-mollifier baseline: A = 1 and a trivial smoothing operator."""
    L = math.log(T)
    sh = ShiftPair(-R / L, -R / L, L)
    rep = main_term_I(delta_coeffs(), sh, T, mode="pointwise")
    mom = bump_log_moments(_MOMENTS_KMAX)
    m = rep.value / (T * float(mom[0]))
    if m <= 0.0:
        raise InvalidResultError(f"normalized moment mean {m} <= 0")
    return KappaReport(
        kappa_est=1.0 - math.log(m) / R,
        E_value=float(rep.value),
        mean_ratio=float(m),
        T=T,
        R=R,
        N1=1,
        N2=1,
    )
