"""Pure-numpy implementations of the hot kernels.

Mirror of ``_kernels_nb``; selected when numba is unavailable or
``ZETAMOLL_NO_NUMBA`` is set.  Every public function here has an
identically-named twin in the numba module and the two are compared in
tests / benchmarks.
"""

import math

import numpy as np

# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------


def sieve_spf(limit):
    """Smallest-prime-factor array, spf[0] = spf[1] = 0."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 2:
        idx = np.arange(limit + 1)
        for i in range(2, int(limit**0.5) + 1):
            if spf[i] == 0:
                sl = slice(i * i, limit + 1, i)
                sub = spf[sl]
                sub[sub == 0] = i
                spf[sl] = sub
        rest = (spf == 0) & (idx >= 2)
        spf[rest] = idx[rest]
    return spf


def sieve_mobius_arr(limit):
    mu = np.ones(limit + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if not is_comp[p]:
            mu[p::p] *= -1
            if p * p <= limit:
                is_comp[p * p :: p] = True
                mu[p * p :: p * p] = 0
    return mu


def von_mangoldt_arr(limit, spf):
    lam = np.zeros(limit + 1, dtype=np.float64)
    for p in range(2, limit + 1):
        if spf[p] == p:  # prime
            lp = math.log(p)
            pk = p
            while pk <= limit:
                lam[pk] = lp
                pk *= p
    return lam


def dirichlet_convolve_arr(f, g):
    limit = len(f) - 1
    out = np.zeros(limit + 1, dtype=np.float64)
    for d in range(1, limit + 1):
        fd = f[d]
        if fd != 0.0:
            kmax = limit // d
            out[d :: d] += fd * g[1 : kmax + 1]
    return out


def divisor_count_arr(limit):
    tau = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        tau[d::d] += 1
    return tau


def euler_phi_arr(limit):
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:  # untouched => prime
            phi[p::p] -= phi[p::p] // p
    return phi

# ---------------------------------------------------------------------------
# zeta on the half-line: Riemann-Siegel and Euler-Maclaurin batches
# ---------------------------------------------------------------------------

_B2N = np.array([1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510])


def _lgamma_stirling_vec(z):
    res = (z - 0.5) * np.log(z) - z + 0.9189385332046727
    z2 = z * z
    term = 1.0 / z
    for n in range(1, 9):
        res = res + _B2N[n - 1] / ((2 * n) * (2 * n - 1)) * term
        term = term / z2
    return res


def rs_theta(t):
    lg = _lgamma_stirling_vec(np.asarray(0.25 + 0.5j * np.asarray(t)))
    return np.imag(lg) - 0.5 * np.asarray(t) * math.log(math.pi)


def _rs_psi_vec(p):
    g = 2.0 * np.pi * p * p - np.pi / 8.0
    return np.cos(g) + np.sin(g) * np.sin(2 * np.pi * p) / np.cos(2 * np.pi * p)


def _rs_psi_d3_vec(p):
    h = 0.01
    f = _rs_psi_vec
    return (-f(p - 3 * h) + 8 * f(p - 2 * h) - 13 * f(p - h)
            + 13 * f(p + h) - 8 * f(p + 2 * h) + f(p + 3 * h)) / (8 * h ** 3)


def rs_z_batch(ts):
    ts = np.asarray(ts, dtype=np.float64)
    a = np.sqrt(ts / (2 * np.pi))
    ms = a.astype(np.int64)
    th = rs_theta(ts)
    out = np.empty(len(ts))
    for mval in np.unique(ms):
        sel = ms == mval
        tt = ts[sel]
        ns = np.arange(1, mval + 1, dtype=np.float64)
        S = 2.0 * (np.cos(th[sel][:, None] - tt[:, None] * np.log(ns)[None, :])
                   / np.sqrt(ns)[None, :]).sum(axis=1)
        p = a[sel] - mval
        corr = _rs_psi_vec(p) + _rs_psi_d3_vec(p) / (96 * np.pi ** 2) * (tt / (2 * np.pi)) ** (-0.5)
        sgn = 1.0 if (mval - 1) % 2 == 0 else -1.0
        out[sel] = S + sgn * (tt / (2 * np.pi)) ** (-0.25) * corr
    return out


def em_pair_product_batch(ts, alpha, beta, em_m, nbern):
    ts = np.asarray(ts, dtype=np.float64)
    ns = np.arange(1, em_m, dtype=np.float64)
    logs = np.log(ns)
    ca = ns ** (-0.5 - alpha)
    cb = ns ** (-0.5 - beta)
    out = np.empty(len(ts), dtype=np.complex128)
    CH = 512
    for i0 in range(0, len(ts), CH):
        tt = ts[i0:i0 + CH]
        ph = tt[:, None] * logs[None, :]
        e = np.exp(-1j * ph)
        z1 = e @ ca
        z2 = np.conj(e) @ cb
        M = float(em_m)
        for (sv, z) in ((0.5 + alpha + 1j * tt, z1), (0.5 + beta - 1j * tt, z2)):
            acc = M ** (-sv) / 2.0 + M ** (1.0 - sv) / (sv - 1.0)
            poch = sv.copy()
            Mp = M ** (-sv - 1.0)
            for j in range(1, nbern + 1):
                acc += _B2N[j - 1] / math.factorial(2 * j) * poch * Mp
                poch = poch * (sv + 2 * j - 1) * (sv + 2 * j)
                Mp = Mp / (M * M)
            z += acc
        out[i0:i0 + CH] = z1 * z2
    return out


def dirichlet_poly_sq_batch(ts, nvals, coeffs):
    ts = np.asarray(ts, dtype=np.float64)
    logs = np.log(nvals.astype(np.float64))
    out = np.empty(len(ts))
    CH = 4096
    for i0 in range(0, len(ts), CH):
        tt = ts[i0:i0 + CH]
        A = np.exp(-1j * tt[:, None] * logs[None, :]) @ coeffs
        out[i0:i0 + CH] = np.abs(A) ** 2
    return out


def contour_apply_batch(coefs, sigma, ys, xs):
    xs = np.asarray(xs, dtype=np.float64)
    lx = np.log(xs)
    out = np.empty(len(xs), dtype=np.complex128)
    CH = 2048
    for i0 in range(0, len(xs), CH):
        l = lx[i0:i0 + CH]
        out[i0:i0 + CH] = np.exp(-sigma * l) * (np.exp(-1j * np.outer(l, ys)) @ coefs)
    return out

# ---------------------------------------------------------------------------
# pair sums for the moment main terms
# ---------------------------------------------------------------------------

_LOG2PI = math.log(2.0 * math.pi)
_ROWBLOCK = 8_000_000  # max pairs per vectorized row block


def _pair_blocks(nzd, nze):
    """Yield (d_slice, gcd, m, n, 1/(h m n)) row blocks of the pair grid."""
    nd = len(nzd)
    ne = max(len(nze), 1)
    rows = max(1, _ROWBLOCK // ne)
    for r0 in range(0, nd, rows):
        dblk = nzd[r0 : r0 + rows]
        g = np.gcd.outer(dblk, nze)
        m = (dblk[:, None] // g).astype(np.float64)
        n = (nze[None, :] // g).astype(np.float64)
        inv = 1.0 / (g.astype(np.float64) * m * n)
        yield slice(r0, r0 + len(dblk)), m, n, inv


def pair_pointwise(nzd, avd, nze, ave, alpha, beta, lt):
    s = alpha + beta
    out = np.zeros((1, 4))
    s1 = 0.0
    s2 = 0.0
    for rsl, m, n, inv in _pair_blocks(nzd, nze):
        w = np.outer(avd[rsl], ave) * inv
        lm = np.log(m)
        ln_ = np.log(n)
        pref = w * np.exp(-alpha * lm - beta * ln_)
        s1 += float(pref.sum())
        s2 += float((pref * np.exp(s * (_LOG2PI + lm + ln_ - lt))).sum())
    out[0, 0] = s1
    out[0, 2] = s2
    return out


def pair_limit(nzd, avd, nze, ave, lt, m0, phi1, two_c0):
    out = np.zeros((1, 2))
    acc = 0.0
    for rsl, m, n, inv in _pair_blocks(nzd, nze):
        w = np.outer(avd[rsl], ave) * inv
        acc += float(
            (w * (m0 * (lt - (_LOG2PI + np.log(m) + np.log(n)) + two_c0) + phi1)).sum()
        )
    out[0, 0] = acc
    return out


def pair_jet(nzd, avd, nze, ave, a0, b0, lt, order, A, B, mM, m0, binom2):
    s0 = a0 + b0
    P = order + 2
    out = np.zeros((1, 2, order + 1, order + 1))
    acc = np.zeros((order + 1, order + 1))
    for rsl, m, n, inv in _pair_blocks(nzd, nze):
        w = (np.outer(avd[rsl], ave) * inv).ravel()
        lm = np.log(m).ravel()
        ln_ = np.log(n).ravel()
        npair = len(w)
        c = _LOG2PI + lm + ln_ - lt
        E = np.empty((P, npair))
        E[0] = np.exp(c * s0)
        for p in range(1, P):
            E[p] = E[p - 1] * c / p
        H = np.zeros((P, npair))
        for p in range(P):
            for q in range(p + 1):
                H[p] += E[q] * mM[p - q]
        num = -H
        num[0] += m0
        Qp = np.empty((P, npair))
        if s0 == 0.0:
            Qp[: P - 1] = num[1:]
            Qp[P - 1] = 0.0
        else:
            Qp[0] = num[0] / s0
            for p in range(1, P):
                Qp[p] = (num[p] - Qp[p - 1]) / s0
        Kj = Qp + A[:, None] * m0
        for p in range(P):
            for q in range(p + 1):
                Kj[p] += B[q] * H[p - q]
        X = np.empty((order + 1, npair))
        Y = np.empty((order + 1, npair))
        X[0] = np.exp(-a0 * lm)
        Y[0] = np.exp(-b0 * ln_)
        for p in range(1, order + 1):
            X[p] = X[p - 1] * (-lm) / p
            Y[p] = Y[p - 1] * (-ln_) / p
        for ii in range(order + 1):
            for jj in range(order + 1 - ii):
                sacc = np.zeros(npair)
                for u in range(ii + 1):
                    for v in range(jj + 1):
                        sacc += X[u] * Y[v] * (Kj[(ii - u) + (jj - v)] * binom2[ii - u, jj - v])
                acc[ii, jj] += float((w * sacc).sum())
    out[0, 0] = acc
    return out

# ---------------------------------------------------------------------------
# exponential sums
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * math.pi


def _inverse_table(c):
    """x -> x^{-1} mod c for residues coprime to c (0 elsewhere)."""
    inv = np.zeros(c + 1, dtype=np.int64)
    for x in range(1, c + 1):
        if math.gcd(x, c) == 1:
            inv[x] = pow(x, -1, c) if c > 1 else 0
    return inv


def kloosterman_value(a, b, c):
    if c == 1:
        return 1.0, 0.0
    a %= c
    b %= c
    xs = np.arange(1, c + 1)
    cop = np.gcd(xs, c) == 1
    xs = xs[cop]
    inv = _inverse_table(c)[xs]
    ph = _TWO_PI * ((a * xs + b * inv) % c) / c
    return float(np.cos(ph).sum()), float(np.sin(ph).sum())


def kloosterman_batch(av, bv, cv):
    out = np.empty((len(av), 2))
    for c in np.unique(cv):
        sel = np.nonzero(cv == c)[0]
        c = int(c)
        if c == 1:
            out[sel, 0] = 1.0
            out[sel, 1] = 0.0
            continue
        xs = np.arange(1, c + 1)
        cop = np.gcd(xs, c) == 1
        xs = xs[cop]
        inv = _inverse_table(c)[xs]
        for i in sel:
            ph = _TWO_PI * (((av[i] % c) * xs + (bv[i] % c) * inv) % c) / c
            out[i, 0] = np.cos(ph).sum()
            out[i, 1] = np.sin(ph).sum()
    return out


def weil_exhaustive(cmax, tau):
    out = np.zeros((cmax + 1, 2))
    for c in range(1, cmax + 1):
        if c == 1:
            out[1, 0] = 0.0
            out[1, 1] = 1.0 / tau[1]
            continue
        xs = np.arange(1, c + 1)
        cop = np.gcd(xs, c) == 1
        xs = xs[cop]
        inv = _inverse_table(c)[xs]
        # S(a, b) = sum_x e(ax/c) e(b xbar/c) for all a, b at once
        U = np.exp(2j * np.pi * np.outer(np.arange(c), xs) / c)
        W = np.exp(2j * np.pi * np.outer(inv, np.arange(c)) / c)
        S = U @ W
        gc = np.gcd(np.arange(c), c)
        g = np.gcd.outer(gc, gc)  # equals gcd(a, b, c)
        bound = tau[c] * math.sqrt(c) * np.sqrt(g.astype(np.float64))
        mag = np.abs(S)
        ratio = mag / bound
        out[c, 0] = float(np.count_nonzero(mag > bound + 1e-7))
        out[c, 1] = float(ratio.max())
    return out


def incomplete_kloosterman_sum(f_lo, f_hi, e_val, v, n_val, weighted, mu2):
    fs = np.arange(f_lo, f_hi + 1, dtype=np.int64)
    keep = (np.gcd(fs, v) == 1) & (np.gcd(fs, e_val) == 1)
    fs = fs[keep]
    w = np.ones(len(fs))
    if weighted:
        w = mu2[fs]
        fs = fs[w != 0.0]
        w = w[w != 0.0]
    if len(fs) == 0:
        return 0.0, 0.0
    inv = _inverse_table(v)
    fb = inv[(e_val % v) * (fs % v) % v]
    ph = -_TWO_PI * ((n_val % v) * fb % v) / v
    return float((w * np.cos(ph)).sum()), float((w * np.sin(ph)).sum())


def bilinear_lhs(nu, alpha_m, beta_n, A, M, N):
    partial = np.zeros((N, 2))
    avals = np.arange(A, 2 * A)
    for idx in range(N):
        n = N + idx
        inv = _inverse_table(n)
        acc = 0.0 + 0.0j
        for m in range(M, 2 * M):
            if math.gcd(m, n) != 1:
                continue
            w = inv[m % n] if n > 1 else 0
            ph = np.exp(2j * np.pi * w * avals / n)
            acc += alpha_m[m - M] * (nu * ph).sum()
        acc *= beta_n[idx]
        partial[idx, 0] = acc.real
        partial[idx, 1] = acc.imag
    return partial


def trilinear_lhs(cmat, A, B, N, V, rho):
    partial = np.zeros(V)
    nvals = np.arange(1, N + 1)
    for vi in range(V):
        v = vi + 1
        inv = _inverse_table(v)
        avals = np.arange(1, A + 1)
        acop = np.gcd(avals % v, np.int64(v)) == 1 if v > 1 else np.ones(A, dtype=bool)
        acc = 0.0
        for b in range(1, B + 1):
            if math.gcd(b * rho, v) != 1:
                continue
            tot = 0.0 + 0.0j
            for a in avals[acop]:
                w = inv[((rho % v) * (a % v)) % v * (b % v) % v] if v > 1 else 0
                ph = np.exp(2j * np.pi * w * nvals / v)
                tot += (cmat[a - 1, :] * ph).sum()
            acc += abs(tot)
        partial[vi] = acc
    return partial
