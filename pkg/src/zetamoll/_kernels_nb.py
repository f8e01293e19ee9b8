"""Numba ``@njit`` implementations of the hot kernels.

Same surface as ``_kernels_np``.  All loops avoid python objects;
parallel kernels write per-chunk partials that the caller combines in a
fixed order (see ``_backend.PAIR_CHUNKS``).
"""

import math

import numpy as np
from numba import njit, prange

# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------


@njit(cache=True)
def sieve_spf(limit):
    spf = np.zeros(limit + 1, dtype=np.int64)
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            if i <= limit // i:
                for j in range(i * i, limit + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
    return spf


@njit(cache=True)
def sieve_mobius_arr(limit):
    # linear sieve: each composite is crossed once, via its smallest prime
    mu = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        mu[1] = 1
    is_comp = np.zeros(limit + 1, dtype=np.uint8)
    plist = np.empty(limit + 1, dtype=np.int64)
    cnt = 0
    for i in range(2, limit + 1):
        if is_comp[i] == 0:
            plist[cnt] = i
            cnt += 1
            mu[i] = -1
        for k in range(cnt):
            p = plist[k]
            if p > limit // i:
                break
            is_comp[p * i] = 1
            if i % p == 0:
                mu[p * i] = 0
                break
            mu[p * i] = -mu[i]
    return mu


@njit(cache=True)
def von_mangoldt_arr(limit, spf):
    lam = np.zeros(limit + 1, dtype=np.float64)
    for p in range(2, limit + 1):
        if spf[p] == p:
            lp = math.log(float(p))
            pk = p
            while pk <= limit:
                lam[pk] = lp
                if pk > limit // p:
                    break
                pk *= p
    return lam


@njit(cache=True)
def dirichlet_convolve_arr(f, g):
    limit = len(f) - 1
    out = np.zeros(limit + 1, dtype=np.float64)
    for d in range(1, limit + 1):
        fd = f[d]
        if fd != 0.0:
            kmax = limit // d
            for k in range(1, kmax + 1):
                out[d * k] += fd * g[k]
    return out


@njit(cache=True)
def divisor_count_arr(limit):
    tau = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        for m in range(d, limit + 1, d):
            tau[m] += 1
    return tau


@njit(cache=True)
def euler_phi_arr(limit):
    phi = np.arange(limit + 1).astype(np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:
            for m in range(p, limit + 1, p):
                phi[m] -= phi[m] // p
    return phi

# ---------------------------------------------------------------------------
# zeta on the half-line: Riemann-Siegel and Euler-Maclaurin batches
# ---------------------------------------------------------------------------

_B2N = np.array([1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510])


@njit(cache=True)
def _lgamma_stirling(z):
    # valid for |z| >= ~5, Re z > 0
    res = (z - 0.5) * np.log(z) - z + 0.9189385332046727
    z2 = z * z
    term = 1.0 / z
    for n in range(1, 9):
        res += _B2N[n - 1] / ((2 * n) * (2 * n - 1)) * term
        term = term / z2
    return res


@njit(cache=True)
def rs_theta(t):
    lg = _lgamma_stirling(0.25 + 0.5j * t)
    return lg.imag - 0.5 * t * math.log(math.pi)


@njit(cache=True)
def _rs_psi(p):
    g = 2.0 * math.pi * p * p - math.pi / 8.0
    return math.cos(g) + math.sin(g) * math.sin(2.0 * math.pi * p) / math.cos(2.0 * math.pi * p)


@njit(cache=True)
def _rs_psi_d3(p):
    h = 0.01
    return (-_rs_psi(p - 3 * h) + 8 * _rs_psi(p - 2 * h) - 13 * _rs_psi(p - h)
            + 13 * _rs_psi(p + h) - 8 * _rs_psi(p + 2 * h) + _rs_psi(p + 3 * h)) / (8 * h ** 3)


@njit(cache=True, parallel=True)
def rs_z_batch(ts):
    out = np.empty(len(ts))
    for i in prange(len(ts)):
        t = ts[i]
        a = math.sqrt(t / (2.0 * math.pi))
        m = int(a)
        th = rs_theta(t)
        s = 0.0
        for n in range(1, m + 1):
            s += math.cos(th - t * math.log(float(n))) / math.sqrt(float(n))
        s *= 2.0
        p = a - m
        corr = _rs_psi(p) + _rs_psi_d3(p) / (96.0 * math.pi ** 2) * (t / (2.0 * math.pi)) ** (-0.5)
        sgn = 1.0 if (m - 1) % 2 == 0 else -1.0
        out[i] = s + sgn * (t / (2.0 * math.pi)) ** (-0.25) * corr
    return out


@njit(cache=True, parallel=True)
def em_pair_product_batch(ts, alpha, beta, em_m, nbern):
    """zeta(1/2+alpha+it) * zeta(1/2+beta-it) per t, Euler-Maclaurin."""
    out = np.empty(len(ts), dtype=np.complex128)
    logs = np.empty(em_m)
    for n in range(1, em_m):
        logs[n - 1] = math.log(float(n))
    ca = np.empty(em_m)
    cb = np.empty(em_m)
    for n in range(1, em_m):
        ca[n - 1] = float(n) ** (-0.5 - alpha)
        cb[n - 1] = float(n) ** (-0.5 - beta)
    for i in prange(len(ts)):
        t = ts[i]
        z1 = 0.0 + 0.0j
        z2 = 0.0 + 0.0j
        for n in range(em_m - 1):
            ph = t * logs[n]
            c = math.cos(ph)
            s = math.sin(ph)
            z1 += ca[n] * complex(c, -s)
            z2 += cb[n] * complex(c, s)
        M = float(em_m)
        s1 = complex(0.5 + alpha, t)
        s2 = complex(0.5 + beta, -t)
        for (sv, base) in ((s1, 0), (s2, 1)):
            acc = M ** (-sv) / 2.0 + M ** (1.0 - sv) / (sv - 1.0)
            poch = sv
            Mp = M ** (-sv - 1.0)
            for j in range(1, nbern + 1):
                fact = 1.0
                for q in range(2, 2 * j + 1):
                    fact *= q
                acc += _B2N[j - 1] / fact * poch * Mp
                poch = poch * (sv + 2 * j - 1) * (sv + 2 * j)
                Mp = Mp / (M * M)
            if base == 0:
                z1 += acc
            else:
                z2 += acc
        out[i] = z1 * z2
    return out


@njit(cache=True, parallel=True)
def dirichlet_poly_sq_batch(ts, nvals, coeffs):
    """|sum_n a_n n^{-1/2-it}|^2 per t; nvals int64, coeffs already a_n/sqrt(n)."""
    out = np.empty(len(ts))
    logs = np.log(nvals.astype(np.float64))
    for i in prange(len(ts)):
        t = ts[i]
        re = 0.0
        im = 0.0
        for k in range(len(nvals)):
            ph = t * logs[k]
            re += coeffs[k] * math.cos(ph)
            im -= coeffs[k] * math.sin(ph)
        out[i] = re * re + im * im
    return out


@njit(cache=True, parallel=True)
def contour_apply_batch(coefs, sigma, ys, xs):
    """sum_y coefs[y] * x^{-sigma-i y} for each x; the V/W trapezoid sum."""
    out = np.empty(len(xs), dtype=np.complex128)
    for i in prange(len(xs)):
        lx = math.log(xs[i])
        amp = math.exp(-sigma * lx)
        acc = 0.0 + 0.0j
        for k in range(len(ys)):
            ph = ys[k] * lx
            acc += coefs[k] * complex(math.cos(ph), -math.sin(ph))
        out[i] = amp * acc
    return out

# ---------------------------------------------------------------------------
# pair sums for the moment main terms
# ---------------------------------------------------------------------------

_LOG2PI = math.log(2.0 * math.pi)
_NCHUNK = 64


@njit(cache=True)
def _gcd_i64(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, parallel=True)
def pair_pointwise(nzd, avd, nze, ave, alpha, beta, lt):
    """Per-chunk Neumaier partials of S1 = sum w m^-a n^-b and
    S2 = sum w m^-a n^-b exp(s (log(2 pi m n) - lt)); combined by caller."""
    s = alpha + beta
    out = np.zeros((_NCHUNK, 4))
    nd = len(nzd)
    ne = len(nze)
    for c in prange(_NCHUNK):
        i0 = (c * nd) // _NCHUNK
        i1 = ((c + 1) * nd) // _NCHUNK
        s1 = 0.0
        e1 = 0.0
        s2 = 0.0
        e2 = 0.0
        for i in range(i0, i1):
            d = nzd[i]
            ad = avd[i]
            for j in range(ne):
                e = nze[j]
                h = _gcd_i64(d, e)
                m = d // h
                n = e // h
                lm = math.log(float(m))
                ln_ = math.log(float(n))
                w = ad * ave[j] / (float(h) * float(m) * float(n))
                pref = w * math.exp(-alpha * lm - beta * ln_)
                t = s1 + pref
                if abs(s1) >= abs(pref):
                    e1 += (s1 - t) + pref
                else:
                    e1 += (pref - t) + s1
                s1 = t
                x2 = pref * math.exp(s * (_LOG2PI + lm + ln_ - lt))
                t = s2 + x2
                if abs(s2) >= abs(x2):
                    e2 += (s2 - t) + x2
                else:
                    e2 += (x2 - t) + s2
                s2 = t
        out[c, 0] = s1
        out[c, 1] = e1
        out[c, 2] = s2
        out[c, 3] = e2
    return out


@njit(cache=True, parallel=True)
def pair_limit(nzd, avd, nze, ave, lt, m0, phi1, two_c0):
    """Per-chunk partials of sum_{d,e} w (m0 (lt - log(2 pi m n) + 2 C0) + phi1)."""
    out = np.zeros((_NCHUNK, 2))
    nd = len(nzd)
    ne = len(nze)
    for c in prange(_NCHUNK):
        i0 = (c * nd) // _NCHUNK
        i1 = ((c + 1) * nd) // _NCHUNK
        s1 = 0.0
        e1 = 0.0
        for i in range(i0, i1):
            d = nzd[i]
            ad = avd[i]
            for j in range(ne):
                e = nze[j]
                h = _gcd_i64(d, e)
                m = d // h
                n = e // h
                w = ad * ave[j] / (float(h) * float(m) * float(n))
                x = w * (m0 * (lt - (_LOG2PI + math.log(float(m)) + math.log(float(n))) + two_c0) + phi1)
                t = s1 + x
                if abs(s1) >= abs(x):
                    e1 += (s1 - t) + x
                else:
                    e1 += (x - t) + s1
                s1 = t
        out[c, 0] = s1
        out[c, 1] = e1
    return out


@njit(cache=True, parallel=True)
def pair_jet(nzd, avd, nze, ave, a0, b0, lt, order, A, B, mM, m0, binom2):
    """Per-chunk bivariate jet partials of the main term around (a0, b0).

    A, B: Taylor tables of the zeta(1 +- s) entire parts at s0 = a0+b0;
    mM: Taylor of M_Phi(-s) at s0; all of length order+2.
    Returns (chunks, 2, order+1, order+1): sums and compensations.
    """
    s0 = a0 + b0
    P = order + 2
    out = np.zeros((_NCHUNK, 2, order + 1, order + 1))
    nd = len(nzd)
    ne = len(nze)
    for cch in prange(_NCHUNK):
        i0 = (cch * nd) // _NCHUNK
        i1 = ((cch + 1) * nd) // _NCHUNK
        E = np.empty(P)
        H = np.empty(P)
        num = np.empty(P)
        Qp = np.empty(P)
        Kj = np.empty(P)
        X = np.empty(order + 1)
        Y = np.empty(order + 1)
        G = np.empty((order + 1, order + 1))
        acc = np.zeros((order + 1, order + 1))
        comp = np.zeros((order + 1, order + 1))
        for i in range(i0, i1):
            d = nzd[i]
            ad = avd[i]
            for j in range(ne):
                e = nze[j]
                h = _gcd_i64(d, e)
                m = d // h
                n = e // h
                lm = math.log(float(m))
                ln_ = math.log(float(n))
                w = ad * ave[j] / (float(h) * float(m) * float(n))
                c = _LOG2PI + lm + ln_ - lt
                # E_p = e^{c s0} c^p / p!
                E[0] = math.exp(c * s0)
                for p in range(1, P):
                    E[p] = E[p - 1] * c / p
                # H = E conv mM
                for p in range(P):
                    hv = 0.0
                    for q in range(p + 1):
                        hv += E[q] * mM[p - q]
                    H[p] = hv
                for p in range(P):
                    num[p] = -H[p]
                num[0] += m0
                if s0 == 0.0:
                    for p in range(P - 1):
                        Qp[p] = num[p + 1]
                    Qp[P - 1] = 0.0
                else:
                    Qp[0] = num[0] / s0
                    for p in range(1, P):
                        Qp[p] = (num[p] - Qp[p - 1]) / s0
                for p in range(P):
                    kv = Qp[p] + A[p] * m0
                    for q in range(p + 1):
                        kv += B[q] * H[p - q]
                    Kj[p] = kv
                # exponential factors
                X[0] = math.exp(-a0 * lm)
                Y[0] = math.exp(-b0 * ln_)
                for p in range(1, order + 1):
                    X[p] = X[p - 1] * (-lm) / p
                    Y[p] = Y[p - 1] * (-ln_) / p
                for p in range(order + 1):
                    for q in range(order + 1 - p):
                        G[p, q] = Kj[p + q] * binom2[p, q]
                for ii in range(order + 1):
                    for jj in range(order + 1 - ii):
                        sacc = 0.0
                        for u in range(ii + 1):
                            xu = X[u]
                            for v in range(jj + 1):
                                sacc += xu * Y[v] * G[ii - u, jj - v]
                        x = w * sacc
                        t = acc[ii, jj] + x
                        if abs(acc[ii, jj]) >= abs(x):
                            comp[ii, jj] += (acc[ii, jj] - t) + x
                        else:
                            comp[ii, jj] += (x - t) + acc[ii, jj]
                        acc[ii, jj] = t
        out[cch, 0] = acc
        out[cch, 1] = comp
    return out

# ---------------------------------------------------------------------------
# exponential sums
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * math.pi


@njit(cache=True)
def _mod_inverse(a, m):
    # extended euclid; caller guarantees gcd(a, m) = 1 and m >= 1
    if m == 1:
        return 0
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_s % m


@njit(cache=True)
def kloosterman_value(a, b, c):
    """S(a,b;c) by direct summation over residues coprime to c."""
    a = a % c
    b = b % c
    re = 0.0
    im = 0.0
    for x in range(1, c + 1):
        if _gcd_i64(x, c) == 1:
            xb = _mod_inverse(x, c)
            ph = _TWO_PI * ((a * x + b * xb) % c) / c
            re += math.cos(ph)
            im += math.sin(ph)
    if c == 1:
        return 1.0, 0.0
    return re, im


@njit(cache=True, parallel=True)
def kloosterman_batch(av, bv, cv):
    out = np.empty((len(av), 2))
    for i in prange(len(av)):
        re, im = kloosterman_value(av[i], bv[i], cv[i])
        out[i, 0] = re
        out[i, 1] = im
    return out


@njit(cache=True, parallel=True)
def weil_exhaustive(cmax, tau):
    """Check |S(a,b;c)| <= tau(c) sqrt(c) sqrt(gcd(a,b,c)) for all a,b mod c.

    Returns per-c (failures, max |S|/bound).
    """
    out = np.zeros((cmax + 1, 2))
    for c in prange(1, cmax + 1):
        inv = np.zeros(c + 1, dtype=np.int64)
        cop = np.zeros(c + 1, dtype=np.uint8)
        for x in range(1, c + 1):
            if _gcd_i64(x, c) == 1:
                cop[x] = 1
                inv[x] = _mod_inverse(x, c)
        fails = 0.0
        worst = 0.0
        for a in range(c):
            for b in range(c):
                re = 0.0
                im = 0.0
                for x in range(1, c + 1):
                    if cop[x] == 1:
                        ph = _TWO_PI * ((a * x + b * inv[x]) % c) / c
                        re += math.cos(ph)
                        im += math.sin(ph)
                if c == 1:
                    re, im = 1.0, 0.0
                g = _gcd_i64(_gcd_i64(a if a > 0 else c, b if b > 0 else c), c)
                bound = tau[c] * math.sqrt(float(c)) * math.sqrt(float(g))
                mag = math.sqrt(re * re + im * im)
                r = mag / bound
                if r > worst:
                    worst = r
                if mag > bound + 1e-7:
                    fails += 1.0
        out[c, 0] = fails
        out[c, 1] = worst
    return out


@njit(cache=True)
def incomplete_kloosterman_sum(f_lo, f_hi, e_val, v, n_val, weighted, mu2):
    """sum over f in [f_lo, f_hi] with (f, v*e_val) = 1 of
    [mu^2(f)] e(-n_val * inverse(e_val * f, v) / v)."""
    re = 0.0
    im = 0.0
    nv = n_val % v
    for f in range(f_lo, f_hi + 1):
        if _gcd_i64(f, v) != 1 or _gcd_i64(f, e_val) != 1:
            continue
        w = 1.0
        if weighted:
            w = mu2[f]
            if w == 0.0:
                continue
        fb = _mod_inverse((e_val % v) * (f % v) % v, v)
        ph = -_TWO_PI * ((nv * fb) % v) / v
        re += w * math.cos(ph)
        im += w * math.sin(ph)
    return re, im


@njit(cache=True, parallel=True)
def bilinear_lhs(nu, alpha_m, beta_n, A, M, N):
    """sum over a~A, m~M, n~N, (m,n)=1 of nu_a alpha_m beta_n e(a m^{-1} / n)."""
    partial = np.zeros((N, 2))
    for idx in prange(N):
        n = N + idx
        accre = 0.0
        accim = 0.0
        for m in range(M, 2 * M):
            if _gcd_i64(m, n) != 1:
                continue
            w = _mod_inverse(m % n, n)
            step = _TWO_PI * w / n
            base_re = math.cos(step)
            base_im = math.sin(step)
            # phase of a = A
            ph0 = step * A
            cur_re = math.cos(ph0)
            cur_im = math.sin(ph0)
            sre = 0.0
            sim = 0.0
            for ai in range(A):
                cre = nu[ai].real * cur_re - nu[ai].imag * cur_im
                cim = nu[ai].real * cur_im + nu[ai].imag * cur_re
                sre += cre
                sim += cim
                nre = cur_re * base_re - cur_im * base_im
                cur_im = cur_re * base_im + cur_im * base_re
                cur_re = nre
            am = alpha_m[m - M]
            tre = am.real * sre - am.imag * sim
            tim = am.real * sim + am.imag * sre
            bn = beta_n[idx]
            accre += bn.real * tre - bn.imag * tim
            accim += bn.real * tim + bn.imag * tre
        partial[idx, 0] = accre
        partial[idx, 1] = accim
    return partial


@njit(cache=True, parallel=True)
def trilinear_lhs(cmat, A, B, N, V, rho):
    """sum over v<=V, b<=B with (b rho, v)=1 of | sum_{n<=N} sum_{a<=A,(a,v)=1}
    c(a,n) e(n inv(rho a b, v) / v) |."""
    partial = np.zeros(V)
    for vi in prange(V):
        v = vi + 1
        inv = np.zeros(v, dtype=np.int64)
        for x in range(1, v):
            if _gcd_i64(x, v) == 1:
                inv[x] = _mod_inverse(x, v)
        acc = 0.0
        for b in range(1, B + 1):
            if _gcd_i64((b * rho) % v, v) != 1:
                continue
            sre = 0.0
            sim = 0.0
            for a in range(1, A + 1):
                if _gcd_i64(a % v, v) != 1:
                    continue
                w = inv[((rho % v) * (a % v)) % v * (b % v) % v]
                step = _TWO_PI * w / v
                base_re = math.cos(step)
                base_im = math.sin(step)
                cur_re = base_re
                cur_im = base_im
                for ni in range(N):
                    cc = cmat[a - 1, ni]
                    sre += cc.real * cur_re - cc.imag * cur_im
                    sim += cc.real * cur_im + cc.imag * cur_re
                    nre = cur_re * base_re - cur_im * base_im
                    cur_im = cur_re * base_im + cur_im * base_re
                    cur_re = nre
            acc += math.sqrt(sre * sre + sim * sim)
        partial[vi] = acc
    return partial
