import cmath
import math

import numpy as np
import pytest

from zetamoll import kloosterman as kl
from zetamoll.arith import euler_phi, sieve_mobius, sieve_von_mangoldt
from zetamoll.errors import InvalidArgumentError


def _brute_kloosterman(a, b, c):
    tot = 0j
    for x in range(1, c + 1):
        if math.gcd(x, c) == 1:
            xb = pow(x, -1, c) if c > 1 else 0
            tot += cmath.exp(2j * math.pi * ((a * x + b * xb) % c) / c)
    return tot if c > 1 else 1 + 0j


def test_complete_examples():
    assert kl.complete_kloosterman(1, 1, 2).value == pytest.approx(1.0, abs=1e-12)
    phi = euler_phi(60)
    for c in (1, 4, 12, 60):
        rec = kl.complete_kloosterman(0, 0, c)
        assert rec.value.real == pytest.approx(float(phi[c]), abs=1e-9)
    rec = kl.complete_kloosterman(1, 1, 3)
    # direct residue-sum oracle: e(2/3) + e(1/3)
    oracle = cmath.exp(2j * math.pi * 2 / 3) + cmath.exp(2j * math.pi / 3)
    assert rec.value == pytest.approx(oracle, abs=1e-12)
    assert rec.value.real == pytest.approx(-1.0, abs=1e-12)


def test_complete_is_real_and_matches_brute_force(rng):
    for _ in range(25):
        c = int(rng.integers(1, 120))
        a = int(rng.integers(0, 3 * c + 1))
        b = int(rng.integers(0, 3 * c + 1))
        rec = kl.complete_kloosterman(a, b, c)
        assert abs(rec.value.imag) < 1e-9
        assert rec.value == pytest.approx(_brute_kloosterman(a, b, c), abs=1e-9)
        assert rec.satisfied


def test_crt_multiplicativity(rng):
    for _ in range(12):
        m = int(rng.integers(2, 40))
        n = int(rng.integers(2, 40))
        if math.gcd(m, n) != 1:
            continue
        a = int(rng.integers(0, m * n))
        b = int(rng.integers(0, m * n))
        nbar = pow(n, -1, m) if m > 1 else 0
        mbar = pow(m, -1, n) if n > 1 else 0
        lhs = kl.complete_kloosterman(a, b, m * n).value
        rhs = (
            kl.complete_kloosterman(a * nbar % m, b * nbar % m, m).value
            * kl.complete_kloosterman(a * mbar % n, b * mbar % n, n).value
        )
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_weil_campaigns_small():
    rep = kl.weil_certificate_exhaustive(60)
    assert rep.failures == 0
    assert rep.max_ratio <= 1.0 + 1e-12
    rr = kl.weil_certificate_random(3000, 800, seed=11)
    assert rr.failures == 0


def test_incomplete_trivial_cases():
    # zero numerator: all phases are 1, the sum counts admissible f
    rep = kl.incomplete_kloosterman((1, 100), 1, 101, 0)
    count = sum(1 for f in range(1, 101) if math.gcd(f, 101) == 1)
    assert rep.value == pytest.approx(count, abs=1e-10)
    # single admissible term has unit modulus
    rep1 = kl.incomplete_kloosterman((7, 7), 2, 9, 5)
    assert abs(rep1.value) == pytest.approx(1.0, abs=1e-12)
    # squarefree weight keeps mu^2(f)
    rep2 = kl.incomplete_kloosterman((8, 8), 1, 5, 1, squarefree_weight=True)
    assert rep2.value == 0.0  # mu^2(8) = 0


def test_incomplete_against_direct_sum(rng):
    mu2 = (sieve_mobius(500).values != 0).astype(float)
    for _ in range(5):
        v = int(rng.integers(5, 120))
        e = int(rng.integers(1, 30))
        if math.gcd(e, v) != 1:
            continue
        n = int(rng.integers(0, 50))
        rep = kl.incomplete_kloosterman((10, 400), e, v, n, squarefree_weight=True)
        tot = 0j
        for f in range(10, 401):
            if math.gcd(f, v * e) == 1 and mu2[f]:
                fb = pow(e * f % v, -1, v) if v > 1 else 0
                tot += cmath.exp(-2j * math.pi * ((n * fb) % v) / v)
        assert rep.value == pytest.approx(tot, abs=1e-8)


def test_incomplete_guards():
    with pytest.raises(InvalidArgumentError):
        kl.incomplete_kloosterman((1, 10), 5, 10, 1)  # gcd(e, v) != 1
    with pytest.raises(InvalidArgumentError):
        kl.incomplete_kloosterman((1, 2_000_001), 1, 7, 1)


def test_heath_brown_mu_exact():
    U = 60
    mu = sieve_mobius(2 * U).values
    for n in range(1, 2 * U + 1):
        assert kl.heath_brown_mu(n, U) == pytest.approx(mu[n], abs=1e-12)
    with pytest.raises(InvalidArgumentError):
        kl.heath_brown_mu(2 * U + 1, U)


def test_heath_brown_lambda_exact():
    U = 60
    lam = sieve_von_mangoldt(2 * U).values
    for n in range(1, 2 * U + 1):
        assert kl.heath_brown_lambda(n, U) == pytest.approx(lam[n], abs=1e-9)


def test_heath_brown_lambda_large_prime_factor():
    # n with a prime factor above sqrt(2U) still reproduces Lambda(n)
    U = 50
    lam = sieve_von_mangoldt(2 * U).values
    for n in (83, 97, 2 * 41, 94):
        assert kl.heath_brown_lambda(n, U) == pytest.approx(lam[n], abs=1e-9)


def test_type_split_degenerate_single_range():
    rs = kl.type_split([1.0, 1.0, 64.0], 64.0, 2.0)
    assert rs.decision == "type_I"
    assert rs.subset == (2,)


def test_type_split_prefix_case():
    # all scales below W/2^{4s+3}: the minimal prefix qualifies
    rs = kl.type_split([16.0] * 6 + [8.0], 2.0**30, 2.0**17)
    assert rs.decision == "type_II"
    assert rs.subset == (0, 1, 2)
    c = 2.0**7
    prod = rs.witness_products["subset_product"]
    assert 2.0**17 / c <= prod <= c * 2.0**30 / 2.0**17


def test_type_split_randomized_postcondition(rng):
    # random admissible dyadic tuples with W = U^{1/6}
    trials = 0
    while trials < 2000:
        s = int(rng.integers(0, 2))
        k = 4 * s + 3
        U = float(2 ** int(rng.integers(14, 40)))
        W = U ** (1.0 / 6.0)
        c = 2.0 ** k
        # build scales whose product lands in [U/c, 2U)
        target = math.log2(U) + float(rng.uniform(-k + 1, 1.0))
        cuts = np.sort(rng.integers(0, int(target) + 1, size=k - 1))
        exps = np.diff(np.concatenate([[0], cuts, [int(target)]]))
        X = [float(2.0 ** int(e)) for e in exps]
        lim = math.sqrt(2 * U)
        if any(x > lim for x in X[: 2 * s + 2]):
            continue
        prod = float(np.prod(X))
        if not U / c <= prod <= 2 * U:
            continue
        trials += 1
        rs = kl.type_split(X, U, W)
        if rs.decision == "type_I":
            assert any(X[i] >= U / (c * W) for i in rs.subset)
        else:
            p = 1.0
            for i in rs.subset:
                p *= X[i]
            assert W / c <= p <= c * U / W


def test_type_split_guards():
    with pytest.raises(InvalidArgumentError):
        kl.type_split([1.0, 1.0], 16.0, 2.0)  # not 4s+3 ranges
    with pytest.raises(InvalidArgumentError):
        kl.type_split([8.0, 1.0, 2.0], 16.0, 2.0)  # mu-slot above sqrt(2U)
    with pytest.raises(InvalidArgumentError):
        kl.type_split([1.0, 1.0, 1.0], 2.0**20, 2.0)  # product too small


def test_bilinear_trivial_cases():
    zero = kl.bilinear_sum_measure(np.zeros(4), np.zeros(4), np.zeros(4))
    assert zero.lhs == 0.0
    # singleton blocks: a = m = n = 1, but (m, n) = (1, 1) is coprime and
    # contributes e(0) = 1
    one = kl.bilinear_sum_measure([1.0], [1.0], [1.0])
    assert one.lhs == pytest.approx(1.0, abs=1e-12)


def test_bilinear_matches_brute_force(rng):
    A = M = N = 6
    nu = rng.choice([-1.0, 1.0], A) + 0j
    al = rng.choice([-1.0, 1.0], M) + 0j
    be = rng.choice([-1.0, 1.0], N) + 0j
    rep = kl.bilinear_sum_measure(nu, al, be)
    tot = 0j
    for ia, a in enumerate(range(A, 2 * A)):
        for im, m in enumerate(range(M, 2 * M)):
            for inn, n in enumerate(range(N, 2 * N)):
                if math.gcd(m, n) != 1:
                    continue
                mb = pow(m % n, -1, n) if n > 1 else 0
                tot += (
                    nu[ia] * al[im] * be[inn]
                    * cmath.exp(2j * math.pi * ((a * mb) % n) / n)
                )
        # loop body complete
    assert rep.lhs == pytest.approx(abs(tot), rel=1e-10)


def test_bilinear_ratio_campaign(rng):
    ratios = []
    for _ in range(10):
        A = M = N = 32
        rep = kl.bilinear_sum_measure(
            rng.choice([-1.0, 1.0], A),
            rng.choice([-1.0, 1.0], M),
            rng.choice([-1.0, 1.0], N),
        )
        ratios.append(rep.ratio)
    assert max(ratios) < 1.0  # bound shape holds with room at this size


def test_trilinear_guards_and_trivial():
    with pytest.raises(InvalidArgumentError):
        kl.trilinear_sum_measure(np.full((3, 3), 2.0), 3, 3, 3, 3, 1)
    c = np.ones((1, 1))
    rep = kl.trilinear_sum_measure(c, 1, 1, 1, 1, 1)
    # single term v=b=a=n=1: e(0) = 1
    assert rep.lhs == pytest.approx(1.0, abs=1e-12)
    assert rep.lhs <= math.sqrt(1.0) * (math.sqrt(1.0) + rep.rhs)


def test_trilinear_matches_brute_force(rng):
    A = B = N = V = 5
    rho = 2
    c = rng.choice([-1.0, 1.0], (A, N)) + 0j
    rep = kl.trilinear_sum_measure(c, A, B, N, V, rho)
    tot = 0.0
    for v in range(1, V + 1):
        for b in range(1, B + 1):
            if math.gcd(b * rho, v) != 1:
                continue
            inner = 0j
            for a in range(1, A + 1):
                if math.gcd(a, v) != 1:
                    continue
                w = pow(rho * a * b % v, -1, v) if v > 1 else 0
                for n in range(1, N + 1):
                    inner += c[a - 1, n - 1] * cmath.exp(
                        2j * math.pi * ((n * w) % v) / v
                    )
            tot += abs(inner)
    assert rep.lhs == pytest.approx(tot, rel=1e-10)


def test_ratio_report_csv():
    rep = kl.bilinear_sum_measure([1.0], [1.0], [1.0])
    row = rep.csv_row()
    assert row.count(",") == 6
