import math
import warnings

import pytest

from abundancy.core import primes_up_to
from abundancy.sieve import sieve_b
from abundancy.stats import (
    EULER_GAMMA,
    cesaro_mean,
    empirical_moment,
    error_series,
    local_moment,
    mu_constant,
    theoretical_moment,
    zeta,
)

PUBLISHED_MEAN_E = -0.38508487292161986


def test_zeta_two_is_pi_squared_over_six():
    assert zeta(2) == math.pi**2 / 6


def test_zeta_known_digits():
    assert abs(zeta(3) - 1.2020569031595943) < 1e-15
    assert abs(zeta(4) - math.pi**4 / 90) < 1e-15
    assert abs(zeta(10) - 1.0009945751278182) < 1e-15


def test_zeta_correctly_rounded_vs_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    for s in (2, 3, 4, 5, 10, 20):
        assert zeta(s) == float(mpmath.zeta(s)), s


def test_zeta_eps_clamp_and_coarse():
    assert zeta(2, 1e-30) == zeta(2, 1e-15)
    assert abs(zeta(2, 1e-3) - math.pi**2 / 6) < 1e-3


def test_zeta_guards():
    with pytest.raises(ValueError):
        zeta(1)
    with pytest.raises(ValueError):
        zeta(2, 0.0)


def test_mu_constant_value():
    mu = mu_constant()
    assert mu == 0.38507933223132607
    # definition assembled from its three terms
    z2 = zeta(2)
    assert mu == EULER_GAMMA / 2 + math.log(24 * z2) / 4 - z2 / 2


def test_mu_constant_vs_high_precision():
    # the double-composed value sits 2 ulp above the correctly rounded
    # constant 0.38507933223132595...; both agree far below 1e-14
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    ref = mpmath.euler / 2 + mpmath.log(24 * mpmath.zeta(2)) / 4 - mpmath.zeta(2) / 2
    assert abs(mu_constant() - float(ref)) < 5e-16


def test_cesaro_mean_ell2(table2):
    assert abs(cesaro_mean(table2, 1_000_000) - zeta(2)) < 2e-5


def test_cesaro_mean_ell3(table3):
    assert abs(cesaro_mean(table3, 1_000_000) - zeta(2) * zeta(3)) < 1e-3


def test_cesaro_prefix_monotone_refinement(table2):
    # longer prefixes land closer to the limit on this decade ladder
    diffs = [abs(cesaro_mean(table2, N) - zeta(2)) for N in (10_000, 1_000_000)]
    assert diffs[1] < diffs[0]


def test_index_terms_guards(table2):
    with pytest.raises(ValueError):
        cesaro_mean(table2, 0)
    with pytest.raises(ValueError):
        cesaro_mean(table2, table2.nmax + 1)


def test_empirical_m1_equals_cesaro(table2):
    assert empirical_moment(table2, 1, 500_000) == cesaro_mean(table2, 500_000)
    with pytest.raises(ValueError):
        empirical_moment(table2, 0, 10)


def test_error_series_naive_reproduces_published_value(table2):
    summary = error_series(table2, method="naive")
    assert summary.mean_E == PUBLISHED_MEAN_E
    assert summary.nmax == 1_000_000


def test_error_series_kahan_headline(table2):
    summary = error_series(table2)
    assert summary.method == "kahan"
    assert abs(summary.mean_E - PUBLISHED_MEAN_E) < 1e-8
    assert summary.minus_mu == -mu_constant()
    assert summary.rel_err == abs(summary.mean_E + mu_constant()) / mu_constant()
    assert summary.rel_err < 2e-5


def test_error_series_methods_cross_agree(table2):
    kah = error_series(table2)
    dd = error_series(table2, method="dd")
    naive = error_series(table2, method="naive")
    assert abs(kah.mean_E - dd.mean_E) < 1e-13
    assert abs(naive.mean_E - dd.mean_E) < 1e-7
    assert abs(kah.last_E - dd.last_E) < 1e-12
    assert abs(naive.last_E - dd.last_E) < 1e-7


def test_error_series_exact_small_n(table2):
    exact = error_series(table2, 20_000, method="exact")
    kah = error_series(table2, 20_000)
    assert abs(exact.mean_E - kah.mean_E) < 1e-10
    with pytest.raises(ValueError):
        error_series(table2, 20_001, method="exact")


def test_error_series_histogram(table2):
    summary = error_series(table2)
    assert summary.bins == 250
    assert len(summary.histogram) == 250
    assert sum(c for _, _, c in summary.histogram) == 1_000_000
    lefts = [left for left, _, _ in summary.histogram]
    assert lefts == sorted(lefts)
    small = error_series(table2, 50_000, bins=10)
    assert len(small.histogram) == 10
    assert sum(c for _, _, c in small.histogram) == 50_000


def test_error_series_deterministic(table2):
    a = error_series(table2)
    b = error_series(sieve_b(2, 1_000_000))
    assert a == b  # float-exact equality across fresh table and rerun


def test_error_series_mean_converges_toward_minus_mu(table2):
    mu = mu_constant()
    near = abs(error_series(table2, 1_000_000).mean_E + mu)
    far = abs(error_series(table2, 10_000).mean_E + mu)
    assert near < far


def test_error_series_guards(table2, table3):
    with pytest.raises(ValueError):
        error_series(table3)
    with pytest.raises(ValueError):
        error_series(table2, method="mystery")
    with pytest.raises(ValueError):
        error_series(table2, bins=0)


# ---------------------------------------------------------------------------
# moments

def test_local_moment_closed_forms():
    assert abs(local_moment(2, 2, 1) - 4 / 3) < 1e-10
    assert abs(local_moment(2, 3, 1) - 9 / 8) < 1e-10


def test_local_moment_m1_product_form():
    for p in (2, 3, 5, 7):
        for ell in (2, 3, 4):
            ref = 1.0
            for i in range(2, ell + 1):
                ref /= 1.0 - p ** (-i)
            assert abs(local_moment(ell, p, 1) - ref) < 1e-9, (ell, p)


def test_local_moment_first_term_floor():
    for ell, p, m in ((2, 2, 3), (3, 5, 2), (4, 7, 1)):
        assert local_moment(ell, p, m) >= 1.0 - 1.0 / p


def test_local_moment_guards():
    for bad in ((1, 2, 1), (2, 1, 1), (2, 2, 0)):
        with pytest.raises(ValueError):
            local_moment(*bad)
    with pytest.raises(ValueError):
        local_moment(2, 2, 1, eps=0.0)


def test_theoretical_moment_m1_within_tail():
    with warnings.catch_warnings():
        warnings.simplefilter("error")  # the self-test must stay quiet
        res = theoretical_moment(2, 1)
    assert abs(res.theoretical - zeta(2)) <= res.tail_bound + 1e-9
    assert res.empirical is None


def test_theoretical_moment_second_within_tail():
    ref = zeta(2) ** 2 * zeta(3) / zeta(4)
    res = theoretical_moment(2, 2)
    assert abs(res.theoretical - ref) <= res.tail_bound


def test_theoretical_moment_third_matches_direct_product():
    # direct evaluation of the ell=2 third-moment Euler product
    direct = zeta(3) * zeta(4)
    for p in primes_up_to(10_000):
        direct *= 1.0 - p**-3 + 3.0 / (p * (p - 1))
    res = theoretical_moment(2, 3)
    assert abs(res.theoretical - direct) < 1e-6


def test_theoretical_moment_cutoff_monotone():
    for ell in (2, 3):
        ref = 1.0
        for i in range(2, ell + 1):
            ref *= zeta(i)
        diffs = []
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for cutoff in (100, 1_000, 10_000):
                diffs.append(
                    abs(theoretical_moment(ell, 1, prime_cutoff=cutoff).theoretical - ref)
                )
        assert diffs[1] < diffs[0]
        assert diffs[2] < diffs[1]


def test_theoretical_moment_guards():
    for bad in ((1, 1), (2, 0)):
        with pytest.raises(ValueError):
            theoretical_moment(*bad)
    with pytest.raises(ValueError):
        theoretical_moment(2, 1, prime_cutoff=1)


def test_empirical_second_moment_near_theoretical(table2):
    emp = empirical_moment(table2, 2, 1_000_000)
    theo = theoretical_moment(2, 2).theoretical
    assert abs(emp - theo) < 1e-2


def test_empirical_ell3_second_moment(table3):
    emp = empirical_moment(table3, 2, 1_000_000)
    theo = theoretical_moment(3, 2).theoretical
    assert abs(emp - theo) < 5e-2
