import math

import numpy as np
import pytest

from polytheta import circle
from polytheta.circle import (ContourConfig, TransformTerm, constant_evaluator,
                              coefficient_by_contour, error_exponent_fit,
                              i_nu_contributions, kloosterman_h_sum,
                              nu_terms_for, reconstruct_by_nu,
                              series_evaluator, transformed_evaluator)
from polytheta.series import FULL_J, f_J_series


def test_constant_series_orthogonality():
    res = coefficient_by_contour(constant_evaluator(), 0)
    assert abs(res.value - 1) < 1e-9
    for n in (1, 2, 5):
        res = coefficient_by_contour(constant_evaluator(), n)
        assert abs(res.value) < 1e-7


def test_skipping_an_arc_breaks_completeness():
    full = coefficient_by_contour(constant_evaluator(), 4)
    for arc in ((0, 1), (1, 2)):
        partial = coefficient_by_contour(constant_evaluator(), 4,
                                         skip_arcs=[arc])
        assert abs(partial.value - full.value) > 1e-6
        assert partial.num_arcs == full.num_arcs - 1


def test_direct_contour_full_J():
    r, M, alpha = 1, 2, (1, 1, 1, 1)
    fj = f_J_series(r, M, alpha, FULL_J, 30)
    ev = series_evaluator(r, M, alpha, FULL_J)
    for n in (0, 1, 2, 7, 16, 30):
        exact = float(fj.coeff(n))
        res = coefficient_by_contour(ev, n)
        assert abs(res.value - exact) <= 1e-6, n
        assert abs(res.value.imag) <= 1e-6


def test_direct_contour_mixed_J():
    r, M, alpha = 1, 2, (1, 1, 1, 1)
    J = frozenset({1, 2, 3})
    fj = f_J_series(r, M, alpha, J, 20)
    ev = series_evaluator(r, M, alpha, J)
    for n in (0, 3, 8, 20):
        exact = float(fj.coeff(n))
        res = coefficient_by_contour(ev, n)
        assert abs(res.value - exact) <= 1e-6, n


def test_transformed_contour_matches_direct():
    r, M, alpha = 1, 2, (1, 1, 1, 1)
    for J in (FULL_J, frozenset({2, 4})):
        fj = f_J_series(r, M, alpha, J, 12)
        for n in (0, 2, 5, 12):
            ev = transformed_evaluator(r, M, alpha, J,
                                       nu_terms=nu_terms_for(n))
            exact = float(fj.coeff(n))
            res = coefficient_by_contour(
                ev, n, ContourConfig(n=n, mode="transformed", tol=1e-8))
            assert abs(res.value - exact) <= 1e-4, (sorted(J), n)


def test_transform_term_selector():
    term = TransformTerm(nu=(0, 2, 0, 1), lam=(3, -1, 2, 1),
                         eps=(1, -1, 1, 1), J=frozenset({1, 2}))
    assert term.d_component(1) == 0        # in J, nu = 0
    assert term.d_component(2) == -2       # in J, nu != 0: eps*nu
    assert term.d_component(3) == 2        # off J, nu = 0: window index
    assert term.d_component(4) == 1        # off J, nu != 0: eps*nu


def test_i_nu_rejects_full_J():
    with pytest.raises(ValueError):
        i_nu_contributions(1, 2, (1, 1, 1, 1), FULL_J, [(0, 0, 0, 0)], 4)


def test_nu_reconstruction_matches_exact_coefficients():
    r, M, alpha, J = 1, 2, (1, 1, 1, 1), frozenset({1, 2, 3})
    fj = f_J_series(r, M, alpha, J, 10)
    for n in (0, 3, 6, 10):
        val, _ = reconstruct_by_nu(r, M, alpha, J, n)
        exact = float(fj.coeff(n))
        assert abs(val - exact) <= 1e-4, n


def test_i_nu_decay_profile():
    # contributions fall off like a Gaussian in ||nu||; compare shells
    r, M, alpha, J = 1, 2, (1, 1, 1, 1), frozenset({1, 2, 3})
    n = 5
    nus = [(0, 0, 0, 0), (1, 0, 0, 0), (2, 0, 0, 0), (3, 0, 0, 0),
           (4, 0, 0, 0), (5, 0, 0, 0)]
    contrib = i_nu_contributions(r, M, alpha, J, nus, n)
    mags = [abs(contrib[nu]) for nu in nus]
    assert mags[2] < mags[0]
    assert mags[4] < mags[2]
    assert mags[5] < mags[3]
    # log-magnitudes drop at least quadratically in the nonzero entry
    assert mags[5] / mags[1] < math.exp(-2.0)


def test_i_nu_zero_growth_trend():
    # the nu = 0 magnitude grows sublinearly in n (trend fit; values
    # themselves fluctuate with the arithmetic of n)
    r, M, alpha, J = 1, 2, (1, 1, 1, 1), frozenset({1, 2, 3})
    ns = [4, 9, 16, 36, 64, 100, 144, 196]
    vals = [abs(circle.i_nu_diagnostic(r, M, alpha, J, (0, 0, 0, 0), n,
                                       nodes=32))
            for n in ns]
    fit = error_exponent_fit(np.array(ns, float), np.array(vals))
    assert fit.slope < 1.0, fit


def test_error_exponent_fit_synthetic():
    ns = np.arange(10, 2000, 7)
    fit = error_exponent_fit(ns, ns.astype(float) ** 0.9)
    assert fit.slope == pytest.approx(0.9, abs=0.01)
    flat = error_exponent_fit(ns, np.full(len(ns), 5.0))
    assert flat.slope == pytest.approx(0.0, abs=0.01)
    zero = error_exponent_fit(ns, np.zeros(len(ns)))
    assert zero.all_zero


def test_error_exponent_fit_band_contains_truth():
    rng = np.random.default_rng(11)
    ns = np.arange(20, 5000, 13)
    noisy = ns.astype(float) ** 0.7 * np.exp(rng.normal(0, 0.05, len(ns)))
    fit = error_exponent_fit(ns, noisy)
    lo, hi = fit.band
    assert lo < 0.7 < hi


def test_kloosterman_h_sum_profile():
    # exact h-sums stay below the dissection-shape envelope with a small
    # fitted constant; nothing sharper is asserted
    n, M, alpha = 37, 2, (1, 1, 1, 1)
    d = (1, 1, 1, 1)
    worst = 0.0
    for k in range(1, 26):
        N = 30
        val = abs(kloosterman_h_sum(n, k, M, alpha, d, rho_max=k, N=N))
        shape = k ** (2 + 7 / 8) * math.gcd(n, k) ** 0.25
        worst = max(worst, val / shape)
    assert worst < 10.0


def test_contour_config_validation():
    with pytest.raises(ValueError):
        ContourConfig(n=-1)
    cfg = ContourConfig(n=10)
    assert cfg.N == 3
    with pytest.raises(ValueError):
        coefficient_by_contour(constant_evaluator(), 5, ContourConfig(n=4))
