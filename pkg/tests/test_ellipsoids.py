import math

import numpy as np
import pytest

from entrodim.ellipsoids import (
    Ellipsoid,
    entropy_lower_bound,
    entropy_report,
    entropy_upper_bound,
    truncation_dim,
    volumetric_count_bound,
)
from entrodim.errors import BoundsError, ConfigurationError, TailNotResolvedError
from entrodim.spectra import DomainParams, box_eigenvalues

# frozen with a 40-digit mpmath evaluation of the closed forms
UPPER_1_1_1 = 6.055315083220239
UPPER_1_2_HALF = 12.644066501519587


class TestTruncation:
    def test_examples(self):
        assert truncation_dim(Ellipsoid.power_law(1.0, 2.0), 0.5) == 1
        assert truncation_dim(Ellipsoid.power_law(1.0, 2.0), 1.0) == 0
        assert truncation_dim(Ellipsoid.power_law(1.0, 1.0), 0.1) == 99

    def test_tie_is_included(self):
        e = Ellipsoid.explicit([1.0, 0.25, 0.01])
        assert truncation_dim(e, 0.5) == 1  # mu_2 = eps^2 exactly

    def test_from_spectrum(self):
        seq = box_eigenvalues(DomainParams.interval(math.pi), 50)
        e = Ellipsoid.from_spectrum(seq)
        # mu_j = 1/j^2 <= eps^2 iff j >= 1/eps
        assert truncation_dim(e, 0.5) == 1
        assert truncation_dim(e, 0.21) == 4

    def test_unresolved_tail(self):
        with pytest.raises(TailNotResolvedError):
            truncation_dim(Ellipsoid.explicit([1.0, 0.9, 0.8]), 0.5)

    def test_spectrum_too_short(self):
        seq = box_eigenvalues(DomainParams.interval(math.pi), 5)
        with pytest.raises(BoundsError):
            truncation_dim(Ellipsoid.from_spectrum(seq), 0.01)

    def test_monotone_in_eps(self):
        e = Ellipsoid.power_law(2.0, 1.5)
        dims = [truncation_dim(e, eps) for eps in (1.0, 0.7, 0.5, 0.3, 0.2, 0.1)]
        assert all(a <= b for a, b in zip(dims, dims[1:]))


class TestEntropyBounds:
    def test_frozen_values(self):
        assert entropy_upper_bound(1, 1, 1) == pytest.approx(UPPER_1_1_1, rel=1e-12)
        assert entropy_upper_bound(1, 2, 0.5) == pytest.approx(UPPER_1_2_HALF, rel=1e-12)

    def test_scale_invariance_exact(self):
        # depends on (c, eps) only through c * eps^2; powers of two keep floats exact
        for s in (2.0, 4.0, 0.5):
            assert entropy_upper_bound(4.0 / s**2, 2.0, 0.5 * s) == entropy_upper_bound(
                4.0, 2.0, 0.5
            )

    def test_monotone_decreasing(self):
        grid = np.geomspace(0.05, 2.0, 25)
        vals = [entropy_upper_bound(1.0, 2.0, e) for e in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        cs = np.geomspace(0.1, 10.0, 25)
        vals = [entropy_upper_bound(c, 2.0, 0.3) for c in cs]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_lower_bound_examples(self):
        assert entropy_lower_bound(1.0, 1.0, 0.5) == pytest.approx(0.0, abs=1e-12)
        assert entropy_lower_bound(1.0, 2.0, 0.05) == pytest.approx(9.0, rel=1e-12)

    def test_lower_below_upper_when_c_below_C(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            c = rng.uniform(0.05, 5.0)
            big_c = c * rng.uniform(1.0, 10.0)
            alpha = rng.uniform(0.2, 4.0)
            eps = rng.uniform(0.01, 3.0)
            assert entropy_lower_bound(big_c, alpha, eps) <= entropy_upper_bound(
                c, alpha, eps
            )

    def test_invalid_inputs(self):
        with pytest.raises(ConfigurationError):
            entropy_upper_bound(0.0, 1.0, 1.0)
        with pytest.raises(ConfigurationError):
            entropy_lower_bound(1.0, 1.0, 0.0)


class TestVolumetricBound:
    def test_example_alpha2(self):
        vb = volumetric_count_bound(Ellipsoid.power_law(1.0, 2.0), 0.5)
        assert vb.d == 1
        assert vb.exact == pytest.approx(6.0, rel=1e-12)
        assert vb.relaxed == pytest.approx(3.0 * math.e**2, rel=1e-12)

    def test_example_alpha1(self):
        vb = volumetric_count_bound(Ellipsoid.power_law(1.0, 1.0), 0.6)
        assert vb.d == 2
        assert vb.exact == pytest.approx(25.0 / math.sqrt(2.0), rel=1e-12)

    def test_relaxed_dominates_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            c = rng.uniform(0.5, 4.0)
            alpha = rng.uniform(0.5, 3.0)
            eps = rng.uniform(0.05, 0.9)
            e = Ellipsoid.power_law(c, alpha)
            if truncation_dim(e, eps) == 0:
                continue
            vb = volumetric_count_bound(e, eps)
            assert vb.relaxed >= vb.exact * (1.0 - 1e-12)

    def test_degenerate_redirects(self):
        with pytest.raises(ConfigurationError):
            volumetric_count_bound(Ellipsoid.power_law(1.0, 2.0), 1.0)


def test_entropy_report_consistency():
    rep = entropy_report(1.0, 2.0, 0.3, upper_C=2.0)
    assert rep.lower_bits is not None and rep.lower_bits <= rep.upper_bits
    with pytest.raises(ConfigurationError):
        from entrodim.ellipsoids import OracleBracket

        entropy_report(1.0, 2.0, 0.3, oracle=OracleBracket(lo=10**9, hi=10**9, d=2, eps=0.3))


def test_power_law_mu_identity():
    e = Ellipsoid.power_law(2.5, 1.7)
    for j in (1, 2, 10, 500):
        assert e.mu(j) * 2.5 * j**1.7 == pytest.approx(1.0, rel=1e-14)
