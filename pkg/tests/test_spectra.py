import math

import numpy as np
import pytest

from entrodim.errors import BoundsError, ConfigurationError
from entrodim.spectra import (
    DomainParams,
    box_eigenvalues,
    counting_function,
    growth_certificate,
    li_yau_bound,
    li_yau_constant,
    power_law_sequence,
    unit_ball_volume,
    write_spectrum_csv,
)


class TestBoxEigenvalues:
    def test_interval_pi(self):
        seq = box_eigenvalues(DomainParams.interval(math.pi), 3)
        assert np.allclose(seq.values, [1.0, 4.0, 9.0], rtol=1e-14)

    def test_square_with_multiplicity(self):
        seq = box_eigenvalues(DomainParams.box((math.pi, math.pi)), 4)
        assert np.allclose(seq.values, [2.0, 5.0, 5.0, 8.0], rtol=1e-14)

    def test_unit_interval(self):
        seq = box_eigenvalues(DomainParams.interval(1.0), 2)
        assert np.allclose(seq.values, [math.pi**2, 4 * math.pi**2], rtol=1e-14)

    def test_brute_force_cross_check(self):
        # independent oracle: enumerate a generous lattice directly
        sides = (1.0, 2.0)
        k1, k2 = np.meshgrid(np.arange(1, 60), np.arange(1, 60), indexing="ij")
        lams = np.sort((math.pi**2) * ((k1 / sides[0]) ** 2 + (k2 / sides[1]) ** 2).ravel())
        seq = box_eigenvalues(DomainParams.box(sides), 200)
        assert np.allclose(seq.values, lams[:200], rtol=1e-13)

    def test_requires_side_lengths(self):
        with pytest.raises(ConfigurationError):
            box_eigenvalues(DomainParams(N=2, volume=1.0), 5)


class TestLiYau:
    def test_interval_constant_is_one_third(self):
        d = DomainParams.interval(math.pi)
        # oracle: B_1 = 2, C_1 = (2 pi)^2 / 4 = pi^2, bound = (pi^2/3) j^2 / pi^2
        assert li_yau_bound(d, 1) == pytest.approx(1.0 / 3.0, rel=1e-13)
        assert li_yau_bound(d, 4) == pytest.approx(16.0 / 3.0, rel=1e-13)
        assert li_yau_constant(d) == pytest.approx(1.0 / 3.0, rel=1e-13)

    def test_unit_ball_volumes(self):
        assert unit_ball_volume(1) == pytest.approx(2.0, rel=1e-14)
        assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
        assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-14)

    @pytest.mark.parametrize("sides", [(math.pi,), (1.0, 1.0), (math.pi, 1.0, 2.0)])
    def test_below_box_spectrum(self, sides):
        d = DomainParams.box(sides)
        seq = box_eigenvalues(d, 2000)
        j = np.arange(1, 2001)
        bound = li_yau_constant(d) * j ** (2.0 / d.N)
        assert np.all(seq.values >= bound * (1.0 - 1e-12))


class TestGrowthCertificate:
    def test_exact_power_law(self):
        seq = power_law_sequence(1.0, 2.0, 100)
        cert = growth_certificate(seq, 2.0, 100)
        assert cert.c == 1.0 and cert.upper_C == 1.0

    def test_box_interval_exact(self):
        seq = box_eigenvalues(DomainParams.interval(math.pi), 100)
        cert = growth_certificate(seq, 2.0, 100)
        assert cert.c == pytest.approx(1.0, rel=1e-13)

    def test_square_alpha_one_direct_scan(self):
        seq = box_eigenvalues(DomainParams.box((math.pi, math.pi)), 1000)
        cert = growth_certificate(seq, 1.0, 1000)
        # independent scan
        ratios = [seq[j] / j for j in range(1, 1001)]
        assert cert.c == pytest.approx(min(ratios), rel=1e-14)
        assert cert.upper_C == pytest.approx(max(ratios), rel=1e-14)
        assert 0.0 < cert.c <= cert.upper_C < math.inf

    def test_scale_covariance_exact(self):
        seq = box_eigenvalues(DomainParams.box((1.0, 2.0)), 300)
        scaled = type(seq)(values=seq.values * 4.0, source=("explicit", None))
        a, b = growth_certificate(seq, 1.0, 300), growth_certificate(scaled, 1.0, 300)
        assert b.c == 4.0 * a.c and b.upper_C == 4.0 * a.upper_C

    def test_range_exceeds_available(self):
        seq = power_law_sequence(1.0, 2.0, 10)
        with pytest.raises(BoundsError):
            growth_certificate(seq, 2.0, 11)


class TestCountingFunction:
    def test_examples(self):
        seq = power_law_sequence(1.0, 2.0, 100)
        assert counting_function(seq, 10.0) == 3
        assert counting_function(seq, 1.0) == 0
        assert counting_function(seq, 16.5) == 4

    def test_monotone_and_bounded(self):
        seq = box_eigenvalues(DomainParams.box((math.pi, math.pi)), 400)
        lams = np.linspace(2.0, seq.values[-1], 50)
        counts = [counting_function(seq, l) for l in lams]
        assert all(a <= b for a, b in zip(counts, counts[1:]))
        for n in (0, 5, 100):
            assert counting_function(seq, seq[n + 1]) <= n

    def test_counting_lower_bound_from_upper_growth(self):
        d = DomainParams.interval(math.pi)
        seq = box_eigenvalues(d, 2000)
        cert = growth_certificate(seq, 2.0, 2000)
        for lam in (2.0, 10.0, 100.0, 1000.0):
            n = counting_function(seq, lam)
            assert n >= (lam / cert.upper_C) ** (1.0 / 2.0) - 1.0

    def test_beyond_available_raises(self):
        seq = power_law_sequence(1.0, 2.0, 10)
        with pytest.raises(BoundsError):
            counting_function(seq, 1e6)


def test_spectrum_csv(tmp_path):
    d = DomainParams.interval(math.pi)
    seq = box_eigenvalues(d, 5)
    path = tmp_path / "spec.csv"
    write_spectrum_csv(path, seq, d)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "j,lambda_j,li_yau_lower"
    assert len(lines) == 6
    j, lam, lower = lines[1].split(",")
    assert int(j) == 1
    assert float(lam) == pytest.approx(1.0, rel=1e-13)
    assert float(lower) == pytest.approx(1.0 / 3.0, rel=1e-12)
