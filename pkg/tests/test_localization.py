import numpy as np
import pytest

from skewcmv.cmv import BoundaryPair, assemble_window
from skewcmv.localization import (
    decay_fit,
    finite_size_drift,
    inverse_participation_ratio,
    localization_scan,
    window_spectrum,
)
from skewcmv.lyapunov import SamplingConfig
from skewcmv.model import Frequency, Phase, TrigPolynomial, VerblunskyScheme

GOLDEN = (np.sqrt(5) - 1) / 2


def make_scheme(coeffs, lam, omega, base=(0.0, 0.0)):
    return VerblunskyScheme(TrigPolynomial(coeffs), lam, Frequency(omega), Phase(*base))


TRIG = {(1, 0): 0.5, (0, 1): 0.5}


class TestWindowSpectrum:
    def test_free_window_permutation_oracle(self):
        s = make_scheme(TRIG, 0.0, 0.3)
        w = assemble_window(s, (0, 3), BoundaryPair(1.0, 1.0))
        pairs = window_spectrum(w)
        # oracle: eigensolve the hand-built signed permutation directly
        perm = np.zeros((4, 4), dtype=complex)
        perm[1, 0] = -1.0
        perm[3, 1] = 1.0
        perm[0, 2] = 1.0
        perm[2, 3] = 1.0
        want = np.sort_complex(np.linalg.eigvals(perm))
        got = np.sort_complex(np.array([p.value for p in pairs]))
        assert np.max(np.abs(got - want)) < 1e-10

    def test_eigenpair_quality(self):
        rng = np.random.default_rng(12)
        s = make_scheme(TRIG, 0.9, GOLDEN, base=(0.23, 0.71))
        w = assemble_window(s, (0, 63), BoundaryPair(np.exp(0.3j), np.exp(1.9j)))
        pairs = window_spectrum(w)
        assert len(pairs) == 64
        mods = np.array([abs(p.value) for p in pairs])
        assert np.max(np.abs(mods - 1.0)) < 1e-8
        assert np.sum(mods) == pytest.approx(64.0, abs=1e-6)
        assert max(p.residual for p in pairs) < 1e-8

    def test_spectrum_invariant_under_sign_rephasing(self):
        s = make_scheme(TRIG, 0.85, GOLDEN, base=(0.4, 0.9))
        w = assemble_window(s, (0, 31), BoundaryPair(1.0, -1.0))
        D = np.diag([(-1.0) ** j for j in range(32)])
        rephased = np.linalg.eigvals(D @ w.matrix @ D)
        original = np.array([p.value for p in window_spectrum(w)])
        a = np.sort(np.angle(original) % (2 * np.pi))
        b = np.sort(np.angle(rephased) % (2 * np.pi))
        assert np.max(np.abs(a - b)) < 1e-8


class TestDecayFit:
    def test_synthetic_exponential(self):
        n = 128
        c = 40
        v = np.exp(-0.3 * np.abs(np.arange(n) - c))
        fit = decay_fit(v)
        assert fit.center == c
        assert fit.rate == pytest.approx(0.3, abs=1e-6)
        assert fit.r2 > 0.999

    def test_constant_vector_flagged_flat(self):
        fit = decay_fit(np.ones(64))
        assert fit.rate == 0.0 and fit.r2 == 0.0

    def test_oscillating_envelope_recovered(self):
        # parity oscillation on top of exponential decay: block-2 envelope sees through
        n = 128
        c = 64
        d = np.abs(np.arange(n) - c)
        v = np.exp(-0.25 * d) * (1.0 - 0.9 * (np.arange(n) % 2))
        fit = decay_fit(v)
        assert fit.rate == pytest.approx(0.25, abs=0.01)
        assert fit.r2 > 0.99

    def test_free_eigenvectors_not_localized(self):
        s = make_scheme(TRIG, 0.0, GOLDEN)
        w = assemble_window(s, (0, 63), BoundaryPair(1.0, 1.0))
        rates = [decay_fit(p.vector).rate for p in window_spectrum(w)]
        assert np.median(rates) < 0.02

    def test_short_vector_rejected(self):
        with pytest.raises(ValueError):
            decay_fit(np.ones(16))

    def test_ipr_bounds(self):
        assert inverse_participation_ratio(np.ones(50)) == pytest.approx(1 / 50)
        e = np.zeros(50)
        e[3] = 1.0
        assert inverse_participation_ratio(e) == pytest.approx(1.0)


class TestLocalizationScan:
    def test_strong_coupling_flags_bulk(self):
        s = make_scheme(TRIG, 0.99, GOLDEN)
        bc = BoundaryPair(np.exp(0.4j), np.exp(-0.8j))
        reports = localization_scan(s, 128, bc, SamplingConfig(mode="grid", grid_side=8))
        assert len(reports) == 128
        bulk = [r for r in reports if 16 <= r.center < 112]
        frac = np.mean([r.localized for r in bulk])
        assert frac >= 0.9

    def test_zero_coupling_flags_nothing(self):
        s = make_scheme(TRIG, 0.0, GOLDEN)
        bc = BoundaryPair(1.0, 1.0)
        reports = localization_scan(s, 64, bc, SamplingConfig(mode="grid", grid_side=6))
        assert sum(r.localized for r in reports) == 0

    def test_reports_reproducible(self):
        s = make_scheme(TRIG, 0.95, GOLDEN, base=(0.11, 0.47))
        bc = BoundaryPair(1.0, -1.0)
        cfg = SamplingConfig(mode="monte-carlo", sample_count=100, rng_seed=77)
        a = localization_scan(s, 64, bc, cfg)
        b = localization_scan(s, 64, bc, cfg)
        for ra, rb in zip(a, b):
            assert ra == rb

    def test_ipr_in_range(self):
        s = make_scheme(TRIG, 0.9, GOLDEN)
        reports = localization_scan(s, 64, BoundaryPair(1.0, 1.0), SamplingConfig(mode="grid", grid_side=6))
        for r in reports:
            assert 1 / 64 - 1e-12 <= r.ipr <= 1.0 + 1e-12

    def test_size_precondition(self):
        s = make_scheme(TRIG, 0.9, GOLDEN)
        with pytest.raises(ValueError):
            localization_scan(s, 32, BoundaryPair(1.0, 1.0), SamplingConfig())


class TestFiniteSizeDrift:
    def test_free_case_trendless(self):
        s = make_scheme(TRIG, 0.0, GOLDEN)
        rows = finite_size_drift(s, [64, 96], BoundaryPair(1.0, 1.0), SamplingConfig(mode="grid", grid_side=4))
        for row in rows:
            assert row["median_rate"] < 0.02
            assert row["localized_fraction"] == 0.0
            # flat states: ipr * size stays O(1)
            assert row["median_ipr_x_size"] < 10.0

    def test_localized_rate_stable_across_sizes(self):
        s = make_scheme(TRIG, 0.99, GOLDEN)
        rows = finite_size_drift(s, [96, 160], BoundaryPair(1.0, -1.0), SamplingConfig(mode="grid", grid_side=6))
        r1, r2 = rows[0]["median_rate"], rows[1]["median_rate"]
        assert abs(r1 - r2) <= 0.2 * max(r1, r2)

    def test_constant_sampler_rate_size_independent(self):
        s = make_scheme({(0, 0): 5 / 9}, 0.9, 0.37)
        rows = finite_size_drift(s, [64, 128], BoundaryPair(1.0, 1.0), SamplingConfig(mode="grid", grid_side=4))
        r1, r2 = rows[0]["median_rate"], rows[1]["median_rate"]
        assert abs(r1 - r2) <= 0.1 * max(r1, r2, 0.05)

    def test_sizes_must_ascend(self):
        s = make_scheme(TRIG, 0.9, GOLDEN)
        with pytest.raises(ValueError):
            finite_size_drift(s, [128, 64], BoundaryPair(1.0, 1.0))
