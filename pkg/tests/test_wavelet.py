import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csipose.wavelet import (
    CoefficientPyramid,
    WaveletConfig,
    denoise,
    denoise_streams,
    dwt_forward,
    dwt_inverse,
    known_families,
)
from csipose.wavelet._filters import FilterBank

# Published Daubechies-4 analysis filters (independent of the package tables):
# lowpass is the time-reversed scaling filter, highpass the alternating-sign
# scaling filter.
DB4_DEC_LO = [
    -0.0105974018,
    0.0328830117,
    0.0308413818,
    -0.1870348117,
    -0.0279837694,
    0.6308807679,
    0.7148465706,
    0.2303778133,
]
DB4_DEC_HI = [
    -0.2303778133,
    0.7148465706,
    -0.6308807679,
    -0.0279837694,
    0.1870348117,
    0.0308413818,
    -0.0328830117,
    -0.0105974018,
]


def reflect_extend(x: np.ndarray, pad: int) -> np.ndarray:
    """Half-sample symmetric extension, written naively."""
    out = []
    for t in range(-pad, len(x) + pad):
        tt = t
        while tt < 0 or tt >= len(x):
            if tt < 0:
                tt = -tt - 1
            if tt >= len(x):
                tt = 2 * len(x) - 1 - tt
        out.append(x[tt])
    return np.array(out)


def convolution_dwt(x, dec_lo, dec_hi):
    """Direct-convolution single-level DWT oracle: extend, convolve, downsample."""
    taps = len(dec_lo)
    ext = reflect_extend(np.asarray(x, float), taps - 1)
    k = (len(x) + taps - 1) // 2
    full_lo = np.convolve(ext, dec_lo)
    full_hi = np.convolve(ext, dec_hi)
    # The padded signal starts at extension offset taps-1; downsampled outputs
    # sit at every second full-convolution index from there.
    return full_lo[taps : taps + 2 * k : 2], full_hi[taps : taps + 2 * k : 2]


def convolution_idwt(ca, cd, rec_lo, rec_hi, out_len):
    """Upsample-convolve-sum synthesis oracle."""
    taps = len(rec_lo)
    up_a = np.zeros(2 * len(ca))
    up_d = np.zeros(2 * len(cd))
    up_a[::2] = ca
    up_d[::2] = cd
    full = np.convolve(up_a, rec_lo) + np.convolve(up_d, rec_hi)
    return full[taps - 2 : taps - 2 + out_len]


class TestForward:
    def test_constant_signal_has_zero_details(self):
        pyramid = dwt_forward(np.full(8, 5.0), WaveletConfig(levels=2))
        assert len(pyramid.details) == 2
        for band in pyramid.details:
            np.testing.assert_allclose(band, 0.0, atol=1e-12)

    def test_round_trip_identity(self):
        cfg = WaveletConfig()
        rng = np.random.default_rng(0)
        for n in (8, 16, 33, 100, 101):
            x = rng.normal(size=n)
            rec = dwt_inverse(dwt_forward(x, cfg), cfg)
            assert np.abs(rec - x).max() < 1e-10

    def test_impulse_matches_convolution_oracle(self):
        x = np.zeros(8)
        x[0] = 1.0
        cfg = WaveletConfig(family="db4", levels=1)
        pyramid = dwt_forward(x, cfg)
        ca, cd = convolution_dwt(x, DB4_DEC_LO, DB4_DEC_HI)
        np.testing.assert_allclose(pyramid.approximation, ca, atol=1e-9)
        np.testing.assert_allclose(pyramid.details[0], cd, atol=1e-9)

    def test_interior_impulse_yields_the_filter_taps(self):
        # An impulse far from both boundaries writes the analysis taps into
        # the coefficient bands (alternating rows of each filter).
        x = np.zeros(16)
        x[7] = 1.0
        pyramid = dwt_forward(x, WaveletConfig(family="db4", levels=1))
        got = np.concatenate([pyramid.approximation, pyramid.details[0]])
        expected = np.concatenate([DB4_DEC_LO, DB4_DEC_HI])
        got_nonzero = np.sort(got[np.abs(got) > 1e-12])
        np.testing.assert_allclose(got_nonzero, np.sort(expected), atol=1e-9)

    def test_signal_too_short_names_minimum(self):
        with pytest.raises(ValueError, match="at least 8"):
            dwt_forward(np.ones(7), WaveletConfig(levels=3))

    def test_linearity(self):
        cfg = WaveletConfig(levels=3)
        rng = np.random.default_rng(1)
        x = rng.normal(size=64)
        y = rng.normal(size=64)
        a, b = 2.5, -1.25
        combined = dwt_forward(a * x + b * y, cfg)
        px = dwt_forward(x, cfg)
        py = dwt_forward(y, cfg)
        np.testing.assert_allclose(
            combined.approximation, a * px.approximation + b * py.approximation, atol=1e-10
        )
        for got, dx, dy in zip(combined.details, px.details, py.details):
            np.testing.assert_allclose(got, a * dx + b * dy, atol=1e-10)


class TestInverse:
    def test_zero_pyramid_gives_zero_signal(self):
        cfg = WaveletConfig(levels=2)
        pyramid = dwt_forward(np.random.default_rng(2).normal(size=32), cfg)
        pyramid.approximation[:] = 0.0
        for band in pyramid.details:
            band[:] = 0.0
        np.testing.assert_allclose(dwt_inverse(pyramid, cfg), 0.0, atol=1e-15)

    def test_level_mismatch_raises(self):
        cfg = WaveletConfig(levels=2)
        pyramid = dwt_forward(np.ones(32), cfg)
        with pytest.raises(ValueError, match="levels"):
            dwt_inverse(pyramid, WaveletConfig(levels=3))

    def test_zeroed_band_matches_filter_bank_oracle(self):
        cfg = WaveletConfig(family="db4", levels=1)
        rng = np.random.default_rng(3)
        x = rng.normal(size=32)
        pyramid = dwt_forward(x, cfg)
        pyramid.details[0][:] = 0.0
        got = dwt_inverse(pyramid, cfg)
        bank = FilterBank("db4")
        expected = convolution_idwt(
            pyramid.approximation,
            np.zeros_like(pyramid.approximation),
            bank.rec_lo,
            bank.rec_hi,
            len(x),
        )
        np.testing.assert_allclose(got, expected, atol=1e-10)


class TestDenoise:
    def test_constant_signal_unchanged(self):
        x = np.full(32, 7.0)
        np.testing.assert_allclose(denoise(x, WaveletConfig()), x, atol=1e-10)

    def test_zero_fixed_threshold_is_identity(self):
        cfg = WaveletConfig(threshold_rule="fixed", threshold_value=0.0)
        x = np.random.default_rng(4).normal(size=64)
        assert np.abs(denoise(x, cfg) - x).max() < 1e-10

    def test_sine_fixture_reduces_mse(self):
        # Scalar oracle: compute both MSEs directly.
        t = np.arange(32)
        clean = np.sin(2 * np.pi * t / 32)
        noisy = clean + np.random.default_rng(7).normal(0.0, 0.5, 32)
        restored = denoise(noisy, WaveletConfig())
        mse_noisy = float(np.mean((noisy - clean) ** 2))
        mse_restored = float(np.mean((restored - clean) ** 2))
        assert mse_restored < mse_noisy
        assert mse_restored <= 0.7 * mse_noisy  # >= 30% reduction, seeded

    def test_nonfinite_input_rejected(self):
        x = np.ones(32)
        x[3] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            denoise(x, WaveletConfig())

    def test_soft_threshold_never_increases_energy(self):
        cfg = WaveletConfig()
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.normal(size=64)
            before = dwt_forward(x, cfg)
            after = dwt_forward(denoise(x, cfg), cfg)
            energy = lambda p: sum(float((b**2).sum()) for b in [p.approximation, *p.details])
            assert energy(after) <= energy(before) + 1e-9

    def test_batch_matches_single_stream(self):
        cfg = WaveletConfig()
        rng = np.random.default_rng(6)
        streams = rng.normal(size=(5, 50))
        batch = denoise_streams(streams, cfg)
        for i in range(5):
            np.testing.assert_allclose(batch[i], denoise(streams[i], cfg), atol=1e-12)

    def test_hard_threshold_mode(self):
        cfg = WaveletConfig(threshold_mode="hard", threshold_rule="fixed", threshold_value=100.0)
        # A huge hard threshold kills every detail band: result is the smooth part.
        x = np.random.default_rng(8).normal(size=64)
        out = denoise(x, cfg)
        pyramid = dwt_forward(x, cfg)
        for band in pyramid.details:
            band[:] = 0.0
        np.testing.assert_allclose(out, dwt_inverse(pyramid, cfg), atol=1e-10)


class TestInvariants:
    @pytest.mark.parametrize("family", known_families())
    def test_perfect_reconstruction_dyadic(self, family):
        cfg = WaveletConfig(family=family)
        rng = np.random.default_rng(9)
        for k in range(3, 11):  # 8 .. 1024
            x = rng.normal(size=2**k)
            rec = dwt_inverse(dwt_forward(x, cfg), cfg)
            assert np.abs(rec - x).max() < 1e-10

    @settings(max_examples=40, deadline=None)
    @given(
        n=st.integers(min_value=8, max_value=300),
        levels=st.integers(min_value=1, max_value=3),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    def test_round_trip_property(self, n, levels, seed):
        cfg = WaveletConfig(levels=levels)
        x = np.random.default_rng(seed).normal(size=n)
        rec = dwt_inverse(dwt_forward(x, cfg), cfg)
        assert np.abs(rec - x).max() < 1e-10

    def test_coefficient_counts(self):
        # Each analysis step keeps floor((n + taps - 1) / 2) coefficients per
        # band, i.e. the even-rounded padded length in total.
        cfg = WaveletConfig(family="db4", levels=3)
        x = np.random.default_rng(10).normal(size=100)
        pyramid = dwt_forward(x, cfg)
        taps = len(FilterBank("db4"))
        n = 100
        for band, n_in in zip(reversed(pyramid.details), reversed(pyramid.input_lengths)):
            expected = (n_in + taps - 1) // 2
            assert len(band) == expected
            assert n_in == n
            n = expected
        assert len(pyramid.approximation) == n


class TestBackends:
    def test_both_backends_agree(self):
        from csipose.wavelet import _py_kernels

        try:
            from csipose.wavelet import _kernels
        except ImportError:
            pytest.skip("compiled kernels not built")
        bank = FilterBank("db4")
        rng = np.random.default_rng(11)
        x = np.ascontiguousarray(rng.normal(size=(7, 123)))
        ca_c, cd_c = _kernels.analysis(x, bank.dec_lo, bank.dec_hi)
        ca_p, cd_p = _py_kernels.analysis(x, bank.dec_lo, bank.dec_hi)
        np.testing.assert_allclose(ca_c, ca_p, atol=1e-12)
        np.testing.assert_allclose(cd_c, cd_p, atol=1e-12)
        rec_c = _kernels.synthesis(ca_c, cd_c, bank.rec_lo, bank.rec_hi)
        rec_p = _py_kernels.synthesis(ca_p, cd_p, bank.rec_lo, bank.rec_hi)
        np.testing.assert_allclose(rec_c, rec_p, atol=1e-12)


class TestConfig:
    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown wavelet family"):
            WaveletConfig(family="nope")

    def test_bad_levels(self):
        with pytest.raises(ValueError, match="levels"):
            WaveletConfig(levels=0)

    def test_fixed_rule_requires_value(self):
        with pytest.raises(ValueError, match="threshold_value"):
            WaveletConfig(threshold_rule="fixed")

    def test_negative_fixed_threshold(self):
        with pytest.raises(ValueError, match=">= 0"):
            WaveletConfig(threshold_rule="fixed", threshold_value=-1.0)

    def test_pyramid_levels_property(self):
        pyramid = CoefficientPyramid(np.zeros(4), [np.zeros(4), np.zeros(8)], (16, 8))
        assert pyramid.levels == 2
