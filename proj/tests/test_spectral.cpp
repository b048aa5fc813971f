//
//  test_spectral.cpp
//  onsetlab
//

#include "onsetlab/rng.h"
#include "onsetlab/spectral.h"
#include "oracles.h"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace onsetlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

AudioBuffer sine(double freq, double amp, double seconds, int sr) {
    AudioBuffer a;
    a.sample_rate = sr;
    const auto n = static_cast<std::size_t>(seconds * sr);
    for (std::size_t i = 0; i < n; ++i) {
        a.samples.push_back(amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / sr));
    }
    return a;
}

AudioBuffer noise(std::uint64_t seed, std::size_t n, int sr) {
    Rng rng(seed);
    AudioBuffer a;
    a.sample_rate = sr;
    for (std::size_t i = 0; i < n; ++i) {
        a.samples.push_back(rng.uniform(-0.5, 0.5));
    }
    return a;
}

}  // namespace

TEST_CASE("config validation") {
    SpectralConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.frame_samples(44100) == 2048);
    CHECK(cfg.hop_samples(44100) == 441);

    auto bad = cfg;
    bad.hop = cfg.frame_length * 2;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.fmin = 20000;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.bands_per_octave = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.log_offset = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("frame count and frame rate") {
    SpectralConfig cfg;
    const auto spec = stft_magnitude(sine(440, 0.5, 1.0, 44100), cfg);
    CHECK(spec.num_frames() == 100);  // ceil(44100 / 441)
    CHECK(spec.num_bins() == 1025);
    CHECK(spec.fps == 100.0);
    CHECK(spec.bin_frequencies.front() == 0.0);
    CHECK_THAT(spec.bin_frequencies.back(), WithinAbs(22050.0, 1e-9));
}

TEST_CASE("silence gives zero magnitudes") {
    AudioBuffer silent;
    silent.samples.assign(22050, 0.0);
    const auto spec = stft_magnitude(silent, {});
    for (double v : spec.frames.data()) {
        REQUIRE(v == 0.0);
    }
    const auto logspec = log_filter(spec, {});
    for (double v : logspec.frames.data()) {
        REQUIRE(v == 0.0);
    }
}

TEST_CASE("stft frame matches a direct DFT of the centered windowed segment") {
    SpectralConfig cfg;
    cfg.frame_length = 256.0 / 8000.0;
    cfg.hop = 80.0 / 8000.0;
    const auto audio = noise(3, 2000, 8000);
    const auto spec = stft_magnitude(audio, cfg);
    const std::size_t n = 256;
    const std::size_t hop = 80;
    // Symmetric Hann, written out here rather than taken from make_window.
    std::vector<double> win(n);
    for (std::size_t i = 0; i < n; ++i) {
        win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    for (std::size_t t : {0u, 1u, 7u, 24u}) {
        std::vector<double> frame(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const long idx = static_cast<long>(t * hop) - static_cast<long>(n / 2) + static_cast<long>(i);
            if (idx >= 0 && idx < static_cast<long>(audio.samples.size())) {
                frame[i] = audio.samples[static_cast<std::size_t>(idx)] * win[i];
            }
        }
        const auto expected = oracle::dft_magnitude(frame);
        for (std::size_t k = 0; k < expected.size(); ++k) {
            REQUIRE_THAT(spec.frames(t, k), WithinAbs(expected[k], 1e-9));
        }
    }
}

TEST_CASE("1 kHz sine peaks within one bin of 1 kHz") {
    SpectralConfig cfg;
    cfg.frame_length = 0.0464;
    const auto spec = stft_magnitude(sine(1000.0, 1.0, 1.0, 44100), cfg);
    const double bin_width = spec.bin_frequencies[1];
    const std::size_t margin = cfg.frame_samples(44100) / cfg.hop_samples(44100) / 2 + 1;
    for (std::size_t t = margin; t + margin < spec.num_frames(); ++t) {
        const auto row = spec.frames.row(t);
        const auto k = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        REQUIRE(std::abs(spec.bin_frequencies[k] - 1000.0) <= bin_width);
    }
}

TEST_CASE("doubling the input doubles every magnitude") {
    auto a = noise(5, 8000, 16000);
    auto b = a;
    for (double& s : b.samples) {
        s *= 2.0;
    }
    const auto sa = stft_magnitude(a, {});
    const auto sb = stft_magnitude(b, {});
    for (std::size_t i = 0; i < sa.frames.data().size(); ++i) {
        REQUIRE_THAT(sb.frames.data()[i], WithinAbs(2.0 * sa.frames.data()[i], 1e-9));
    }
}

TEST_CASE("window shapes") {
    const auto hann = make_window(WindowType::Hann, 5);
    CHECK_THAT(hann[0], WithinAbs(0.0, 1e-15));
    CHECK_THAT(hann[2], WithinAbs(1.0, 1e-15));
    const auto ham = make_window(WindowType::Hamming, 5);
    CHECK_THAT(ham[0], WithinAbs(0.08, 1e-12));
    const auto rect = make_window(WindowType::Rectangular, 4);
    CHECK(rect == std::vector<double>(4, 1.0));
}

TEST_CASE("filterbank bands have unit area and geometric centers") {
    SpectralConfig cfg;
    const auto spec = stft_magnitude(sine(440, 0.5, 0.1, 44100), cfg);
    const auto fb = make_log_filterbank(spec.bin_frequencies, cfg);
    REQUIRE(fb.bands.size() > 50);
    double prev_center = 0.0;
    for (const auto& band : fb.bands) {
        double area = 0.0;
        for (double w : band.weights) {
            REQUIRE(w >= 0.0);
            area += w;
        }
        REQUIRE_THAT(area, WithinAbs(1.0, 1e-12));
        REQUIRE(band.center_frequency > prev_center);
        REQUIRE(band.center_frequency >= cfg.fmin - spec.bin_frequencies[1]);
        REQUIRE(band.center_frequency <= cfg.fmax + spec.bin_frequencies[1]);
        prev_center = band.center_frequency;
    }
}

TEST_CASE("a single active bin at 440 Hz lights exactly the overlapping triangles") {
    SpectralConfig cfg;
    const std::size_t n = 2048;
    std::vector<double> freqs(n / 2 + 1);
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        freqs[k] = static_cast<double>(k) * 44100.0 / static_cast<double>(n);
    }
    const std::size_t active = static_cast<std::size_t>(std::lround(440.0 / freqs[1]));

    // Expected geometry from the definition: unique rounded center bins,
    // band j spans (b_j, b_{j+2}) exclusive with its peak at b_{j+1}.
    std::vector<std::size_t> centers;
    for (int k = 0;; ++k) {
        const double f = cfg.fmin * std::pow(2.0, k / 24.0);
        if (f > cfg.fmax * (1.0 + 1e-12)) {
            break;
        }
        const auto b = static_cast<std::size_t>(std::lround(f / freqs[1]));
        if (centers.empty() || b > centers.back()) {
            centers.push_back(b);
        }
    }
    std::set<std::size_t> expected;
    for (std::size_t j = 0; j + 2 < centers.size(); ++j) {
        if (active > centers[j] && active < centers[j + 2]) {
            expected.insert(j);
        }
    }
    REQUIRE(!expected.empty());
    REQUIRE(expected.size() <= 2);

    Spectrogram lin;
    lin.frames = FrameMatrix<double>(1, freqs.size(), 0.0);
    lin.frames(0, active) = 1.0;
    lin.bin_frequencies = freqs;
    lin.fps = 100.0;
    const auto out = log_filter(lin, cfg);
    std::set<std::size_t> lit;
    for (std::size_t b = 0; b < out.num_bins(); ++b) {
        if (out.frames(0, b) != 0.0) {
            lit.insert(b);
        }
    }
    CHECK(lit == expected);
}

TEST_CASE("log filtering is monotone elementwise") {
    Rng rng(9);
    SpectralConfig cfg;
    const auto base = stft_magnitude(noise(13, 4410, 44100), cfg);
    for (int trial = 0; trial < 20; ++trial) {
        auto bigger = base;
        for (double& v : bigger.frames.data()) {
            v += rng.uniform() * 0.1;
        }
        const auto lo = log_filter(base, cfg);
        const auto hi = log_filter(bigger, cfg);
        for (std::size_t i = 0; i < lo.frames.data().size(); ++i) {
            REQUIRE(hi.frames.data()[i] >= lo.frames.data()[i]);
        }
    }
}

TEST_CASE("fmax above Nyquist is clamped with a warning") {
    SpectralConfig cfg;
    cfg.fmax = 17000.0;
    AudioBuffer a = sine(440, 0.5, 0.2, 16000);
    Diagnostics diag;
    const auto spec = log_filter(stft_magnitude(a, cfg), cfg, &diag);
    REQUIRE(diag.warnings.size() == 1);
    CHECK(diag.warnings[0].find("Nyquist") != std::string::npos);
    CHECK(spec.bin_frequencies.back() <= 8000.0);

    Diagnostics quiet;
    log_filter(stft_magnitude(sine(440, 0.5, 0.2, 44100), cfg), cfg, &quiet);
    CHECK(quiet.warnings.empty());
}

TEST_CASE("log magnitude uses the configured offset") {
    SpectralConfig cfg;
    Spectrogram lin;
    const std::size_t bins = 1025;
    lin.frames = FrameMatrix<double>(2, bins, 3.0);
    for (std::size_t k = 0; k < bins; ++k) {
        lin.bin_frequencies.push_back(static_cast<double>(k) * 44100.0 / 2048.0);
    }
    // Constant input through unit-area filters stays 3, then log1p(3 / offset).
    for (double offset : {1.0, 0.5}) {
        cfg.log_offset = offset;
        const auto out = log_filter(lin, cfg);
        for (double v : out.frames.data()) {
            REQUIRE_THAT(v, WithinRel(std::log(3.0 + offset) - std::log(offset), 1e-12));
        }
    }
}
