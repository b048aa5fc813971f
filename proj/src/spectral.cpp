//
//  spectral.cpp
//  onsetlab
//

#include "onsetlab/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace onsetlab {

namespace {

// The FFTW planner is not reentrant; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n) {
        in_ = fftw_alloc_real(n_);
        out_ = fftw_alloc_complex(n_ / 2 + 1);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), in_, out_, FFTW_ESTIMATE);
    }

    ~RealFft() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::span<double> input() { return {in_, n_}; }

    void execute(std::span<std::complex<double>> out) {
        fftw_execute(plan_);
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = {out_[k][0], out_[k][1]};
        }
    }

private:
    std::size_t n_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

}  // namespace

void SpectralConfig::validate() const {
    if (!(hop > 0.0) || !(frame_length > 0.0) || hop > frame_length) {
        throw Error("spectral config: require 0 < hop <= frame_length");
    }
    if (!(fmin < fmax) || fmin < 0.0) {
        throw Error("spectral config: require 0 <= fmin < fmax");
    }
    if (bands_per_octave < 1) {
        throw Error("spectral config: bands_per_octave must be >= 1");
    }
    if (!(log_offset > 0.0)) {
        throw Error("spectral config: log_offset must be positive");
    }
}

std::size_t SpectralConfig::frame_samples(int sample_rate) const {
    return static_cast<std::size_t>(std::lround(frame_length * sample_rate));
}

std::size_t SpectralConfig::hop_samples(int sample_rate) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hop * sample_rate)));
}

std::vector<double> make_window(WindowType type, std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (length < 2 || type == WindowType::Rectangular) {
        return w;
    }
    const double denom = static_cast<double>(length - 1);
    for (std::size_t i = 0; i < length; ++i) {
        const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
        w[i] = type == WindowType::Hann ? 0.5 - 0.5 * c : 0.54 - 0.46 * c;
    }
    return w;
}

ComplexSpectrogram stft(const AudioBuffer& audio, const SpectralConfig& cfg) {
    cfg.validate();
    if (audio.samples.empty()) {
        throw Error("stft: empty audio");
    }
    if (audio.sample_rate <= 0) {
        throw Error("stft: sample rate must be positive");
    }
    const std::size_t n = cfg.frame_samples(audio.sample_rate);
    if (n < 2) {
        throw Error("stft: frame shorter than 2 samples at this sample rate");
    }
    const std::size_t hop = cfg.hop_samples(audio.sample_rate);
    const std::size_t num_samples = audio.samples.size();
    const std::size_t num_frames = (num_samples + hop - 1) / hop;
    const std::size_t num_bins = n / 2 + 1;

    ComplexSpectrogram out;
    out.frames = FrameMatrix<std::complex<double>>(num_frames, num_bins);
    out.fps = static_cast<double>(audio.sample_rate) / static_cast<double>(hop);
    out.bin_frequencies.resize(num_bins);
    for (std::size_t k = 0; k < num_bins; ++k) {
        out.bin_frequencies[k] = static_cast<double>(k) * audio.sample_rate / static_cast<double>(n);
    }

    const auto window = make_window(cfg.window, n);
    RealFft fft(n);
    auto in = fft.input();
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t t = 0; t < num_frames; ++t) {
        const auto start = static_cast<std::ptrdiff_t>(t * hop) - half;
        for (std::size_t i = 0; i < n; ++i) {
            const std::ptrdiff_t idx = start + static_cast<std::ptrdiff_t>(i);
            const bool inside = idx >= 0 && idx < static_cast<std::ptrdiff_t>(num_samples);
            in[i] = inside ? audio.samples[static_cast<std::size_t>(idx)] * window[i] : 0.0;
        }
        fft.execute(out.frames.row(t));
    }
    return out;
}

Spectrogram magnitude(const ComplexSpectrogram& spec) {
    Spectrogram out;
    out.frames = FrameMatrix<double>(spec.num_frames(), spec.num_bins());
    out.fps = spec.fps;
    out.bin_frequencies = spec.bin_frequencies;
    for (std::size_t i = 0; i < spec.frames.data().size(); ++i) {
        out.frames.data()[i] = std::abs(spec.frames.data()[i]);
    }
    return out;
}

Spectrogram stft_magnitude(const AudioBuffer& audio, const SpectralConfig& cfg) {
    return magnitude(stft(audio, cfg));
}

void Filterbank::apply(std::span<const double> linear, std::span<double> out) const {
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const auto& band = bands[b];
        double acc = 0.0;
        for (std::size_t i = 0; i < band.weights.size(); ++i) {
            acc += band.weights[i] * linear[band.first_bin + i];
        }
        out[b] = acc;
    }
}

Filterbank make_log_filterbank(const std::vector<double>& bin_frequencies,
                               const SpectralConfig& cfg, Diagnostics* diag) {
    cfg.validate();
    if (bin_frequencies.size() < 3) {
        throw Error("log filterbank: need at least 3 linear bins");
    }
    const double bin_width = bin_frequencies[1] - bin_frequencies[0];
    const double nyquist = bin_frequencies.back();
    double fmax = cfg.fmax;
    if (fmax > nyquist) {
        if (diag != nullptr) {
            diag->warn("fmax " + format_decimal(fmax) + " Hz above Nyquist; clamped to " +
                       format_decimal(nyquist) + " Hz");
        }
        fmax = nyquist;
    }
    if (cfg.fmin >= fmax) {
        throw Error("log filterbank: fmin must lie below the (clamped) fmax");
    }

    // Quantize geometric band centers to unique bins.
    std::vector<std::size_t> bins;
    const double ratio = std::pow(2.0, 1.0 / cfg.bands_per_octave);
    const auto last = static_cast<long>(bin_frequencies.size() - 1);
    for (double f = cfg.fmin; f <= fmax * (1.0 + 1e-12); f *= ratio) {
        const long b = std::clamp(std::lround(f / bin_width), 0L, last);
        const auto ub = static_cast<std::size_t>(b);
        if (bins.empty() || ub > bins.back()) {
            bins.push_back(ub);
        }
    }
    if (bins.size() < 3) {
        throw Error("log filterbank: frequency range yields fewer than one band");
    }

    Filterbank fb;
    fb.num_bins = bin_frequencies.size();
    for (std::size_t j = 0; j + 2 < bins.size(); ++j) {
        const std::size_t start = bins[j];
        const std::size_t center = bins[j + 1];
        const std::size_t stop = bins[j + 2];
        FilterBand band;
        band.first_bin = start;
        band.center_frequency = bin_frequencies[center];
        band.weights.assign(stop - start, 0.0);
        for (std::size_t x = start; x < center; ++x) {
            band.weights[x - start] = static_cast<double>(x - start) / static_cast<double>(center - start);
        }
        for (std::size_t x = center; x < stop; ++x) {
            band.weights[x - start] = static_cast<double>(stop - x) / static_cast<double>(stop - center);
        }
        double area = 0.0;
        for (double w : band.weights) {
            area += w;
        }
        for (double& w : band.weights) {
            w /= area;
        }
        fb.bands.push_back(std::move(band));
    }
    return fb;
}

Spectrogram log_filter(const Spectrogram& spec, const SpectralConfig& cfg, Diagnostics* diag) {
    if (spec.log_frequency) {
        throw Error("log_filter: input is already log-frequency");
    }
    const Filterbank fb = make_log_filterbank(spec.bin_frequencies, cfg, diag);

    Spectrogram out;
    out.frames = FrameMatrix<double>(spec.num_frames(), fb.bands.size());
    out.fps = spec.fps;
    out.log_frequency = true;
    for (const auto& band : fb.bands) {
        out.bin_frequencies.push_back(band.center_frequency);
    }
    for (std::size_t t = 0; t < spec.num_frames(); ++t) {
        auto row = out.frames.row(t);
        fb.apply(spec.frames.row(t), row);
        for (double& v : row) {
            v = std::log1p(v / cfg.log_offset);
        }
    }
    return out;
}

}  // namespace onsetlab
