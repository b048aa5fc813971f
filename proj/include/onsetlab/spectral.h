//
//  spectral.h
//  onsetlab
//
//  Short-time Fourier analysis and the log-frequency / log-magnitude
//  filtering that all flux detectors consume.
//

#pragma once

#include "onsetlab/audio_io.h"
#include "onsetlab/common.h"
#include "onsetlab/matrix.h"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace onsetlab {

enum class WindowType { Hann, Hamming, Rectangular };

struct SpectralConfig {
    double frame_length = 2048.0 / 44100.0;  // seconds
    double hop = 0.01;                       // seconds
    WindowType window = WindowType::Hann;
    int bands_per_octave = 24;
    double fmin = 30.0;
    double fmax = 17000.0;
    double log_offset = 1.0;

    /// Throws Error when an invariant is violated.
    void validate() const;

    std::size_t frame_samples(int sample_rate) const;
    std::size_t hop_samples(int sample_rate) const;
};

struct Spectrogram {
    FrameMatrix<double> frames;          // [num_frames x num_bins], magnitudes >= 0
    double fps = 100.0;
    std::vector<double> bin_frequencies;  // Hz, strictly increasing
    bool log_frequency = false;

    std::size_t num_frames() const { return frames.rows(); }
    std::size_t num_bins() const { return frames.cols(); }
};

struct ComplexSpectrogram {
    FrameMatrix<std::complex<double>> frames;
    double fps = 100.0;
    std::vector<double> bin_frequencies;

    std::size_t num_frames() const { return frames.rows(); }
    std::size_t num_bins() const { return frames.cols(); }
};

std::vector<double> make_window(WindowType type, std::size_t length);

/// Centered, zero-padded frames: frame t is centered on sample t*hop and
/// there are ceil(num_samples / hop) frames.
ComplexSpectrogram stft(const AudioBuffer& audio, const SpectralConfig& cfg);

Spectrogram magnitude(const ComplexSpectrogram& spec);

Spectrogram stft_magnitude(const AudioBuffer& audio, const SpectralConfig& cfg);

/// One triangular band: weights over linear bins [first_bin, first_bin + weights.size()).
struct FilterBand {
    std::size_t first_bin = 0;
    std::vector<double> weights;
    double center_frequency = 0.0;
};

struct Filterbank {
    std::vector<FilterBand> bands;
    std::size_t num_bins = 0;

    /// Projects one linear-frequency frame onto the bands.
    void apply(std::span<const double> linear, std::span<double> out) const;
};

/// Unit-area triangular filters with centers geometrically spaced at
/// bands_per_octave between fmin and fmax, quantized to unique bins.
/// fmax above Nyquist is clamped and reported through `diag`.
Filterbank make_log_filterbank(const std::vector<double>& bin_frequencies,
                               const SpectralConfig& cfg, Diagnostics* diag = nullptr);

/// Applies the log filterbank, then v -> log(v + offset) - log(offset).
Spectrogram log_filter(const Spectrogram& spec, const SpectralConfig& cfg,
                       Diagnostics* diag = nullptr);

}  // namespace onsetlab
