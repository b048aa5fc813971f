//
//  detectors.cpp
//  onsetlab
//

#include "onsetlab/detectors.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onsetlab {

namespace {

double wrap_phase(double x) {
    return std::remainder(x, 2.0 * std::numbers::pi);
}

void max_filter_row(std::span<const double> in, std::span<double> out, int width) {
    const auto half = static_cast<std::ptrdiff_t>(width / 2);
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    for (std::ptrdiff_t b = 0; b < n; ++b) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, b - half);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, b + half);
        double m = in[static_cast<std::size_t>(lo)];
        for (std::ptrdiff_t k = lo + 1; k <= hi; ++k) {
            m = std::max(m, in[static_cast<std::size_t>(k)]);
        }
        out[static_cast<std::size_t>(b)] = m;
    }
}

void check_flux_params(const Spectrogram& spec, const FluxParams& params) {
    if (params.max_width < 1 || params.max_width % 2 == 0) {
        throw Error("superflux: max_width must be odd and >= 1");
    }
    if (params.mu < 1) {
        throw Error("superflux: mu must be >= 1");
    }
    if (spec.num_frames() <= static_cast<std::size_t>(params.mu)) {
        throw Error("superflux: spectrogram needs more than mu frames");
    }
}

FrameMatrix<double> max_filtered(const Spectrogram& spec, int width) {
    FrameMatrix<double> m(spec.num_frames(), spec.num_bins());
    for (std::size_t t = 0; t < spec.num_frames(); ++t) {
        max_filter_row(spec.frames.row(t), m.row(t), width);
    }
    return m;
}

}  // namespace

DetectionFunction spectral_flux(const Spectrogram& spec) {
    if (spec.num_frames() < 2) {
        throw Error("spectral_flux: need at least 2 frames");
    }
    DetectionFunction df;
    df.fps = spec.fps;
    df.detector = DetectorId::SpectralFlux;
    df.values.assign(spec.num_frames(), 0.0);
    for (std::size_t n = 1; n < spec.num_frames(); ++n) {
        const auto cur = spec.frames.row(n);
        const auto prev = spec.frames.row(n - 1);
        double sum = 0.0;
        for (std::size_t b = 0; b < cur.size(); ++b) {
            sum += std::max(0.0, cur[b] - prev[b]);
        }
        df.values[n] = sum;
    }
    return df;
}

DetectionFunction superflux(const Spectrogram& spec, const FluxParams& params) {
    check_flux_params(spec, params);
    const auto reference = max_filtered(spec, params.max_width);
    const auto mu = static_cast<std::size_t>(params.mu);

    DetectionFunction df;
    df.fps = spec.fps;
    df.detector = DetectorId::SuperFlux;
    df.values.assign(spec.num_frames(), 0.0);
    for (std::size_t n = mu; n < spec.num_frames(); ++n) {
        const auto cur = spec.frames.row(n);
        const auto ref = reference.row(n - mu);
        double sum = 0.0;
        for (std::size_t b = 0; b < cur.size(); ++b) {
            sum += std::max(0.0, cur[b] - ref[b]);
        }
        df.values[n] = sum;
    }
    return df;
}

FrameMatrix<double> phase_steadiness_weights(const ComplexSpectrogram& spec,
                                             const SteadinessParams& params) {
    const std::size_t frames = spec.num_frames();
    const std::size_t bins = spec.num_bins();
    FrameMatrix<double> weights(frames, bins, 1.0);
    if (frames < 3) {
        return weights;
    }
    FrameMatrix<double> advance(frames, bins, 0.0);
    for (std::size_t n = 1; n < frames; ++n) {
        for (std::size_t b = 0; b < bins; ++b) {
            advance(n, b) = wrap_phase(std::arg(spec.frames(n, b)) - std::arg(spec.frames(n - 1, b)));
        }
    }
    for (std::size_t n = 2; n < frames; ++n) {
        for (std::size_t b = 0; b < bins; ++b) {
            const double change = std::abs(wrap_phase(advance(n, b) - advance(n - 1, b)));
            const double steadiness = std::exp(-change / params.sigma);
            weights(n, b) = std::max(params.floor_weight, 1.0 - steadiness);
        }
    }
    return weights;
}

DetectionFunction complexflux(const ComplexSpectrogram& linear, const Spectrogram& log_spec,
                              const SpectralConfig& cfg, const FluxParams& params,
                              const SteadinessParams& steadiness) {
    if (linear.num_frames() != log_spec.num_frames()) {
        throw Error("complexflux: linear and log spectrogram frame counts differ");
    }
    check_flux_params(log_spec, params);
    const Filterbank fb = make_log_filterbank(linear.bin_frequencies, cfg);
    if (fb.bands.size() != log_spec.num_bins()) {
        throw Error("complexflux: filterbank does not match the log spectrogram");
    }

    const auto linear_weights = phase_steadiness_weights(linear, steadiness);
    const auto reference = max_filtered(log_spec, params.max_width);
    const auto mu = static_cast<std::size_t>(params.mu);

    DetectionFunction df;
    df.fps = log_spec.fps;
    df.detector = DetectorId::ComplexFlux;
    df.values.assign(log_spec.num_frames(), 0.0);
    std::vector<double> band_weights(log_spec.num_bins());
    for (std::size_t n = mu; n < log_spec.num_frames(); ++n) {
        fb.apply(linear_weights.row(n), band_weights);
        const auto cur = log_spec.frames.row(n);
        const auto ref = reference.row(n - mu);
        double sum = 0.0;
        for (std::size_t b = 0; b < cur.size(); ++b) {
            sum += band_weights[b] * std::max(0.0, cur[b] - ref[b]);
        }
        df.values[n] = sum;
    }
    return df;
}

DetectionFunction compute_detection_function(const AudioBuffer& audio, DetectorId detector,
                                             const DetectorSettings& settings, Diagnostics* diag) {
    const auto complex_spec = stft(audio, settings.spectral);
    const auto log_spec = log_filter(magnitude(complex_spec), settings.spectral, diag);
    switch (detector) {
    case DetectorId::SpectralFlux:
        return spectral_flux(log_spec);
    case DetectorId::SuperFlux:
        return superflux(log_spec, settings.flux);
    case DetectorId::ComplexFlux:
        return complexflux(complex_spec, log_spec, settings.spectral, settings.flux,
                           settings.steadiness);
    case DetectorId::External:
        break;
    }
    throw Error("external activations are loaded from files, not computed");
}

}  // namespace onsetlab
