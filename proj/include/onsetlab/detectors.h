//
//  detectors.h
//  onsetlab
//
//  Flux-family onset detection functions computed on log-filtered
//  spectrograms. theta(n) is defined for every frame so that frame n
//  always maps to time n / fps.
//

#pragma once

#include "onsetlab/audio_io.h"
#include "onsetlab/common.h"
#include "onsetlab/spectral.h"

namespace onsetlab {

struct FluxParams {
    int max_width = 3;  // frequency-axis maximum filter width, odd, in bands
    int mu = 1;         // frame distance of the reference frame
};

/// Phase-steadiness weighting for ComplexFlux.
struct SteadinessParams {
    double sigma = 0.1;        // radians
    double floor_weight = 0.1;
};

/// theta(n) = sum_b max(0, S(n,b) - S(n-1,b)), theta(0) = 0.
DetectionFunction spectral_flux(const Spectrogram& spec);

/// theta(n) = sum_b max(0, S(n,b) - M(n-mu,b)) where M is S maximum-filtered
/// across max_width neighbouring bands; theta(n) = 0 for n < mu.
DetectionFunction superflux(const Spectrogram& spec, const FluxParams& params = {});

/// Per linear bin weights in [floor_weight, 1]: 1 - exp(-|d2 phi| / sigma),
/// where d2 phi is the wrapped change of the frame-to-frame phase advance.
/// Frames 0 and 1 get weight 1.
FrameMatrix<double> phase_steadiness_weights(const ComplexSpectrogram& spec,
                                             const SteadinessParams& params = {});

/// SuperFlux difference weighted per band by the filterbank projection of
/// the phase-steadiness weights. `linear` and `log_spec` must come from the
/// same audio and `cfg`.
DetectionFunction complexflux(const ComplexSpectrogram& linear, const Spectrogram& log_spec,
                              const SpectralConfig& cfg, const FluxParams& params = {},
                              const SteadinessParams& steadiness = {});

struct DetectorSettings {
    SpectralConfig spectral;
    FluxParams flux;
    SteadinessParams steadiness;
};

/// Full pipeline: STFT, log filtering, then the chosen detector.
DetectionFunction compute_detection_function(const AudioBuffer& audio, DetectorId detector,
                                             const DetectorSettings& settings = {},
                                             Diagnostics* diag = nullptr);

}  // namespace onsetlab
