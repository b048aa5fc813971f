//
//  synth.h
//  onsetlab
//
//  Synthetic performances and annotators with known ground truth.
//

#pragma once

#include "onsetlab/annotations.h"
#include "onsetlab/audio_io.h"
#include "onsetlab/common.h"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace onsetlab {

enum class ToneType { Click, Sawtooth, Sine };

struct SynthSpec {
    std::vector<double> onset_times;  // seconds, strictly increasing
    ToneType tone = ToneType::Click;
    double f0 = 440.0;                // Hz, used when note_f0s is empty
    std::vector<double> note_f0s;     // optional per-note pitch
    double attack = 0.0;              // linear ramp, seconds
    double note_duration = 0.0;       // 0: each note lasts until the next onset
    double vibrato_depth = 0.0;       // cents
    double vibrato_rate = 0.0;        // Hz
    double tremolo_depth = 0.0;       // dB, amplitude swings +/- this much
    double tremolo_rate = 0.0;        // Hz
    double amplitude = 0.5;
    double duration = 0.0;            // total seconds; 0: last onset + 1 s
    double noise_level = 0.0;         // std-dev of additive white noise
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Clicks are single-sample impulses followed by a 2 ms exponential decay;
/// tonal notes are band-limited with a linear attack and optional
/// sinusoidal vibrato / tremolo. Output is clipped to [-1, 1].
AudioBuffer render_audio(const SynthSpec& spec, int sample_rate);

struct AnnotatorModel {
    double jitter_sigma = 0.0;  // seconds
    double miss_rate = 0.0;     // probability in [0, 1]
    double false_rate = 0.0;    // spurious onsets per second
    /// Extra jitter std-dev per onset category, combined in quadrature with
    /// jitter_sigma for labelled onsets.
    std::array<double, 4> type_extra_sigma{};
    std::uint64_t rng_seed = 0;
    std::string annotator_id = "sim";

    void validate() const;
};

/// Keeps each true onset with probability 1 - miss_rate, adds Gaussian
/// jitter, sprinkles Poisson false onsets over [0, last onset + 1 s], then
/// sorts and removes onsets closer than 30 ms to the previous kept one.
AnnotationTrack simulate_annotator(const OnsetList& truth, const AnnotatorModel& model,
                                   const std::vector<OnsetTypeLabel>* labels = nullptr);

}  // namespace onsetlab
