//
//  synth.cpp
//  onsetlab
//

#include "onsetlab/synth.h"

#include "onsetlab/rng.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onsetlab {

namespace {

constexpr double kClickDecay = 0.002;  // seconds

double note_f0(const SynthSpec& spec, std::size_t k) {
    return spec.note_f0s.empty() ? spec.f0 : spec.note_f0s[k];
}

void add_click(std::vector<double>& out, std::size_t start, double amplitude, int sample_rate) {
    const double tau = kClickDecay * sample_rate;
    const auto length = static_cast<std::size_t>(std::ceil(10.0 * tau));
    for (std::size_t i = 0; i < length && start + i < out.size(); ++i) {
        out[start + i] += amplitude * std::exp(-static_cast<double>(i) / tau);
    }
}

void add_tone(std::vector<double>& out, const SynthSpec& spec, double f0, std::size_t start,
              std::size_t stop, int sample_rate) {
    const double sr = static_cast<double>(sample_rate);
    const double nyquist = 0.5 * sr;
    const double max_f = f0 * std::pow(2.0, spec.vibrato_depth / 1200.0);
    const int harmonics = spec.tone == ToneType::Sine
                              ? 1
                              : std::max(1, static_cast<int>(std::floor(nyquist / max_f)));
    const double attack_samples = spec.attack * sr;
    double phase = 0.0;
    for (std::size_t n = start; n < stop && n < out.size(); ++n) {
        const double t = static_cast<double>(n) / sr;
        const double local = static_cast<double>(n - start);
        double env = attack_samples > 0.0 ? std::min(1.0, local / attack_samples) : 1.0;
        if (spec.tremolo_depth > 0.0) {
            const double db = spec.tremolo_depth * std::sin(2.0 * std::numbers::pi * spec.tremolo_rate * t);
            env *= std::pow(10.0, db / 20.0);
        }
        double value = 0.0;
        if (spec.tone == ToneType::Sine) {
            value = std::sin(phase);
        } else {
            for (int k = 1; k <= harmonics; ++k) {
                value += std::sin(k * phase) / k;
            }
            value *= 2.0 / std::numbers::pi;
        }
        out[n] += spec.amplitude * env * value;

        double f = f0;
        if (spec.vibrato_depth > 0.0) {
            const double cents = spec.vibrato_depth * std::sin(2.0 * std::numbers::pi * spec.vibrato_rate * t);
            f *= std::pow(2.0, cents / 1200.0);
        }
        phase = std::fmod(phase + 2.0 * std::numbers::pi * f / sr, 2.0 * std::numbers::pi);
    }
}

}  // namespace

void SynthSpec::validate() const {
    validate_onset_times(onset_times, "synth spec");
    if (attack < 0.0 || vibrato_depth < 0.0 || note_duration < 0.0 || duration < 0.0 ||
        tremolo_depth < 0.0 || noise_level < 0.0) {
        throw Error("synth spec: attack, depths, durations and noise must be >= 0");
    }
    if (!note_f0s.empty() && note_f0s.size() != onset_times.size()) {
        throw Error("synth spec: note_f0s must have one entry per onset");
    }
}

AudioBuffer render_audio(const SynthSpec& spec, int sample_rate) {
    spec.validate();
    if (sample_rate <= 0) {
        throw Error("render_audio: sample rate must be positive");
    }
    const double sr = static_cast<double>(sample_rate);
    if (spec.tone != ToneType::Click) {
        for (std::size_t k = 0; k < spec.onset_times.size(); ++k) {
            const double f = note_f0(spec, k) * std::pow(2.0, spec.vibrato_depth / 1200.0);
            if (!(note_f0(spec, k) > 0.0) || f >= 0.5 * sr) {
                throw Error("render_audio: f0 must be positive and below Nyquist");
            }
        }
    }
    double duration = spec.duration;
    if (duration <= 0.0) {
        duration = (spec.onset_times.empty() ? 0.0 : spec.onset_times.back()) + 1.0;
    }

    AudioBuffer audio;
    audio.sample_rate = sample_rate;
    audio.source_id = "synth";
    audio.samples.assign(static_cast<std::size_t>(std::llround(duration * sr)), 0.0);

    for (std::size_t k = 0; k < spec.onset_times.size(); ++k) {
        const auto start = static_cast<std::size_t>(std::llround(spec.onset_times[k] * sr));
        if (start >= audio.samples.size()) {
            continue;
        }
        if (spec.tone == ToneType::Click) {
            add_click(audio.samples, start, spec.amplitude, sample_rate);
            continue;
        }
        std::size_t stop = audio.samples.size();
        if (spec.note_duration > 0.0) {
            stop = start + static_cast<std::size_t>(std::llround(spec.note_duration * sr));
        } else if (k + 1 < spec.onset_times.size()) {
            stop = static_cast<std::size_t>(std::llround(spec.onset_times[k + 1] * sr));
        }
        add_tone(audio.samples, spec, note_f0(spec, k), start, stop, sample_rate);
    }

    if (spec.noise_level > 0.0) {
        Rng rng(spec.rng_seed);
        for (double& s : audio.samples) {
            s += rng.normal(0.0, spec.noise_level);
        }
    }
    for (double& s : audio.samples) {
        s = std::isfinite(s) ? std::clamp(s, -1.0, 1.0) : 0.0;
    }
    return audio;
}

void AnnotatorModel::validate() const {
    if (jitter_sigma < 0.0 || false_rate < 0.0 || miss_rate < 0.0 || miss_rate > 1.0) {
        throw Error("annotator model: sigma and false rate must be >= 0, miss rate in [0, 1]");
    }
    for (double e : type_extra_sigma) {
        if (e < 0.0) {
            throw Error("annotator model: type jitter must be >= 0");
        }
    }
}

AnnotationTrack simulate_annotator(const OnsetList& truth, const AnnotatorModel& model,
                                   const std::vector<OnsetTypeLabel>* labels) {
    model.validate();
    validate_onset_times(truth.times, "simulate_annotator truth");
    if (labels != nullptr && labels->size() != truth.times.size()) {
        throw Error("simulate_annotator: one label per true onset required");
    }

    Rng rng(model.rng_seed);
    std::vector<double> times;
    for (std::size_t i = 0; i < truth.times.size(); ++i) {
        if (rng.bernoulli(model.miss_rate)) {
            continue;
        }
        double sigma = model.jitter_sigma;
        if (labels != nullptr) {
            double var = sigma * sigma;
            for (auto c : kOnsetCategories) {
                if (in_category((*labels)[i], c)) {
                    const double e = model.type_extra_sigma[static_cast<std::size_t>(c)];
                    var += e * e;
                }
            }
            sigma = std::sqrt(var);
        }
        const double t = truth.times[i] + (sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0);
        times.push_back(std::max(0.0, t));
    }
    if (model.false_rate > 0.0) {
        const double span = (truth.times.empty() ? 0.0 : truth.times.back()) + 1.0;
        for (double t = rng.exponential(model.false_rate); t < span; t += rng.exponential(model.false_rate)) {
            times.push_back(t);
        }
    }
    std::sort(times.begin(), times.end());

    AnnotationTrack track;
    track.annotator_id = model.annotator_id;
    track.onsets.source_id = truth.source_id;
    track.onsets.times = dedup_short_ioi(times, 0.030);
    return track;
}

}  // namespace onsetlab
