//
//  test_synth.cpp
//  onsetlab
//

#include "onsetlab/evaluation.h"
#include "onsetlab/synth.h"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace onsetlab;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> grid_onsets(std::size_t n, double step) {
    std::vector<double> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back(0.5 + step * static_cast<double>(i));
    }
    return t;
}

}  // namespace

TEST_CASE("no onsets renders silence") {
    SynthSpec spec;
    spec.duration = 0.5;
    const auto a = render_audio(spec, 16000);
    REQUIRE(a.samples.size() == 8000);
    CHECK(std::all_of(a.samples.begin(), a.samples.end(), [](double s) { return s == 0.0; }));
}

TEST_CASE("click peaks at its onset sample") {
    SynthSpec spec;
    spec.onset_times = {0.5};
    const auto a = render_audio(spec, 44100);
    CHECK(a.samples.size() == 66150);  // last onset + 1 s
    const auto peak = std::max_element(a.samples.begin(), a.samples.end(),
                                       [](double x, double y) { return std::abs(x) < std::abs(y); });
    const auto index = peak - a.samples.begin();
    CHECK(std::abs(index - 22050) <= 1);
}

TEST_CASE("overlapping loud notes stay finite and clipped") {
    SynthSpec spec;
    spec.tone = ToneType::Sawtooth;
    spec.onset_times = {0.1, 0.12, 0.14};
    spec.note_duration = 1.0;
    spec.amplitude = 0.9;
    spec.vibrato_depth = 50;
    spec.vibrato_rate = 5;
    spec.tremolo_depth = 12;
    spec.tremolo_rate = 3;
    spec.noise_level = 0.2;
    spec.rng_seed = 9;
    const auto a = render_audio(spec, 22050);
    bool clipped = false;
    for (double s : a.samples) {
        REQUIRE(std::isfinite(s));
        REQUIRE(std::abs(s) <= 1.0);
        clipped = clipped || std::abs(s) == 1.0;
    }
    CHECK(clipped);
}

TEST_CASE("sine note has the requested pitch") {
    SynthSpec spec;
    spec.tone = ToneType::Sine;
    spec.onset_times = {0.0};
    spec.f0 = 1000.0;
    spec.duration = 1.0;
    const auto a = render_audio(spec, 8000);
    // Count positive-going zero crossings over one second.
    int crossings = 0;
    for (std::size_t i = 1; i < a.samples.size(); ++i) {
        crossings += a.samples[i - 1] < 0.0 && a.samples[i] >= 0.0;
    }
    CHECK(std::abs(crossings - 1000) <= 1);
}

TEST_CASE("synth validation") {
    SynthSpec spec;
    spec.onset_times = {1.0, 0.5};
    CHECK_THROWS_AS(render_audio(spec, 44100), Error);
    spec.onset_times = {0.5};
    spec.attack = -1;
    CHECK_THROWS_AS(render_audio(spec, 44100), Error);
    spec.attack = 0;
    spec.tone = ToneType::Sine;
    spec.f0 = 30000;
    CHECK_THROWS_AS(render_audio(spec, 44100), Error);
    spec.f0 = 440;
    spec.note_f0s = {440, 550};
    CHECK_THROWS_AS(render_audio(spec, 44100), Error);
}

TEST_CASE("noise is reproducible from the seed") {
    SynthSpec spec;
    spec.onset_times = {0.2};
    spec.noise_level = 0.01;
    spec.rng_seed = 5;
    const auto a = render_audio(spec, 8000);
    const auto b = render_audio(spec, 8000);
    CHECK(a.samples == b.samples);
    spec.rng_seed = 6;
    CHECK(render_audio(spec, 8000).samples != a.samples);
}

TEST_CASE("identity annotator reproduces the truth") {
    OnsetList truth;
    truth.times = grid_onsets(50, 0.1);
    const auto track = simulate_annotator(truth, {});
    CHECK(track.onsets.times == truth.times);
}

TEST_CASE("miss rate 1 gives an empty track") {
    OnsetList truth;
    truth.times = grid_onsets(50, 0.1);
    AnnotatorModel model;
    model.miss_rate = 1.0;
    CHECK(simulate_annotator(truth, model).onsets.empty());
    model.miss_rate = 1.5;
    CHECK_THROWS_AS(simulate_annotator(truth, model), Error);
}

TEST_CASE("jitter magnitude follows the half-normal mean") {
    OnsetList truth;
    truth.times = grid_onsets(1000, 0.2);
    const double sigma = 0.005;
    const double expected = sigma * std::sqrt(2.0 / std::numbers::pi);
    CHECK_THAT(expected, WithinAbs(0.00399, 1e-5));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        AnnotatorModel model;
        model.jitter_sigma = sigma;
        model.rng_seed = seed;
        const auto track = simulate_annotator(truth, model);
        REQUIRE(track.onsets.size() == truth.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            sum += std::abs(track.onsets.times[i] - truth.times[i]);
        }
        const double mean = sum / static_cast<double>(truth.size());
        CHECK(std::abs(mean - expected) <= 0.1 * expected);
    }
}

TEST_CASE("false onsets arrive at the configured rate") {
    OnsetList truth;
    truth.times = {99.0};
    AnnotatorModel model;
    model.false_rate = 2.0;
    model.rng_seed = 3;
    const auto track = simulate_annotator(truth, model);
    // 100 s at 2/s, minus a few removed by the 30 ms rule.
    CHECK(track.onsets.size() > 170);
    CHECK(track.onsets.size() < 230);
    for (std::size_t i = 1; i < track.onsets.size(); ++i) {
        REQUIRE(track.onsets.times[i] - track.onsets.times[i - 1] >= 0.030);
    }
}

TEST_CASE("per-category extra jitter widens only labelled categories") {
    OnsetList truth;
    truth.times = grid_onsets(2000, 0.2);
    std::vector<OnsetTypeLabel> labels(truth.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = {Stopping::StoppedNote, i % 2 == 0 ? Articulation::FingerChange : Articulation::BowStart};
    }
    AnnotatorModel model;
    model.jitter_sigma = 0.002;
    model.type_extra_sigma[static_cast<std::size_t>(OnsetCategory::FingerChange)] = 0.010;
    model.rng_seed = 4;
    const auto track = simulate_annotator(truth, model, &labels);
    const auto m = match_onsets(truth.times, track.onsets.times, {0.1});
    double fc = 0.0, bs = 0.0;
    std::size_t nfc = 0, nbs = 0;
    for (const auto& [ri, ei] : m.tp_index) {
        const double d = std::abs(truth.times[ri] - track.onsets.times[ei]);
        if (ri % 2 == 0) {
            fc += d;
            ++nfc;
        } else {
            bs += d;
            ++nbs;
        }
    }
    CHECK(fc / static_cast<double>(nfc) > 3.0 * bs / static_cast<double>(nbs));
}
