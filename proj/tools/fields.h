//
//  fields.h
//  onsetlab
//
//  Internal to the command layer: the single list of RunConfig keys, used
//  for JSON (de)serialization and for generating command-line flags.
//

#pragma once

#include "commands.h"

#include "onsetlab/spectral.h"

namespace onsetlab::cli {

template <typename Visitor>
void visit_fields(RunConfig& c, Visitor&& v) {
    v("command", c.command);
    v("inputs", c.inputs);
    v("out", c.out);
    v("manifest", c.manifest);
    v("reference", c.reference);
    v("score", c.score);
    v("experience", c.experience);
    v("omega", c.omega);
    v("omegas", c.omegas);
    v("lambda", c.lambda);
    v("lambda_grid", c.lambda_grid);
    v("detector", c.detector);
    v("seed", c.seed);
    v("min_separation", c.min_separation);
    v("min_ioi", c.min_ioi);
    v("sort_by_experience", c.sort_by_experience);
    v("max_repetitions", c.max_repetitions);
    v("min_repetitions", c.min_repetitions);
    v("convergence_eps", c.convergence_eps);
    v("frame_length", c.frame_length);
    v("hop", c.hop);
    v("window", c.window);
    v("bands_per_octave", c.bands_per_octave);
    v("fmin", c.fmin);
    v("fmax", c.fmax);
    v("log_offset", c.log_offset);
    v("max_width", c.max_width);
    v("mu", c.mu);
    v("onsets", c.onsets);
    v("count", c.count);
    v("ioi", c.ioi);
    v("tone", c.tone);
    v("f0", c.f0);
    v("sample_rate", c.sample_rate);
    v("duration", c.duration);
    v("amplitude", c.amplitude);
    v("attack", c.attack);
    v("vibrato_depth", c.vibrato_depth);
    v("vibrato_rate", c.vibrato_rate);
    v("tremolo_depth", c.tremolo_depth);
    v("tremolo_rate", c.tremolo_rate);
    v("noise_level", c.noise_level);
    v("annotators", c.annotators);
    v("jitter_sigma", c.jitter_sigma);
    v("miss_rate", c.miss_rate);
    v("false_rate", c.false_rate);
    v("recording", c.recording);
}

/// "lo:hi:step" to grid values.
std::vector<double> parse_lambda_grid(const std::string& text);

SpectralConfig spectral_config(const RunConfig& cfg);

}  // namespace onsetlab::cli
