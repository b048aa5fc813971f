//
//  commands.h
//  onsetlab
//
//  Command implementations behind the onsetlab executable. Kept out of
//  main() so the tests can drive them in-process.
//

#pragma once

#include "onsetlab/common.h"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace onsetlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// An input path that does not exist. Mapped to exit code 2.
class MissingInput : public Error {
public:
    explicit MissingInput(const std::filesystem::path& path)
        : Error("input not found: " + path.string()), path_(path) {}
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Every parameter of every command. Serialized flat, one JSON key per
/// field; unknown keys are rejected on load.
struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string out = ".";
    std::string manifest;
    std::string reference;
    std::vector<std::string> score;
    std::string experience;

    double omega = 0.025;
    std::vector<double> omegas = {0.025, 0.05, 0.075, 0.1};
    double lambda = 1.0;
    std::string lambda_grid;  // "lo:hi:step", empty when unused
    std::string detector = "SuF";
    std::uint64_t seed = 0;
    double min_separation = 0.030;
    double min_ioi = 0.030;  // annotation preprocessing; 0 disables
    bool sort_by_experience = false;
    int max_repetitions = 1000;
    int min_repetitions = 10;
    double convergence_eps = 0.001;

    // spectral front end
    double frame_length = 2048.0 / 44100.0;
    double hop = 0.01;
    std::string window = "hann";
    int bands_per_octave = 24;
    double fmin = 30.0;
    double fmax = 17000.0;
    double log_offset = 1.0;
    int max_width = 3;
    int mu = 1;

    // synth
    std::vector<double> onsets;
    int count = 0;  // regular grid when onsets is empty
    double ioi = 0.5;
    std::string tone = "click";
    double f0 = 440.0;
    int sample_rate = 44100;
    double duration = 0.0;
    double amplitude = 0.5;
    double attack = 0.0;
    double vibrato_depth = 0.0;
    double vibrato_rate = 0.0;
    double tremolo_depth = 0.0;
    double tremolo_rate = 0.0;
    double noise_level = 0.0;
    int annotators = 0;
    double jitter_sigma = 0.0;
    double miss_rate = 0.0;
    double false_rate = 0.0;
    std::string recording = "NR1_VA";

    nlohmann::ordered_json to_json() const;
    /// Missing keys keep their defaults. Throws Error on unknown keys or
    /// wrongly typed values.
    static RunConfig from_json(const nlohmann::json& j);
    /// Throws Error naming the first invalid parameter.
    void validate() const;
};

/// Schema version of each CSV the commands write.
nlohmann::ordered_json csv_schemas();

/// Parses arguments (without the program name) and runs one command.
/// Returns the process exit code: 0 success, 1 error, 2 missing input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Validates and executes a config, then writes run_metadata.json into
/// cfg.out. `extra_inputs` (e.g. the config file) are hashed alongside the
/// files the command read.
void execute(const RunConfig& cfg, std::ostream& out, std::ostream& err,
             const std::vector<std::filesystem::path>& extra_inputs = {});

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace onsetlab::cli
