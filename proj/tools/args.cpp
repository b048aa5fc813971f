//
//  args.cpp
//  onsetlab
//
//  Command-line parsing. Flags are generated from the RunConfig field list
//  (`--lambda-grid` for `lambda_grid`); only flags given explicitly
//  override values from --config.
//

#include "commands.h"
#include "fields.h"

#include "onsetlab/audio_io.h"

#include <CLI11.hpp>

#include <functional>
#include <map>
#include <ostream>
#include <set>

namespace onsetlab::cli {

namespace {

using Keys = std::set<std::string>;

const Keys kSpectralKeys = {"frame_length", "hop", "window", "bands_per_octave", "fmin", "fmax",
                            "log_offset", "max_width", "mu"};

// Flags offered by each subcommand; a config file may set any key.
const std::map<std::string, std::pair<std::string, Keys>> kCommands = {
    {"detect",
     {"Compute detection functions and pick onsets from audio, a manifest or activation files",
      {"inputs", "out", "manifest", "reference", "detector", "lambda", "lambda_grid", "omega", "min_separation",
       "min_ioi"}}},
    {"eval",
     {"Score estimate files against reference annotations (P/R/F)",
      {"inputs", "out", "reference", "omega", "min_ioi"}}},
    {"agreement",
     {"Pairwise F-measure matrices between annotators of each recording",
      {"inputs", "out", "omega", "experience", "sort_by_experience", "min_ioi"}}},
    {"aco",
     {"Average consistent onsets over a tolerance sweep, and the most consistent annotator",
      {"inputs", "out", "omega", "omegas", "seed", "max_repetitions", "min_repetitions", "convergence_eps", "min_ioi"}}},
    {"onset-types",
     {"True positive rates per onset type against score annotations",
      {"inputs", "out", "score", "omega", "min_ioi"}}},
    {"synth",
     {"Render a synthetic performance and simulated annotators",
      {"out", "seed", "onsets", "count", "ioi", "tone", "f0", "sample_rate", "duration", "amplitude", "attack",
       "vibrato_depth", "vibrato_rate", "tremolo_depth", "tremolo_rate", "noise_level", "annotators",
       "jitter_sigma", "miss_rate", "false_rate", "recording"}}},
};

std::string flag_name(const std::string& key) {
    std::string f = "--" + key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
}

// Registers one typed option; `apply` later copies it into the overrides
// when it was given.
class FlagSet {
public:
    template <typename T>
    void add(CLI::App* app, const std::string& key, T& storage) {
        CLI::Option* opt = nullptr;
        if constexpr (std::is_same_v<T, bool>) {
            opt = app->add_flag(flag_name(key), storage);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            opt = app->add_option(flag_name(key), storage)->delimiter(',');
        } else {
            opt = app->add_option(flag_name(key), storage);
        }
        appliers_.push_back([opt, key, &storage](nlohmann::json& j) {
            if (opt->count() > 0) {
                j[key] = storage;
            }
        });
    }

    template <typename T>
    void add_positional(CLI::App* app, const std::string& key, T& storage) {
        CLI::Option* opt = app->add_option(key, storage, "Input files or directories");
        appliers_.push_back([opt, key, &storage](nlohmann::json& j) {
            if (opt->count() > 0) {
                j[key] = storage;
            }
        });
    }

    void apply(nlohmann::json& j) const {
        for (const auto& a : appliers_) {
            a(j);
        }
    }

private:
    std::vector<std::function<void(nlohmann::json&)>> appliers_;
};

nlohmann::json load_config_file(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw MissingInput(path);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("config " + path + ": " + e.what());
    }
    // A run_metadata.json file carries the config under "config".
    if (j.is_object() && j.contains("config") && j.contains("tool")) {
        return j["config"];
    }
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Onset detection, evaluation and annotator consensus analysis", "onsetlab"};
    app.set_version_flag("--version", kToolVersion);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config or run_metadata.json to start from");
    app.require_subcommand(0, 1);

    // One storage block per subcommand so defaults stay intact.
    std::map<std::string, RunConfig> storage;
    std::map<std::string, FlagSet> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, info] : kCommands) {
        CLI::App* sub = app.add_subcommand(name, info.first);
        sub->add_option("--config", config_path, "JSON config or run_metadata.json to start from");
        auto& cfg = storage[name];
        auto& fs = flags[name];
        Keys keys = info.second;
        if (name == "detect") {
            keys.insert(kSpectralKeys.begin(), kSpectralKeys.end());
        }
        visit_fields(cfg, [&](const char* key, auto& field) {
            if (keys.count(key) == 0) {
                return;
            }
            if (std::string(key) == "inputs") {
                fs.add_positional(sub, key, field);
            } else {
                fs.add(sub, key, field);
            }
        });
        subs[name] = sub;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        nlohmann::json merged = nlohmann::json::object();
        std::vector<std::filesystem::path> extra;
        if (!config_path.empty()) {
            merged = load_config_file(config_path);
            if (!merged.is_object()) {
                throw Error("config " + config_path + ": expected a JSON object");
            }
            extra.emplace_back(config_path);
        }
        std::string command;
        for (const auto& [name, sub] : subs) {
            if (sub->parsed()) {
                command = name;
            }
        }
        if (command.empty()) {
            if (!merged.contains("command")) {
                err << app.help();
                return 1;
            }
        } else {
            if (merged.contains("command") && merged["command"] != command) {
                throw Error("config names command '" + merged["command"].get<std::string>() + "' but '" +
                            command + "' was requested");
            }
            merged["command"] = command;
            flags[command].apply(merged);
        }
        const RunConfig cfg = RunConfig::from_json(merged);
        execute(cfg, out, err, extra);
        return 0;
    } catch (const MissingInput& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace onsetlab::cli
