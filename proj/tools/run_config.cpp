//
//  run_config.cpp
//  onsetlab
//

#include "commands.h"
#include "fields.h"

#include "onsetlab/annotations.h"
#include "onsetlab/peakpick.h"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace onsetlab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
    throw Error("config: '" + key + "' must be " + expected);
}

void read(const json& v, const std::string& key, std::string& out) {
    if (!v.is_string()) bad_type(key, "a string");
    out = v.get<std::string>();
}

void read(const json& v, const std::string& key, double& out) {
    if (!v.is_number()) bad_type(key, "a number");
    out = v.get<double>();
}

void read(const json& v, const std::string& key, int& out) {
    if (!v.is_number_integer()) bad_type(key, "an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) bad_type(key, "a 32-bit integer");
    out = static_cast<int>(x);
}

void read(const json& v, const std::string& key, std::uint64_t& out) {
    if (!v.is_number_unsigned()) bad_type(key, "a non-negative integer");
    out = v.get<std::uint64_t>();
}

void read(const json& v, const std::string& key, bool& out) {
    if (!v.is_boolean()) bad_type(key, "true or false");
    out = v.get<bool>();
}

void read(const json& v, const std::string& key, std::vector<std::string>& out) {
    if (!v.is_array()) bad_type(key, "an array of strings");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_string()) bad_type(key, "an array of strings");
        out.push_back(e.get<std::string>());
    }
}

void read(const json& v, const std::string& key, std::vector<double>& out) {
    if (!v.is_array()) bad_type(key, "an array of numbers");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_number()) bad_type(key, "an array of numbers");
        out.push_back(e.get<double>());
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw Error("config: " + message);
    }
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            return false;
        }
    }
    return true;
}

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    RunConfig copy = *this;
    visit_fields(copy, [&](const char* key, auto& field) { j[key] = field; });
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw Error("config: expected a JSON object");
    }
    RunConfig cfg;
    std::set<std::string> known;
    visit_fields(cfg, [&](const char* key, auto& field) {
        known.insert(key);
        if (auto it = j.find(key); it != j.end()) {
            read(*it, key, field);
        }
    });
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) {
            throw Error("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

void RunConfig::validate() const {
    static const std::set<std::string> commands = {"detect", "eval", "agreement", "aco", "onset-types", "synth"};
    require(commands.count(command) == 1, "unknown command '" + command + "'");
    require(!out.empty(), "out must not be empty");
    require(omega > 0.0 && std::isfinite(omega), "omega must be positive");
    require(!omegas.empty() && omegas.front() > 0.0 && strictly_increasing(omegas),
            "omegas must be positive and strictly increasing");
    require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
    if (!lambda_grid.empty()) {
        parse_lambda_grid(lambda_grid);
    }
    detector_from_string(detector);
    require(min_separation >= 0.0, "min_separation must be >= 0");
    require(min_ioi >= 0.0, "min_ioi must be >= 0");
    require(max_repetitions >= 1, "max_repetitions must be >= 1");
    require(min_repetitions >= 1 && min_repetitions <= max_repetitions,
            "min_repetitions must be in [1, max_repetitions]");
    require(convergence_eps > 0.0, "convergence_eps must be positive");
    require(window == "hann" || window == "hamming" || window == "rectangular",
            "window must be hann, hamming or rectangular");
    require(max_width >= 1 && max_width % 2 == 1, "max_width must be odd and >= 1");
    require(mu >= 1, "mu must be >= 1");
    spectral_config(*this).validate();

    require(count >= 0, "count must be >= 0");
    require(ioi > 0.0, "ioi must be positive");
    require(tone == "click" || tone == "sawtooth" || tone == "sine", "tone must be click, sawtooth or sine");
    require(f0 > 0.0, "f0 must be positive");
    require(sample_rate > 0, "sample_rate must be positive");
    require(duration >= 0.0 && attack >= 0.0 && noise_level >= 0.0, "durations and noise must be >= 0");
    require(amplitude >= 0.0, "amplitude must be >= 0");
    require(vibrato_depth >= 0.0 && tremolo_depth >= 0.0, "modulation depths must be >= 0");
    require(annotators >= 0, "annotators must be >= 0");
    require(jitter_sigma >= 0.0 && false_rate >= 0.0, "jitter_sigma and false_rate must be >= 0");
    require(miss_rate >= 0.0 && miss_rate <= 1.0, "miss_rate must lie in [0, 1]");
    require(metadata_from_filename(recording + "_x").has_value(),
            "recording must look like <NR|SP|DP><take>_<VN1|VN2|VA|VC>");
    require(strictly_increasing(onsets) && (onsets.empty() || onsets.front() >= 0.0),
            "onsets must be >= 0 and strictly increasing");
}

std::vector<double> parse_lambda_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    double lo = 0, hi = 0, step = 0;
    if (second == std::string::npos || !parse_decimal(text.substr(0, first), lo) ||
        !parse_decimal(text.substr(first + 1, second - first - 1), hi) ||
        !parse_decimal(text.substr(second + 1), step)) {
        throw Error("config: lambda_grid must look like lo:hi:step");
    }
    require(lo > 0.0, "lambda_grid values must be positive");
    return lambda_grid(lo, hi, step);
}

SpectralConfig spectral_config(const RunConfig& cfg) {
    SpectralConfig s;
    s.frame_length = cfg.frame_length;
    s.hop = cfg.hop;
    s.window = cfg.window == "hamming"       ? WindowType::Hamming
               : cfg.window == "rectangular" ? WindowType::Rectangular
                                             : WindowType::Hann;
    s.bands_per_octave = cfg.bands_per_octave;
    s.fmin = cfg.fmin;
    s.fmax = cfg.fmax;
    s.log_offset = cfg.log_offset;
    return s;
}

nlohmann::ordered_json csv_schemas() {
    return {{"detect.csv", 1},     {"lambda_fit.csv", 1}, {"scores.csv", 1},  {"agreement.csv", 1},
            {"aco_sweep.csv", 1},  {"aco.csv", 1},        {"selection.csv", 1}, {"onset_types.csv", 1}};
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MissingInput(path);
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256: digest unavailable");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

}  // namespace onsetlab::cli
