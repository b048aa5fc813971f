//
//  common.h
//  onsetlab
//
//  Shared value types and the library error hierarchy.
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace onsetlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_ = 0;
};

/// Non-fatal findings collected while loading inputs.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

enum class DetectorId { SpectralFlux, SuperFlux, ComplexFlux, External };

std::string to_string(DetectorId id);          // SpF / SuF / CoF / external
DetectorId detector_from_string(const std::string& name);

/// Uniformly sampled detection or activation function.
struct DetectionFunction {
    std::vector<double> values;
    double fps = 100.0;
    DetectorId detector = DetectorId::External;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Strictly increasing onset times in seconds.
struct OnsetList {
    std::vector<double> times;
    std::string source_id;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
};

/// Throws Error unless `times` is strictly increasing, finite and >= 0.
void validate_onset_times(const std::vector<double>& times, const std::string& what);

/// Shortest decimal representation that round-trips to the same double.
std::string format_decimal(double value);

/// Strict decimal parse of the whole string (surrounding blanks allowed).
bool parse_decimal(const std::string& text, double& out);

}  // namespace onsetlab
