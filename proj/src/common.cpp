//
//  common.cpp
//  onsetlab
//

#include "onsetlab/common.h"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace onsetlab {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      source_(source),
      line_(line) {}

std::string to_string(DetectorId id) {
    switch (id) {
    case DetectorId::SpectralFlux:
        return "SpF";
    case DetectorId::SuperFlux:
        return "SuF";
    case DetectorId::ComplexFlux:
        return "CoF";
    case DetectorId::External:
        return "external";
    }
    return "external";
}

DetectorId detector_from_string(const std::string& name) {
    if (name == "SpF") {
        return DetectorId::SpectralFlux;
    }
    if (name == "SuF") {
        return DetectorId::SuperFlux;
    }
    if (name == "CoF") {
        return DetectorId::ComplexFlux;
    }
    if (name == "external") {
        return DetectorId::External;
    }
    throw Error("unknown detector '" + name + "' (expected SpF, SuF, CoF or external)");
}

void validate_onset_times(const std::vector<double>& times, const std::string& what) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) {
            throw Error(what + ": onset " + std::to_string(i) + " is negative or not finite");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw Error(what + ": onset times must be strictly increasing (index " +
                        std::to_string(i) + ")");
        }
    }
}

std::string format_decimal(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

bool parse_decimal(const std::string& text, double& out) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && (text[begin] == ' ' || text[begin] == '\t' || text[begin] == '\r')) {
        ++begin;
    }
    while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t' || text[end - 1] == '\r')) {
        --end;
    }
    if (begin == end) {
        return false;
    }
    const char* first = text.data() + begin;
    const char* last = text.data() + end;
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        return false;
    }
    out = value;
    return true;
}

}  // namespace onsetlab
