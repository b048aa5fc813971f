//
//  peakpick.cpp
//  onsetlab
//

#include "onsetlab/peakpick.h"

#include <cmath>
#include <numeric>

namespace onsetlab {

void PeakPickConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error("peak picking: lambda must be positive");
    }
    if (!(min_separation >= 0.0)) {
        throw Error("peak picking: min_separation must be >= 0");
    }
}

std::vector<std::size_t> pick_peak_frames(const DetectionFunction& df, const PeakPickConfig& cfg) {
    cfg.validate();
    if (!(df.fps > 0.0)) {
        throw Error("pick_peaks: fps must be positive");
    }
    if (df.empty()) {
        return {};
    }
    const auto& theta = df.values;
    const double mean = std::accumulate(theta.begin(), theta.end(), 0.0) / static_cast<double>(theta.size());
    const double threshold = mean * cfg.lambda;

    std::vector<std::size_t> peaks;
    for (std::size_t n = 1; n + 1 < theta.size(); ++n) {
        if (theta[n - 1] < theta[n] && theta[n] >= theta[n + 1] && theta[n] > threshold) {
            if (!peaks.empty() &&
                static_cast<double>(n - peaks.back()) / df.fps < cfg.min_separation) {
                continue;
            }
            peaks.push_back(n);
        }
    }
    return peaks;
}

OnsetList pick_peaks(const DetectionFunction& df, const PeakPickConfig& cfg) {
    OnsetList out;
    for (std::size_t n : pick_peak_frames(df, cfg)) {
        out.times.push_back(static_cast<double>(n) / df.fps);
    }
    return out;
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(lo > 0.0) || hi < lo) {
        throw Error("lambda grid: require 0 < lo <= hi and step > 0");
    }
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        if (v > hi + step * 1e-3) {
            break;
        }
        grid.push_back(v);
    }
    return grid;
}

LambdaFit fit_lambda(const std::vector<DetectionFunction>& dfs,
                     const std::vector<AnnotationTrack>& refs, const std::vector<double>& grid,
                     const MatchConfig& match, const PeakPickConfig& base) {
    if (dfs.empty() || grid.empty()) {
        throw Error("fit_lambda: empty inputs");
    }
    if (dfs.size() != refs.size()) {
        throw Error("fit_lambda: detection functions and references are not aligned");
    }
    LambdaFit fit;
    fit.grid = grid;
    bool have_best = false;
    for (double lambda : grid) {
        PeakPickConfig cfg = base;
        cfg.lambda = lambda;
        double sum = 0.0;
        for (std::size_t i = 0; i < dfs.size(); ++i) {
            const auto est = pick_peaks(dfs[i], cfg);
            sum += evaluate(refs[i].onsets.times, est.times, match).f_measure;
        }
        const double mean_f = sum / static_cast<double>(dfs.size());
        fit.mean_f_per_lambda.push_back(mean_f);
        if (!have_best || mean_f > fit.mean_f ||
            (mean_f == fit.mean_f && lambda < fit.lambda)) {
            fit.lambda = lambda;
            fit.mean_f = mean_f;
            have_best = true;
        }
    }
    return fit;
}

}  // namespace onsetlab
