//
//  peakpick.h
//  onsetlab
//
//  Global-mean threshold peak picking and grid search for its multiplier.
//

#pragma once

#include "onsetlab/annotations.h"
#include "onsetlab/common.h"
#include "onsetlab/evaluation.h"

#include <vector>

namespace onsetlab {

struct PeakPickConfig {
    double lambda = 1.0;
    double min_separation = 0.030;  // seconds

    void validate() const;
};

/// Threshold T = mean(theta) * lambda over all frames. Frame n is an onset
/// when theta(n-1) < theta(n) >= theta(n+1) and theta(n) > T; the first and
/// last frames never are. Peaks closer than min_separation to the last kept
/// peak are dropped. Times are n / fps.
OnsetList pick_peaks(const DetectionFunction& df, const PeakPickConfig& cfg = {});

/// Frame indices of the peaks, before conversion to seconds.
std::vector<std::size_t> pick_peak_frames(const DetectionFunction& df, const PeakPickConfig& cfg);

/// Values lo, lo+step, ... up to hi (inclusive, with a step/1000 guard).
std::vector<double> lambda_grid(double lo, double hi, double step);

struct LambdaFit {
    double lambda = 0.0;
    double mean_f = 0.0;
    std::vector<double> grid;
    std::vector<double> mean_f_per_lambda;
};

/// Grid value with the highest mean F over the (detection function,
/// reference) pairs; ties go to the smaller lambda. min_separation is taken
/// from `base` for every grid point.
LambdaFit fit_lambda(const std::vector<DetectionFunction>& dfs,
                     const std::vector<AnnotationTrack>& refs, const std::vector<double>& grid,
                     const MatchConfig& match, const PeakPickConfig& base = {});

}  // namespace onsetlab
