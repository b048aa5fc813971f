//
//  consistency.h
//  onsetlab
//
//  Average consistent onsets (ACO) across many annotators. A chain visits
//  the annotators in some order and keeps only the onsets every one of them
//  agrees on within the tolerance window; averaging chains over random
//  orders removes the dependence on who goes first.
//

#pragma once

#include "onsetlab/annotations.h"
#include "onsetlab/common.h"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace onsetlab {

struct AcoConfig {
    double omega = 0.025;
    int max_repetitions = 1000;
    // Two repetitions can agree by chance when an unlucky pair of
    // annotators leads both orders; convergence waits at least this long.
    int min_repetitions = 10;
    double convergence_eps = 0.001;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct ChainedOnset {
    double mean_time = 0.0;
    std::vector<double> contributing_times;

    /// Mean absolute deviation of the contributing times from their mean.
    double spread() const;
};

/// Starts from the matched pairs of the first two tracks, then matches the
/// running means against each further track and drops candidates that find
/// no partner.
std::vector<ChainedOnset> chained_consistent(const std::vector<std::span<const double>>& tracks,
                                             double omega);

std::vector<ChainedOnset> chained_consistent(const std::vector<AnnotationTrack>& tracks,
                                             double omega);

struct ConsistentOnsetSet {
    std::vector<double> aco_times;         // strictly increasing
    std::vector<double> per_onset_spread;  // seconds, averaged over repetitions
    std::vector<double> n_contributors;    // averaged over repetitions
    std::vector<double> presence;          // fraction of repetitions containing the onset
    std::size_t count = 0;                 // == aco_times.size()
    double mean_count = 0.0;               // running mean of per-repetition chain sizes
    double mean_timing_difference = 0.0;   // mean of per_onset_spread, 0 when empty
    int repetitions_used = 0;
    bool converged = false;
};

/// Repeats chained_consistent over seeded random annotator orders. Each
/// repetition's onsets are associated with the running entries by
/// tolerance matching; unmatched ones open new entries. Stops once a
/// repetition (from min_repetitions on, and never before the second) adds
/// no entry, moves no entry mean by convergence_eps or more and leaves the
/// majority set unchanged, or at max_repetitions (then
/// converged == false). Reported onsets are entries present in at least
/// half of the repetitions.
ConsistentOnsetSet compute_aco(const std::vector<std::span<const double>>& tracks,
                               const AcoConfig& cfg);

ConsistentOnsetSet compute_aco(const std::vector<AnnotationTrack>& tracks, const AcoConfig& cfg);

struct SweepPoint {
    double omega = 0.0;
    std::size_t count = 0;
    double mean_count = 0.0;
    double mean_timing_difference = 0.0;
    int repetitions_used = 0;
    bool converged = false;
};

/// compute_aco for each tolerance; `omegas` must be positive and ascending.
/// `cfg.omega` is ignored.
std::vector<SweepPoint> aco_sweep(const std::vector<AnnotationTrack>& tracks,
                                  const std::vector<double>& omegas, const AcoConfig& cfg);

struct AnnotatorConsistency {
    std::size_t index = 0;
    std::string annotator_id;
    std::size_t matched = 0;
    double mean_deviation = 0.0;  // seconds over matched ACOs
};

struct ConsistencySelection {
    AnnotatorConsistency best;
    std::vector<AnnotatorConsistency> ranking;  // best first
};

/// Ranks annotators by ACOs matched (desc), mean |t - aco| (asc), then
/// input index. Throws Error for an empty ACO set.
ConsistencySelection select_most_consistent(const std::vector<AnnotationTrack>& tracks,
                                            const ConsistentOnsetSet& aco, double omega);

}  // namespace onsetlab
