//
//  evaluation.h
//  onsetlab
//
//  Tolerance-window onset matching and the derived P/R/F scores.
//

#pragma once

#include "onsetlab/annotations.h"
#include "onsetlab/common.h"
#include "onsetlab/matrix.h"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace onsetlab {

struct MatchConfig {
    double omega = 0.025;  // half-window in seconds, closed interval

    void validate() const;
};

struct MatchResult {
    std::vector<std::pair<double, double>> tp_pairs;           // (reference, estimate)
    std::vector<std::pair<std::size_t, std::size_t>> tp_index;  // same order as tp_pairs
    std::vector<double> fp;                                     // unmatched estimates
    std::vector<double> fn;                                     // unmatched references

    std::size_t tp() const { return tp_pairs.size(); }
    double total_deviation() const;
};

struct Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

/// Maximum-cardinality one-to-one matching under |ref - est| <= omega.
/// Among maximum matchings the one with least total |ref - est| wins
/// (costs within kCostTieTolerance are equal); remaining ties prefer the
/// earliest estimate, then the earliest reference. Both inputs must be
/// strictly increasing.
MatchResult match_onsets(std::span<const double> reference, std::span<const double> estimate,
                         const MatchConfig& cfg = {});

MatchResult match_onsets(const OnsetList& reference, const OnsetList& estimate,
                         const MatchConfig& cfg = {});

inline constexpr double kCostTieTolerance = 1e-9;

/// P = TP/(TP+FP), R = TP/(TP+FN), F = 2PR/(P+R); each 0 when undefined.
Scores score(const MatchResult& match);

Scores score_counts(std::size_t tp, std::size_t fp, std::size_t fn);

Scores evaluate(std::span<const double> reference, std::span<const double> estimate,
                const MatchConfig& cfg = {});

struct AgreementMatrix {
    std::vector<std::string> annotator_ids;
    std::vector<std::optional<double>> experience_years;
    FrameMatrix<double> f_measure;  // (i, j): i as reference, j as estimate
};

/// Pairwise F-measures for tracks of one recording. With
/// `sort_by_experience`, rows/columns are ordered by ascending experience
/// (unknown experience last, original order among equals).
AgreementMatrix agreement_matrix(const std::vector<AnnotationTrack>& tracks,
                                 const MatchConfig& cfg = {}, bool sort_by_experience = false);

struct StratifiedRates {
    std::array<std::size_t, 4> matched{};
    std::array<std::size_t, 4> total{};

    /// nullopt when the category has no reference notes.
    std::optional<double> rate(OnsetCategory c) const;
};

StratifiedRates stratified_tp_rate(const std::vector<ScoredNote>& reference,
                                   std::span<const double> estimate, const MatchConfig& cfg = {});

}  // namespace onsetlab
