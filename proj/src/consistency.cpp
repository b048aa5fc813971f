//
//  consistency.cpp
//  onsetlab
//

#include "onsetlab/consistency.h"

#include "onsetlab/evaluation.h"
#include "onsetlab/rng.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace onsetlab {

namespace {

struct Entry {
    double time_sum = 0.0;
    double spread_sum = 0.0;
    double contributor_sum = 0.0;
    int appearances = 0;
    bool was_majority = false;

    double mean() const { return time_sum / appearances; }
};

bool in_majority(const Entry& e, int repetitions) {
    return 2 * e.appearances >= repetitions;
}

std::vector<std::span<const double>> spans_of(const std::vector<AnnotationTrack>& tracks) {
    std::vector<std::span<const double>> out;
    out.reserve(tracks.size());
    for (const auto& t : tracks) {
        out.emplace_back(t.onsets.times);
    }
    return out;
}

void check_same_recording(const std::vector<AnnotationTrack>& tracks) {
    for (const auto& t : tracks) {
        if (t.recording_id() != tracks.front().recording_id()) {
            throw Error("consistency: tracks refer to different recordings");
        }
    }
}

}  // namespace

void AcoConfig::validate() const {
    if (!(omega > 0.0)) {
        throw Error("aco config: omega must be positive");
    }
    if (!(convergence_eps > 0.0)) {
        throw Error("aco config: convergence_eps must be positive");
    }
    if (max_repetitions < 1) {
        throw Error("aco config: max_repetitions must be >= 1");
    }
    if (min_repetitions < 1 || min_repetitions > max_repetitions) {
        throw Error("aco config: min_repetitions must be in [1, max_repetitions]");
    }
}

double ChainedOnset::spread() const {
    if (contributing_times.empty()) {
        return 0.0;
    }
    const double n = static_cast<double>(contributing_times.size());
    const double mean = std::accumulate(contributing_times.begin(), contributing_times.end(), 0.0) / n;
    double dev = 0.0;
    for (double t : contributing_times) {
        dev += std::abs(t - mean);
    }
    return dev / n;
}

std::vector<ChainedOnset> chained_consistent(const std::vector<std::span<const double>>& tracks,
                                             double omega) {
    if (tracks.size() < 2) {
        throw Error("chained_consistent: need at least 2 tracks");
    }
    const MatchConfig match{omega};
    std::vector<ChainedOnset> candidates;
    for (const auto& [r, e] : match_onsets(tracks[0], tracks[1], match).tp_pairs) {
        candidates.push_back({0.5 * (r + e), {r, e}});
    }

    std::vector<double> means;
    for (std::size_t k = 2; k < tracks.size() && !candidates.empty(); ++k) {
        means.clear();
        for (const auto& c : candidates) {
            means.push_back(c.mean_time);
        }
        const auto result = match_onsets(means, tracks[k], match);
        std::vector<ChainedOnset> survivors;
        survivors.reserve(result.tp());
        for (const auto& [ci, ti] : result.tp_index) {
            ChainedOnset c = std::move(candidates[ci]);
            c.contributing_times.push_back(tracks[k][ti]);
            c.mean_time = std::accumulate(c.contributing_times.begin(), c.contributing_times.end(), 0.0) /
                          static_cast<double>(c.contributing_times.size());
            survivors.push_back(std::move(c));
        }
        candidates = std::move(survivors);
    }
    return candidates;
}

std::vector<ChainedOnset> chained_consistent(const std::vector<AnnotationTrack>& tracks,
                                             double omega) {
    check_same_recording(tracks);
    return chained_consistent(spans_of(tracks), omega);
}

ConsistentOnsetSet compute_aco(const std::vector<std::span<const double>>& tracks,
                               const AcoConfig& cfg) {
    cfg.validate();
    if (tracks.size() < 2) {
        throw Error("compute_aco: need at least 2 tracks");
    }

    Rng rng(cfg.rng_seed);
    std::vector<Entry> entries;
    double count_sum = 0.0;
    ConsistentOnsetSet out;

    std::vector<std::span<const double>> ordered(tracks.size());
    std::vector<double> entry_means;
    std::vector<double> rep_times;
    for (int rep = 1; rep <= cfg.max_repetitions; ++rep) {
        const auto order = rng.permutation(tracks.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            ordered[i] = tracks[order[i]];
        }
        const auto chain = chained_consistent(ordered, cfg.omega);
        count_sum += static_cast<double>(chain.size());

        entry_means.clear();
        for (const auto& e : entries) {
            entry_means.push_back(e.mean());
        }
        rep_times.clear();
        for (const auto& c : chain) {
            rep_times.push_back(c.mean_time);
        }
        const auto assoc = match_onsets(entry_means, rep_times, MatchConfig{cfg.omega});

        std::vector<bool> used(chain.size(), false);
        for (const auto& [ei, ci] : assoc.tp_index) {
            auto& e = entries[ei];
            e.time_sum += chain[ci].mean_time;
            e.spread_sum += chain[ci].spread();
            e.contributor_sum += static_cast<double>(chain[ci].contributing_times.size());
            ++e.appearances;
            used[ci] = true;
        }
        bool added = false;
        for (std::size_t ci = 0; ci < chain.size(); ++ci) {
            if (!used[ci]) {
                entries.push_back({chain[ci].mean_time, chain[ci].spread(),
                                   static_cast<double>(chain[ci].contributing_times.size()), 1,
                                   false});
                added = true;
            }
        }

        double max_shift = 0.0;
        for (std::size_t ei = 0; ei < entry_means.size(); ++ei) {
            max_shift = std::max(max_shift, std::abs(entries[ei].mean() - entry_means[ei]));
        }

        bool same_majority = true;
        for (auto& e : entries) {
            const bool now = in_majority(e, rep);
            same_majority = same_majority && now == e.was_majority;
            e.was_majority = now;
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const Entry& a, const Entry& b) { return a.mean() < b.mean(); });

        out.repetitions_used = rep;
        if (rep >= std::max(2, cfg.min_repetitions) && !added && max_shift < cfg.convergence_eps && same_majority) {
            out.converged = true;
            break;
        }
    }

    const int reps = out.repetitions_used;
    out.mean_count = count_sum / reps;
    double spread_total = 0.0;
    for (const auto& e : entries) {
        if (!in_majority(e, reps)) {
            continue;
        }
        const double t = e.mean();
        if (!out.aco_times.empty() && !(t > out.aco_times.back())) {
            continue;  // two entries collapsed onto one time; keep the first
        }
        out.aco_times.push_back(t);
        out.per_onset_spread.push_back(e.spread_sum / e.appearances);
        out.n_contributors.push_back(e.contributor_sum / e.appearances);
        out.presence.push_back(static_cast<double>(e.appearances) / reps);
        spread_total += out.per_onset_spread.back();
    }
    out.count = out.aco_times.size();
    out.mean_timing_difference = out.count > 0 ? spread_total / static_cast<double>(out.count) : 0.0;
    return out;
}

ConsistentOnsetSet compute_aco(const std::vector<AnnotationTrack>& tracks, const AcoConfig& cfg) {
    check_same_recording(tracks);
    return compute_aco(spans_of(tracks), cfg);
}

std::vector<SweepPoint> aco_sweep(const std::vector<AnnotationTrack>& tracks,
                                  const std::vector<double>& omegas, const AcoConfig& cfg) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0) || (i > 0 && omegas[i] < omegas[i - 1])) {
            throw Error("aco_sweep: tolerances must be positive and ascending");
        }
    }
    std::vector<SweepPoint> points;
    for (double omega : omegas) {
        AcoConfig c = cfg;
        c.omega = omega;
        const auto aco = compute_aco(tracks, c);
        points.push_back({omega, aco.count, aco.mean_count, aco.mean_timing_difference,
                          aco.repetitions_used, aco.converged});
    }
    return points;
}

ConsistencySelection select_most_consistent(const std::vector<AnnotationTrack>& tracks,
                                            const ConsistentOnsetSet& aco, double omega) {
    if (aco.aco_times.empty()) {
        throw Error("select_most_consistent: empty ACO set");
    }
    ConsistencySelection sel;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const auto match = match_onsets(aco.aco_times, tracks[i].onsets.times, MatchConfig{omega});
        AnnotatorConsistency a;
        a.index = i;
        a.annotator_id = tracks[i].annotator_id;
        a.matched = match.tp();
        a.mean_deviation = a.matched > 0 ? match.total_deviation() / static_cast<double>(a.matched) : 0.0;
        sel.ranking.push_back(std::move(a));
    }
    std::stable_sort(sel.ranking.begin(), sel.ranking.end(),
                     [](const AnnotatorConsistency& a, const AnnotatorConsistency& b) {
                         if (a.matched != b.matched) {
                             return a.matched > b.matched;
                         }
                         if (a.mean_deviation != b.mean_deviation) {
                             return a.mean_deviation < b.mean_deviation;
                         }
                         return a.index < b.index;
                     });
    if (sel.ranking.empty()) {
        throw Error("select_most_consistent: no annotators");
    }
    sel.best = sel.ranking.front();
    return sel;
}

}  // namespace onsetlab
