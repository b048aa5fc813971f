//
//  evaluation.cpp
//  onsetlab
//

#include "onsetlab/evaluation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace onsetlab {

namespace {

struct Value {
    std::size_t count = 0;
    double cost = 0.0;
};

bool better(const Value& a, const Value& b) {
    if (a.count != b.count) {
        return a.count > b.count;
    }
    return a.cost < b.cost - kCostTieTolerance;
}

bool equivalent(const Value& a, const Value& b) {
    return a.count == b.count && std::abs(a.cost - b.cost) <= kCostTieTolerance;
}

bool within(double r, double e, double omega) {
    return std::abs(r - e) <= omega;
}

// Optimal non-crossing matching of ref[r0, r1) against est[e0, e1). For
// sorted points an optimal matching without crossings always exists, so a
// suffix DP over (ref, est) prefixes is exact.
void solve_block(std::span<const double> ref, std::span<const double> est, std::size_t r0,
                 std::size_t r1, std::size_t e0, std::size_t e1, double omega,
                 std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    const std::size_t p = r1 - r0;
    const std::size_t q = e1 - e0;
    const std::size_t stride = q + 1;
    std::vector<Value> best((p + 1) * (q + 1));
    auto at = [&](std::size_t i, std::size_t j) -> Value& { return best[i * stride + j]; };

    for (std::size_t i = p; i-- > 0;) {
        for (std::size_t j = q; j-- > 0;) {
            Value v = at(i + 1, j);
            const Value skip_est = at(i, j + 1);
            if (better(skip_est, v)) {
                v = skip_est;
            }
            const double r = ref[r0 + i];
            const double e = est[e0 + j];
            if (within(r, e, omega)) {
                const Value& rest = at(i + 1, j + 1);
                const Value take{rest.count + 1, rest.cost + std::abs(r - e)};
                if (better(take, v) || equivalent(take, v)) {
                    v = take;
                }
            }
            at(i, j) = v;
        }
    }

    std::size_t i = 0;
    std::size_t j = 0;
    while (i < p && j < q) {
        const Value target = at(i, j);
        const double r = ref[r0 + i];
        const double e = est[e0 + j];
        if (within(r, e, omega)) {
            const Value& rest = at(i + 1, j + 1);
            const Value take{rest.count + 1, rest.cost + std::abs(r - e)};
            if (equivalent(take, target)) {
                pairs.emplace_back(r0 + i, e0 + j);
                ++i;
                ++j;
                continue;
            }
        }
        if (equivalent(at(i + 1, j), target)) {
            ++i;
        } else {
            ++j;
        }
    }
}

}  // namespace

void MatchConfig::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error("match config: omega must be positive");
    }
}

double MatchResult::total_deviation() const {
    double sum = 0.0;
    for (const auto& [r, e] : tp_pairs) {
        sum += std::abs(r - e);
    }
    return sum;
}

MatchResult match_onsets(std::span<const double> reference, std::span<const double> estimate,
                         const MatchConfig& cfg) {
    cfg.validate();
    validate_onset_times({reference.begin(), reference.end()}, "match_onsets reference");
    validate_onset_times({estimate.begin(), estimate.end()}, "match_onsets estimate");
    const double omega = cfg.omega;
    const std::size_t n = reference.size();
    const std::size_t m = estimate.size();

    // Each reference sees a contiguous estimate range; overlapping ranges
    // chain into independent blocks.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t lo = 0;
    std::size_t i = 0;
    while (i < n) {
        const double r = reference[i];
        while (lo < m && estimate[lo] < r && !within(r, estimate[lo], omega)) {
            ++lo;
        }
        std::size_t hi = lo;
        while (hi < m && within(r, estimate[hi], omega)) {
            ++hi;
        }
        if (hi == lo) {
            ++i;
            continue;
        }
        const std::size_t block_r0 = i;
        const std::size_t block_e0 = lo;
        std::size_t block_e1 = hi;
        std::size_t k = i + 1;
        std::size_t lo_k = lo;
        while (k < n) {
            const double rk = reference[k];
            while (lo_k < m && estimate[lo_k] < rk && !within(rk, estimate[lo_k], omega)) {
                ++lo_k;
            }
            std::size_t hi_k = lo_k;
            while (hi_k < m && within(rk, estimate[hi_k], omega)) {
                ++hi_k;
            }
            if (hi_k == lo_k || lo_k >= block_e1) {
                break;
            }
            block_e1 = std::max(block_e1, hi_k);
            ++k;
        }
        solve_block(reference, estimate, block_r0, k, block_e0, block_e1, omega, pairs);
        i = k;
        lo = block_e1;
    }

    MatchResult result;
    std::vector<bool> ref_used(n, false);
    std::vector<bool> est_used(m, false);
    for (const auto& [ri, ei] : pairs) {
        result.tp_pairs.emplace_back(reference[ri], estimate[ei]);
        result.tp_index.emplace_back(ri, ei);
        ref_used[ri] = true;
        est_used[ei] = true;
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!est_used[j]) {
            result.fp.push_back(estimate[j]);
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (!ref_used[r]) {
            result.fn.push_back(reference[r]);
        }
    }
    return result;
}

MatchResult match_onsets(const OnsetList& reference, const OnsetList& estimate,
                         const MatchConfig& cfg) {
    return match_onsets(std::span<const double>(reference.times),
                        std::span<const double>(estimate.times), cfg);
}

Scores score_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    Scores s;
    if (tp + fp > 0) {
        s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    if (tp + fn > 0) {
        s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    if (s.precision + s.recall > 0.0) {
        s.f_measure = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
    return s;
}

Scores score(const MatchResult& match) {
    return score_counts(match.tp(), match.fp.size(), match.fn.size());
}

Scores evaluate(std::span<const double> reference, std::span<const double> estimate,
                const MatchConfig& cfg) {
    return score(match_onsets(reference, estimate, cfg));
}

AgreementMatrix agreement_matrix(const std::vector<AnnotationTrack>& tracks, const MatchConfig& cfg,
                                 bool sort_by_experience) {
    for (const auto& t : tracks) {
        if (t.recording_id() != tracks.front().recording_id()) {
            throw Error("agreement_matrix: tracks refer to different recordings (" +
                        tracks.front().recording_id() + " vs " + t.recording_id() + ")");
        }
    }
    std::vector<std::size_t> order(tracks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (sort_by_experience) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ea = tracks[a].experience_years;
            const auto& eb = tracks[b].experience_years;
            if (ea.has_value() != eb.has_value()) {
                return ea.has_value();
            }
            return ea.has_value() && *ea < *eb;
        });
    }

    AgreementMatrix out;
    out.f_measure = FrameMatrix<double>(tracks.size(), tracks.size());
    for (std::size_t i : order) {
        out.annotator_ids.push_back(tracks[i].annotator_id);
        out.experience_years.push_back(tracks[i].experience_years);
    }
    for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = 0; b < order.size(); ++b) {
            const auto& ref = tracks[order[a]].onsets.times;
            const auto& est = tracks[order[b]].onsets.times;
            out.f_measure(a, b) = evaluate(ref, est, cfg).f_measure;
        }
    }
    return out;
}

std::optional<double> StratifiedRates::rate(OnsetCategory c) const {
    const auto k = static_cast<std::size_t>(c);
    if (total[k] == 0) {
        return std::nullopt;
    }
    return static_cast<double>(matched[k]) / static_cast<double>(total[k]);
}

StratifiedRates stratified_tp_rate(const std::vector<ScoredNote>& reference,
                                   std::span<const double> estimate, const MatchConfig& cfg) {
    std::vector<double> ref_times;
    ref_times.reserve(reference.size());
    for (const auto& note : reference) {
        ref_times.push_back(note.time);
    }
    validate_onset_times(ref_times, "stratified_tp_rate reference");
    const auto match = match_onsets(ref_times, estimate, cfg);

    std::vector<bool> matched(reference.size(), false);
    for (const auto& [ri, ei] : match.tp_index) {
        matched[ri] = true;
    }
    StratifiedRates rates;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        for (auto c : kOnsetCategories) {
            if (in_category(reference[i].label, c)) {
                const auto k = static_cast<std::size_t>(c);
                ++rates.total[k];
                if (matched[i]) {
                    ++rates.matched[k];
                }
            }
        }
    }
    return rates;
}

}  // namespace onsetlab
