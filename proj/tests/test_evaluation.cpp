//
//  test_evaluation.cpp
//  onsetlab
//

#include "onsetlab/evaluation.h"
#include "onsetlab/rng.h"
#include "oracles.h"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace onsetlab;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> random_onsets(Rng& rng, std::size_t n, double span) {
    std::vector<double> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back(std::round(rng.uniform() * span * 1000.0) / 1000.0);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

AnnotationTrack track(const std::string& id, std::vector<double> times,
                      std::optional<double> experience = std::nullopt) {
    AnnotationTrack t;
    t.annotator_id = id;
    t.onsets.times = std::move(times);
    t.experience_years = experience;
    return t;
}

void check_partition(const MatchResult& m, std::size_t nref, std::size_t nest, double omega) {
    REQUIRE(m.tp() + m.fp.size() == nest);
    REQUIRE(m.tp() + m.fn.size() == nref);
    for (const auto& [r, e] : m.tp_pairs) {
        REQUIRE(std::abs(r - e) <= omega);
    }
}

}  // namespace

TEST_CASE("identical lists match completely") {
    const std::vector<double> t{0.1, 0.5, 0.9};
    const auto m = match_onsets(t, t);
    CHECK(m.tp() == 3);
    CHECK(m.fp.empty());
    CHECK(m.fn.empty());
    const auto s = score(m);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f_measure == 1.0);
}

TEST_CASE("worked example: 1.030 is outside the window of 1.000") {
    const std::vector<double> ref{1.000, 2.000};
    const std::vector<double> est{1.020, 1.030, 2.010};
    const auto m = match_onsets(ref, est, {0.025});
    REQUIRE(m.tp() == 2);
    CHECK(m.tp_pairs[0] == std::pair{1.000, 1.020});
    CHECK(m.tp_pairs[1] == std::pair{2.000, 2.010});
    CHECK(m.fp == std::vector<double>{1.030});
    CHECK(m.fn.empty());
    const auto o = oracle::exhaustive_matching(ref, est, 0.025);
    CHECK(o.count == 2);
    CHECK_THAT(m.total_deviation(), WithinAbs(o.cost, 1e-12));
}

TEST_CASE("equal-cost ties go to the earlier estimate") {
    const std::vector<double> ref{1.000};
    const std::vector<double> est{0.980, 1.020};
    const auto m = match_onsets(ref, est, {0.025});
    REQUIRE(m.tp() == 1);
    CHECK(m.tp_pairs[0].second == 0.980);
    CHECK(m.fp == std::vector<double>{1.020});
}

TEST_CASE("window boundary is closed") {
    CHECK(match_onsets(std::vector<double>{1.0}, std::vector<double>{1.5}, {0.5}).tp() == 1);
    CHECK(match_onsets(std::vector<double>{1.0}, std::vector<double>{1.5000001}, {0.5}).tp() == 0);
}

TEST_CASE("cardinality beats cost") {
    // Greedy nearest would pair 1.00-1.01 and strand 1.03.
    const std::vector<double> ref{1.00, 1.04};
    const std::vector<double> est{1.01, 1.03};
    const auto m = match_onsets(ref, est, {0.025});
    CHECK(m.tp() == 2);
}

TEST_CASE("inputs are validated") {
    CHECK_THROWS_AS(match_onsets(std::vector<double>{1.0, 0.5}, std::vector<double>{}), Error);
    CHECK_THROWS_AS(match_onsets(std::vector<double>{}, std::vector<double>{1.0, 1.0}), Error);
    CHECK_THROWS_AS(match_onsets(std::vector<double>{}, std::vector<double>{}, {0.0}), Error);
}

TEST_CASE("hand-computed scores") {
    auto s = score_counts(2, 1, 0);
    CHECK_THAT(s.precision, WithinAbs(2.0 / 3.0, 1e-12));
    CHECK_THAT(s.recall, WithinAbs(1.0, 1e-12));
    CHECK_THAT(s.f_measure, WithinAbs(0.8, 1e-12));
    s = score_counts(0, 0, 5);
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f_measure == 0.0);
    s = score_counts(0, 0, 0);
    CHECK(s.f_measure == 0.0);
    s = score_counts(3, 1, 2);
    CHECK_THAT(s.precision, WithinAbs(0.75, 1e-12));
    CHECK_THAT(s.recall, WithinAbs(0.6, 1e-12));
    CHECK_THAT(s.f_measure, WithinAbs(2.0 * 0.75 * 0.6 / 1.35, 1e-12));
    CHECK(evaluate(std::vector<double>{1.0}, std::vector<double>{}).f_measure == 0.0);
}

TEST_CASE("matching agrees with exhaustive enumeration") {
    Rng rng(1234);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto ref = random_onsets(rng, rng.below(9), 0.4);
        const auto est = random_onsets(rng, rng.below(9), 0.4);
        const double omega = std::array{0.010, 0.025, 0.050}[rng.below(3)];
        const auto m = match_onsets(ref, est, {omega});
        const auto o = oracle::exhaustive_matching(ref, est, omega);
        check_partition(m, ref.size(), est.size(), omega);
        REQUIRE(m.tp() == o.count);
        REQUIRE_THAT(m.total_deviation(), WithinAbs(o.cost, 1e-9));
    }
}

TEST_CASE("true-positive count is symmetric under role swap") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = random_onsets(rng, rng.below(30), 2.0);
        const auto b = random_onsets(rng, rng.below(30), 2.0);
        const auto ab = match_onsets(a, b);
        const auto ba = match_onsets(b, a);
        REQUIRE(ab.tp() == ba.tp());
        REQUIRE(ab.fp.size() == ba.fn.size());
        REQUIRE(score(ab).f_measure == score(ba).f_measure);
    }
}

TEST_CASE("shifting both lists leaves the count unchanged") {
    Rng rng(78);
    for (int trial = 0; trial < 300; ++trial) {
        // A 2^-10 s grid stays exact under the shift, so no difference
        // crosses the window edge through rounding.
        auto dyadic = [&](std::size_t n) {
            auto t = random_onsets(rng, n, 2.0);
            for (double& x : t) x = std::round(x * 1024.0) / 1024.0;
            t.erase(std::unique(t.begin(), t.end()), t.end());
            return t;
        };
        const auto a = dyadic(rng.below(30));
        const auto b = dyadic(rng.below(30));
        auto a2 = a;
        auto b2 = b;
        for (double& x : a2) x += 8.0;
        for (double& x : b2) x += 8.0;
        REQUIRE(match_onsets(a, b).tp() == match_onsets(a2, b2).tp());
    }
}

TEST_CASE("shrinking the window never adds true positives") {
    Rng rng(79);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_onsets(rng, rng.below(30), 2.0);
        const auto b = random_onsets(rng, rng.below(30), 2.0);
        std::size_t prev = SIZE_MAX;
        for (double omega : {0.1, 0.075, 0.05, 0.025, 0.01, 0.001}) {
            const auto tp = match_onsets(a, b, {omega}).tp();
            REQUIRE(tp <= prev);
            prev = tp;
        }
    }
}

TEST_CASE("large inputs stay fast and exact in cardinality") {
    Rng rng(80);
    const auto a = random_onsets(rng, 5000, 600.0);
    const auto b = random_onsets(rng, 5000, 600.0);
    const auto m = match_onsets(a, b, {0.05});
    check_partition(m, a.size(), b.size(), 0.05);
    CHECK(m.tp() == oracle::greedy_cardinality(a, b, 0.05));
}

TEST_CASE("agreement matrix: unit diagonal, symmetry, disjoint zeros") {
    std::vector<AnnotationTrack> tracks{
        track("a1", {0.5, 1.0, 1.5, 2.0}, 3.0),
        track("a2", {0.51, 1.02, 1.7}, 1.0),
        track("a3", {5.0, 6.0}),
        track("a4", {0.49, 1.0, 1.52, 2.01, 2.5}, 1.0),
    };
    const auto am = agreement_matrix(tracks);
    REQUIRE(am.f_measure.rows() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(am.f_measure(i, i) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(am.f_measure(i, j) == am.f_measure(j, i));
        }
    }
    CHECK(am.f_measure(0, 2) == 0.0);
    CHECK_THAT(am.f_measure(0, 1), WithinAbs(2.0 * 2 / 7.0, 1e-12));

    const auto sorted = agreement_matrix(tracks, {}, true);
    CHECK(sorted.annotator_ids == std::vector<std::string>{"a2", "a4", "a1", "a3"});
    CHECK(!sorted.experience_years[3].has_value());
    CHECK(sorted.f_measure(0, 2) == am.f_measure(1, 0));

    tracks[1].take = 5;
    CHECK_THROWS_AS(agreement_matrix(tracks), Error);
}

TEST_CASE("stratified true-positive rates") {
    std::vector<ScoredNote> notes;
    const std::vector<std::pair<Stopping, Articulation>> kinds{
        {Stopping::OpenString, Articulation::BowStart},
        {Stopping::StoppedNote, Articulation::FingerChange},
        {Stopping::StoppedNote, Articulation::BowStart},
        {Stopping::StoppedNote, Articulation::FingerChange},
    };
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        ScoredNote n;
        n.time = 1.0 + static_cast<double>(i);
        n.label = {kinds[i].first, kinds[i].second};
        notes.push_back(n);
    }
    std::vector<double> perfect;
    for (const auto& n : notes) {
        perfect.push_back(n.time);
    }
    const auto all = stratified_tp_rate(notes, perfect);
    for (auto c : kOnsetCategories) {
        REQUIRE(all.rate(c).has_value());
        CHECK(*all.rate(c) == 1.0);
    }

    // Drop every finger change.
    const auto no_fc = stratified_tp_rate(notes, std::vector<double>{1.0, 3.0});
    CHECK(*no_fc.rate(OnsetCategory::FingerChange) == 0.0);
    CHECK(*no_fc.rate(OnsetCategory::BowStart) == 1.0);
    CHECK(*no_fc.rate(OnsetCategory::OpenString) == 1.0);
    CHECK_THAT(*no_fc.rate(OnsetCategory::StoppedNote), WithinAbs(1.0 / 3.0, 1e-12));

    // No open strings at all: NA, not zero.
    std::vector<ScoredNote> stopped(notes.begin() + 1, notes.end());
    const auto na = stratified_tp_rate(stopped, std::vector<double>{2.0, 3.0, 4.0});
    CHECK_FALSE(na.rate(OnsetCategory::OpenString).has_value());
    CHECK(na.total[static_cast<std::size_t>(OnsetCategory::StoppedNote)] == 3);
}
