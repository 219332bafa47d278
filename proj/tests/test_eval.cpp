#include "emc/eval.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "emc/error.hpp"
#include "emc/rng.hpp"
#include "helpers.hpp"

using emc::ChangeReport;
using emc::SlidingWindowChain;
using emc::StochasticTensor;
using emc::TrackingAccumulator;
using emc::ValidationError;
using testutil::contains;
using testutil::make_tensor;
using testutil::message_of;

namespace {

// Exhaustive maximum matching between true points and detections under the
// margin rule, for cross-checking the greedy scorer.
std::uint64_t best_matching(const std::vector<std::uint64_t>& truth,
                            const std::vector<std::uint64_t>& det, std::uint64_t margin,
                            std::size_t ti, std::uint32_t used) {
    if (ti == truth.size()) return 0;
    std::uint64_t best = best_matching(truth, det, margin, ti + 1, used);
    for (std::size_t di = 0; di < det.size(); ++di) {
        if ((used >> di) & 1u) continue;
        if (det[di] > truth[ti] && det[di] <= truth[ti] + margin) {
            best = std::max(best, 1 + best_matching(truth, det, margin, ti + 1,
                                                    used | (1u << di)));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("eval: tracking error accumulates mean absolute entry error") {
    TrackingAccumulator acc;
    CHECK(acc.mean() == 0.0);

    const StochasticTensor truth = make_tensor(1, 2, {{1.0, 0.0}, {1.0, 0.0}});
    const StochasticTensor uniform(1, 2);
    acc.add(uniform, truth);  // every entry is off by 0.5
    CHECK(acc.steps() == 1);
    CHECK(acc.cumulative() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(acc.mean() == doctest::Approx(0.5).epsilon(1e-12));

    acc.add(truth, truth);
    CHECK(acc.cumulative() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(acc.mean() == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(acc.add(StochasticTensor(2, 2), truth), ValidationError);
}

TEST_CASE("eval: change-point scoring") {
    SUBCASE("detections one step late all match") {
        const ChangeReport r =
            emc::change_point_f1({101, 201, 301}, {100, 200, 300}, 250);
        CHECK(r.true_positives == 3);
        CHECK(r.false_positives == 0);
        CHECK(r.false_negatives == 0);
        CHECK(r.f1 == doctest::Approx(1.0));
        CHECK(r.mean_lag == doctest::Approx(1.0));
    }

    SUBCASE("a detection before the true point counts twice against") {
        const ChangeReport r = emc::change_point_f1({95}, {100}, 250);
        CHECK(r.true_positives == 0);
        CHECK(r.false_positives == 1);
        CHECK(r.false_negatives == 1);
        CHECK(r.f1 == 0.0);
    }

    SUBCASE("two detections in one window leave one false positive") {
        const ChangeReport r = emc::change_point_f1({150, 200}, {100}, 250);
        CHECK(r.true_positives == 1);
        CHECK(r.false_positives == 1);
        CHECK(r.false_negatives == 0);
        CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
        CHECK(r.mean_lag == doctest::Approx(50.0));
    }

    SUBCASE("the margin is inclusive, the true point itself is not") {
        CHECK(emc::change_point_f1({350}, {100}, 250).true_positives == 1);
        CHECK(emc::change_point_f1({351}, {100}, 250).true_positives == 0);
        CHECK(emc::change_point_f1({100}, {100}, 250).true_positives == 0);
    }

    SUBCASE("degenerate inputs") {
        CHECK(emc::change_point_f1({}, {}, 250).f1 == 1.0);
        const ChangeReport r = emc::change_point_f1({}, {100, 200}, 250);
        CHECK(r.f1 == 0.0);
        CHECK(r.false_negatives == 2);
        CHECK(emc::change_point_f1({10, 20}, {}, 250).false_positives == 2);
    }

    SUBCASE("greedy matching is maximal on random instances") {
        emc::SplitMix64 rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::uint64_t> truth, det;
            const auto n_truth = rng.next_below(4) + 1;
            const auto n_det = rng.next_below(6);
            for (std::uint64_t i = 0; i < n_truth; ++i) {
                truth.push_back(rng.next_below(1000));
            }
            for (std::uint64_t i = 0; i < n_det; ++i) det.push_back(rng.next_below(1200));
            std::sort(truth.begin(), truth.end());
            truth.erase(std::unique(truth.begin(), truth.end()), truth.end());
            std::sort(det.begin(), det.end());
            const std::uint64_t margin = rng.next_below(300) + 1;

            const ChangeReport r = emc::change_point_f1(det, truth, margin);
            const std::uint64_t optimal = best_matching(truth, det, margin, 0, 0);
            REQUIRE(r.true_positives == optimal);
            REQUIRE(r.true_positives + r.false_positives == det.size());
            REQUIRE(r.true_positives + r.false_negatives == truth.size());
        }
    }
}

TEST_CASE("eval: prediction changes ignore the first assignment") {
    using V = std::vector<std::uint64_t>;
    CHECK(emc::prediction_changes({-1, -1, 0, 0, 0}) == V{});
    CHECK(emc::prediction_changes({-1, 0, 0, 1, 1, 0}) == V{3, 5});
    CHECK(emc::prediction_changes({}) == V{});
    CHECK(emc::prediction_changes({2, 2, 2}) == V{});
}

TEST_CASE("eval: adjusted Rand index") {
    CHECK(emc::adjusted_rand_index({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(emc::adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(emc::adjusted_rand_index({0, 0, 0, 0}, {0, 1, 2, 3}) == doctest::Approx(0.0));
    // Hand-computed: all contingency cells are singletons.
    CHECK(emc::adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));

    // Steps without a prediction are excluded before pair counting.
    CHECK(emc::adjusted_rand_index({5, 5, 7, 7}, {-1, -1, 0, 0}) == doctest::Approx(1.0));

    CHECK_THROWS_AS(emc::adjusted_rand_index({0, 1}, {0}), ValidationError);

    SUBCASE("invariant under label permutations") {
        emc::SplitMix64 rng(41);
        std::vector<int> a, b;
        for (int i = 0; i < 200; ++i) {
            a.push_back(static_cast<int>(rng.next_below(4)));
            b.push_back(static_cast<int>(rng.next_below(3)));
        }
        const double base = emc::adjusted_rand_index(a, b);
        const int perm_a[4] = {2, 3, 1, 0};
        const int perm_b[3] = {1, 2, 0};
        std::vector<int> pa, pb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            pa.push_back(perm_a[a[i]]);
            pb.push_back(perm_b[b[i]]);
        }
        CHECK(emc::adjusted_rand_index(pa, pb) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("eval: steady-only ARI and drift ratio") {
    const std::vector<int> truth = {0, 0, 1, 1};
    const std::vector<int> pred = {0, 0, 1, 1};

    SUBCASE("all steady matches the plain ARI") {
        const auto v = emc::steady_only_ari(truth, pred, {true, true, true, true});
        REQUIRE(v.has_value());
        CHECK(*v == emc::adjusted_rand_index(truth, pred));
        CHECK(emc::drift_ratio({true, true, true, true}) == 0.0);
    }

    SUBCASE("all drift leaves nothing to score") {
        CHECK_FALSE(
            emc::steady_only_ari(truth, pred, {false, false, false, false}).has_value());
        CHECK(emc::drift_ratio({false, false, false, false}) == 1.0);
    }

    SUBCASE("only the steady steps count") {
        // Steady steps agree perfectly; the drifting ones disagree.
        const std::vector<int> noisy = {0, 1, 1, 0};
        const std::vector<bool> phi = {true, false, true, false};
        const auto v = emc::steady_only_ari(truth, noisy, phi);
        REQUIRE(v.has_value());
        CHECK(*v == 1.0);
        CHECK(emc::drift_ratio(phi) == 0.5);
    }

    CHECK(emc::drift_ratio({}) == 0.0);
    CHECK_THROWS_AS(emc::steady_only_ari(truth, pred, {true}), ValidationError);
}

TEST_CASE("eval: recognition lag against the regime's settled identity") {
    // Regime starting at t=2 settles on mode 9 (majority), first seen at t=3.
    const std::vector<int> labels = {0, 0, 1, 1, 1};
    const auto lag = emc::mean_recognition_lag(labels, {0, 0, 0, 9, 9}, {2});
    REQUIRE(lag.has_value());
    CHECK(*lag == doctest::Approx(1.0));

    const auto immediate = emc::mean_recognition_lag(labels, {0, 0, 9, 9, 9}, {2});
    REQUIRE(immediate.has_value());
    CHECK(*immediate == doctest::Approx(0.0));

    // A regime that never receives any prediction is skipped entirely.
    CHECK_FALSE(emc::mean_recognition_lag(labels, {0, 0, -1, -1, -1}, {2}).has_value());
}

TEST_CASE("eval: sliding-window chain") {
    SUBCASE("exact counts over a short window") {
        SlidingWindowChain chain(1, 2, 10);
        for (const int s : {0, 1, 0, 1}) chain.observe(s);
        const StochasticTensor t = chain.tensor();
        CHECK(t.row(0)[1] == 1.0);  // p(1|0)
        CHECK(t.row(1)[0] == 1.0);  // p(0|1)
    }

    SUBCASE("unseen conditions report the uniform row") {
        SlidingWindowChain chain(1, 3, 10);
        chain.observe(0);
        chain.observe(0);
        const StochasticTensor t = chain.tensor();
        CHECK(t.row(0)[0] == 1.0);
        for (double p : t.row(1)) CHECK(p == doctest::Approx(1.0 / 3.0));
        for (double p : t.row(2)) CHECK(p == doctest::Approx(1.0 / 3.0));
    }

    SUBCASE("eviction drops the oldest transition") {
        SlidingWindowChain chain(1, 2, 4);
        for (const int s : {0, 1, 0, 1, 1}) chain.observe(s);
        // Window is now (1,0,1,1): transitions 1->0, 0->1, 1->1.
        const StochasticTensor t = chain.tensor();
        CHECK(t.row(0)[1] == 1.0);
        CHECK(t.row(1)[0] == doctest::Approx(0.5));
        CHECK(t.row(1)[1] == doctest::Approx(0.5));
    }

    SUBCASE("incremental counts equal a recount of the stored window") {
        SlidingWindowChain chain(2, 3, 50);
        emc::SplitMix64 rng(47);
        for (int step = 0; step < 2000; ++step) {
            chain.observe(static_cast<int>(rng.next_below(3)));
            if (step % 25 != 0) continue;

            const std::vector<int> window(chain.window().begin(), chain.window().end());
            StochasticTensor recount(2, 3);
            std::vector<std::uint64_t> counts(recount.values().size(), 0);
            for (std::size_t i = 0; i + 2 < window.size(); ++i) {
                const std::size_t r =
                    static_cast<std::size_t>(window[i]) * 3 +
                    static_cast<std::size_t>(window[i + 1]);
                counts[r * 3 + static_cast<std::size_t>(window[i + 2])] += 1;
            }
            for (std::size_t r = 0; r < recount.row_count(); ++r) {
                std::uint64_t total = 0;
                for (std::size_t s = 0; s < 3; ++s) total += counts[r * 3 + s];
                if (total == 0) continue;
                auto row = recount.row_mut(r);
                for (std::size_t s = 0; s < 3; ++s) {
                    row[s] = static_cast<double>(counts[r * 3 + s]) /
                             static_cast<double>(total);
                }
            }
            REQUIRE(chain.tensor() == recount);
        }
    }

    SUBCASE("a window shorter than a transition never counts") {
        SlidingWindowChain chain(1, 2, 1);
        for (const int s : {0, 1, 0, 1}) chain.observe(s);
        const StochasticTensor uniform(1, 2);
        CHECK(chain.tensor() == uniform);
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(SlidingWindowChain(1, 2, 0), ValidationError);
        SlidingWindowChain chain(1, 2, 5);
        CHECK_THROWS_AS(chain.observe(2), ValidationError);
    }
}
