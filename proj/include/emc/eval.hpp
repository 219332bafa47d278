#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "emc/tensor.hpp"

namespace emc {

// Streaming absolute-error aggregation: each add() contributes the mean
// |estimate - truth| over every tensor entry, against the active mode's true
// tensor for that step.
class TrackingAccumulator {
public:
    void add(const StochasticTensor& estimate, const StochasticTensor& truth);

    std::uint64_t steps() const { return steps_; }
    double cumulative() const { return cae_; }
    double mean() const;

private:
    std::uint64_t steps_ = 0;
    double cae_ = 0.0;
};

struct ChangeReport {
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    double f1 = 0.0;
    double mean_lag = 0.0;  // over true positives; 0 when there are none
    std::uint64_t margin = 0;
};

// Greedy matching: each true change point takes the earliest unmatched
// detection in (t, t + margin]. Detections at or before a true point never
// match it; every unmatched detection is a false positive.
ChangeReport change_point_f1(const std::vector<std::uint64_t>& detections,
                             const std::vector<std::uint64_t>& truth, std::uint64_t margin);

// Change detections read off a prediction sequence: steps where the
// predicted mode moves from one existing mode to a different one. Negative
// entries mean "no mode yet"; the first prediction out of the empty memory
// announces initialization, not a regime change.
std::vector<std::uint64_t> prediction_changes(const std::vector<int>& predicted);

// Standard pair-counting ARI. Steps whose prediction is negative ("no mode
// yet") are removed from both sequences first.
double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& predicted);

// ARI over steady steps only; absent when no steady step carries a prediction.
std::optional<double> steady_only_ari(const std::vector<int>& truth,
                                      const std::vector<int>& predicted,
                                      const std::vector<bool>& steady);

// Fraction of steps spent in the drift condition.
double drift_ratio(const std::vector<bool>& steady);

// Mean, over true change points, of the delay until the prediction first
// equals the mode id that the new regime settles on (its majority prediction).
// Regimes that never receive a prediction are skipped; absent when all are.
std::optional<double> mean_recognition_lag(const std::vector<int>& labels,
                                           const std::vector<int>& predicted,
                                           const std::vector<std::uint64_t>& change_points);

// Count-based baseline: transition counts over a sliding window of the last
// w symbols, rows normalized on demand, uniform where the window holds no
// occurrence of the condition.
class SlidingWindowChain {
public:
    SlidingWindowChain(int k, int m, std::uint64_t w);

    void observe(int s);

    // Materializes the current estimate from the counts.
    StochasticTensor tensor() const;

    std::uint64_t window_size() const { return w_; }
    const std::deque<int>& window() const { return window_; }

private:
    int k_;
    int m_;
    std::uint64_t w_;
    std::deque<int> window_;
    std::vector<std::uint64_t> counts_;  // condition-major, like the tensor

    std::size_t transition_index(std::size_t start) const;
};

}  // namespace emc
