#include "emc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "emc/error.hpp"

namespace emc {

void TrackingAccumulator::add(const StochasticTensor& estimate, const StochasticTensor& truth) {
    if (!estimate.same_shape(truth)) throw ValidationError("tensor shapes differ");
    auto e = estimate.values();
    auto t = truth.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) acc += std::abs(e[i] - t[i]);
    cae_ += acc / static_cast<double>(e.size());
    ++steps_;
}

double TrackingAccumulator::mean() const {
    return steps_ == 0 ? 0.0 : cae_ / static_cast<double>(steps_);
}

ChangeReport change_point_f1(const std::vector<std::uint64_t>& detections,
                             const std::vector<std::uint64_t>& truth, std::uint64_t margin) {
    std::vector<std::uint64_t> det = detections;
    std::vector<std::uint64_t> cps = truth;
    std::sort(det.begin(), det.end());
    std::sort(cps.begin(), cps.end());

    ChangeReport report;
    report.margin = margin;
    std::uint64_t lag_total = 0;
    std::size_t i = 0;
    for (const std::uint64_t t : cps) {
        // Detections at or before t can no longer match anything: the next
        // true points are even later.
        while (i < det.size() && det[i] <= t) {
            ++report.false_positives;
            ++i;
        }
        if (i < det.size() && det[i] <= t + margin) {
            ++report.true_positives;
            lag_total += det[i] - t;
            ++i;
        } else {
            ++report.false_negatives;
        }
    }
    report.false_positives += det.size() - i;

    const std::uint64_t denom =
        2 * report.true_positives + report.false_positives + report.false_negatives;
    report.f1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(report.true_positives) /
                                       static_cast<double>(denom);
    if (report.true_positives > 0) {
        report.mean_lag =
            static_cast<double>(lag_total) / static_cast<double>(report.true_positives);
    }
    return report;
}

namespace {

double ari_from_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<std::pair<int, int>, std::uint64_t> cells;
    std::map<int, std::uint64_t> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++cells[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
    }
    auto choose2 = [](std::uint64_t n) {
        return static_cast<long double>(n) * static_cast<long double>(n - 1) / 2.0L;
    };
    long double index = 0, row_sum = 0, col_sum = 0;
    for (const auto& [key, n] : cells) index += choose2(n);
    for (const auto& [key, n] : rows) row_sum += choose2(n);
    for (const auto& [key, n] : cols) col_sum += choose2(n);
    const long double total = choose2(static_cast<std::uint64_t>(a.size()));
    if (total == 0) return 1.0;
    const long double expected = row_sum * col_sum / total;
    const long double maximum = (row_sum + col_sum) / 2.0L;
    if (maximum == expected) return 1.0;  // both partitions degenerate and equal
    return static_cast<double>((index - expected) / (maximum - expected));
}

}  // namespace

std::vector<std::uint64_t> prediction_changes(const std::vector<int>& predicted) {
    std::vector<std::uint64_t> detections;
    int last = -1;
    for (std::size_t t = 0; t < predicted.size(); ++t) {
        if (predicted[t] < 0) continue;
        if (last >= 0 && predicted[t] != last) detections.push_back(static_cast<std::uint64_t>(t));
        last = predicted[t];
    }
    return detections;
}

double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) {
        throw ValidationError("label sequences differ in length: " + std::to_string(truth.size()) +
                              " vs " + std::to_string(predicted.size()));
    }
    std::vector<int> a, b;
    a.reserve(truth.size());
    b.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i] < 0) continue;
        a.push_back(truth[i]);
        b.push_back(predicted[i]);
    }
    return ari_from_pairs(a, b);
}

std::optional<double> steady_only_ari(const std::vector<int>& truth,
                                      const std::vector<int>& predicted,
                                      const std::vector<bool>& steady) {
    if (truth.size() != predicted.size() || truth.size() != steady.size()) {
        throw ValidationError("label/prediction/indicator lengths differ");
    }
    std::vector<int> a, b;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!steady[i] || predicted[i] < 0) continue;
        a.push_back(truth[i]);
        b.push_back(predicted[i]);
    }
    if (a.empty()) return std::nullopt;
    return ari_from_pairs(a, b);
}

double drift_ratio(const std::vector<bool>& steady) {
    if (steady.empty()) return 0.0;
    std::uint64_t drifting = 0;
    for (const bool s : steady) {
        if (!s) ++drifting;
    }
    return static_cast<double>(drifting) / static_cast<double>(steady.size());
}

std::optional<double> mean_recognition_lag(const std::vector<int>& labels,
                                           const std::vector<int>& predicted,
                                           const std::vector<std::uint64_t>& change_points) {
    if (labels.size() != predicted.size()) {
        throw ValidationError("label sequences differ in length");
    }
    double lag_total = 0.0;
    std::uint64_t recognized = 0;
    for (std::size_t c = 0; c < change_points.size(); ++c) {
        const std::size_t begin = static_cast<std::size_t>(change_points[c]);
        const std::size_t end = c + 1 < change_points.size()
                                    ? static_cast<std::size_t>(change_points[c + 1])
                                    : labels.size();
        if (begin >= labels.size() || begin >= end) continue;

        // The regime's identity in prediction space: its majority prediction.
        std::map<int, std::uint64_t> votes;
        for (std::size_t t = begin; t < end; ++t) {
            if (predicted[t] >= 0) ++votes[predicted[t]];
        }
        if (votes.empty()) continue;
        int majority = votes.begin()->first;
        std::uint64_t best = votes.begin()->second;
        for (const auto& [id, n] : votes) {
            if (n > best) {
                majority = id;
                best = n;
            }
        }
        for (std::size_t t = begin; t < end; ++t) {
            if (predicted[t] == majority) {
                lag_total += static_cast<double>(t - begin);
                ++recognized;
                break;
            }
        }
    }
    if (recognized == 0) return std::nullopt;
    return lag_total / static_cast<double>(recognized);
}

SlidingWindowChain::SlidingWindowChain(int k, int m, std::uint64_t w) : k_(k), m_(m), w_(w) {
    if (w == 0) throw ValidationError("window size must be at least 1");
    const StochasticTensor shape_check(k, m);
    counts_.assign(shape_check.row_count() * static_cast<std::size_t>(m), 0);
}

std::size_t SlidingWindowChain::transition_index(std::size_t start) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(k_); ++i) {
        idx = idx * static_cast<std::size_t>(m_) + static_cast<std::size_t>(window_[start + i]);
    }
    return idx;
}

void SlidingWindowChain::observe(int s) {
    if (s < 0 || s >= m_) {
        throw ValidationError("symbol " + std::to_string(s) + " out of range [0," +
                              std::to_string(m_) + ")");
    }
    window_.push_back(s);
    if (window_.size() >= static_cast<std::size_t>(k_) + 1) {
        ++counts_[transition_index(window_.size() - static_cast<std::size_t>(k_) - 1)];
    }
    if (window_.size() > w_) {
        if (window_.size() >= static_cast<std::size_t>(k_) + 1) --counts_[transition_index(0)];
        window_.pop_front();
    }
}

StochasticTensor SlidingWindowChain::tensor() const {
    StochasticTensor t(k_, m_);  // uniform rows stand in for unseen conditions
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        const std::size_t base = r * static_cast<std::size_t>(m_);
        std::uint64_t sum = 0;
        for (int s = 0; s < m_; ++s) sum += counts_[base + static_cast<std::size_t>(s)];
        if (sum == 0) continue;
        auto row = t.row_mut(r);
        for (int s = 0; s < m_; ++s) {
            row[static_cast<std::size_t>(s)] =
                static_cast<double>(counts_[base + static_cast<std::size_t>(s)]) /
                static_cast<double>(sum);
        }
    }
    return t;
}

}  // namespace emc
