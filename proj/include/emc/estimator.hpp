#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emc/tensor.hpp"

namespace emc {

// Online estimator: keeps the length-k window of most recent symbols and
// applies the multiplicative update (plus optional entropy regulation) for
// each observation once the window is full. The first k observations only
// fill the window.
class Estimator {
public:
    Estimator(int k, int m, double beta);

    // Consumes one symbol with the given learning coefficient. Returns true
    // if the tensor was updated (always true from observation k+1 on).
    bool observe(int s, double lambda);

    const StochasticTensor& tensor() const { return tensor_; }
    StochasticTensor& tensor_mut() { return tensor_; }

    std::span<const int> window() const { return window_; }
    double beta() const { return beta_; }
    std::uint64_t observation_count() const { return observations_; }
    std::uint64_t update_count() const { return updates_; }

    // Snapshot restore hook; counts must be consistent with the stream that
    // produced the tensor.
    void restore_counts(std::uint64_t observations, std::uint64_t updates,
                        std::span<const int> window);

private:
    int k_;
    int m_;
    double beta_;
    StochasticTensor tensor_;
    std::vector<int> window_;
    std::uint64_t observations_ = 0;
    std::uint64_t updates_ = 0;
};

}  // namespace emc
