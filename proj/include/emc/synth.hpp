#pragma once

#include <cstdint>
#include <vector>

#include "emc/tensor.hpp"

namespace emc {

// Parameters of a regime-switching stream: n_regimes segments, each governed
// by one of n_modes random kth-order chains, with integer durations drawn
// uniformly from [duration_low, duration_high].
struct SyntheticSpec {
    int n_modes = 5;
    int k = 1;
    int m = 4;
    std::int64_t duration_low = 1500;
    std::int64_t duration_high = 2000;
    int n_regimes = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LabeledStream {
    std::vector<int> symbols;
    std::vector<int> mode_labels;               // one true mode index per symbol
    std::vector<std::uint64_t> change_points;   // regime starts, excluding t=0
    std::vector<StochasticTensor> true_tensors; // one per mode
};

// Mode tensors with every row drawn from a flat Dirichlet. Deterministic in
// spec.seed alone.
std::vector<StochasticTensor> generate_modes(const SyntheticSpec& spec);

// Regime sequence (uniform over modes, never repeating the previous one),
// durations from U(low, high), first k symbols uniform over the alphabet,
// then each symbol drawn from the active mode conditioned on the previous k
// symbols. The condition window carries across regime boundaries, so a
// switch is visible only through the transition statistics.
LabeledStream generate_stream(const SyntheticSpec& spec, std::vector<StochasticTensor> modes);

// Convenience: both stages from the spec.
LabeledStream generate_stream(const SyntheticSpec& spec);

}  // namespace emc
