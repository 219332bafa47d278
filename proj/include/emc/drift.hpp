#pragma once

#include <cstdint>

#include "emc/tensor.hpp"

namespace emc {

enum class DriftOutcome { steady_kept, drift_entered, drift_continuing, drift_ended };

const char* to_string(DriftOutcome outcome);

// Steady/drift indicator driven by periodic Hellinger comparison of the
// current estimate against a snapshot taken one check interval ago.
//
// The caller owns the cadence: tick() once per estimator update, and call
// check() only when tick() reports a boundary. The snapshot starts uniform,
// so the first check compares against the initial state.
class DriftState {
public:
    DriftState(int k, int m, std::uint64_t tau);

    // Advances the update counter; true when a check interval completes.
    bool tick();

    // Compares current against the snapshot with threshold delta and applies
    // the transition rules. The threshold boundary itself never transitions:
    // leaving steady requires distance > delta, leaving drift requires
    // distance < delta. Replaces the snapshot afterwards.
    DriftOutcome check(const StochasticTensor& current, double delta);

    bool steady() const { return steady_; }
    double last_distance() const { return last_distance_; }
    std::uint64_t tau() const { return tau_; }
    std::uint64_t updates_since_check() const { return since_check_; }
    const StochasticTensor& snapshot() const { return prev_; }

    // Snapshot restore hook.
    void restore(const StochasticTensor& prev, bool steady, std::uint64_t since_check,
                 double last_distance);

private:
    StochasticTensor prev_;
    std::uint64_t tau_;
    std::uint64_t since_check_ = 0;
    bool steady_ = true;
    double last_distance_ = 0.0;
};

}  // namespace emc
