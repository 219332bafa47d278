#include "emc/drift.hpp"

#include <string>

#include "emc/error.hpp"

namespace emc {

const char* to_string(DriftOutcome outcome) {
    switch (outcome) {
        case DriftOutcome::steady_kept: return "steady_kept";
        case DriftOutcome::drift_entered: return "drift_entered";
        case DriftOutcome::drift_continuing: return "drift_continuing";
        case DriftOutcome::drift_ended: return "drift_ended";
    }
    return "unknown";
}

DriftState::DriftState(int k, int m, std::uint64_t tau) : prev_(k, m), tau_(tau) {
    if (tau == 0) throw ValidationError("check interval must be at least 1");
}

bool DriftState::tick() {
    if (++since_check_ < tau_) return false;
    since_check_ = 0;
    return true;
}

DriftOutcome DriftState::check(const StochasticTensor& current, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw ValidationError("drift threshold must lie in (0,1], got " + std::to_string(delta));
    }
    last_distance_ = tensor_distance(current, prev_);
    DriftOutcome outcome;
    if (steady_) {
        if (last_distance_ > delta) {
            steady_ = false;
            outcome = DriftOutcome::drift_entered;
        } else {
            outcome = DriftOutcome::steady_kept;
        }
    } else {
        if (last_distance_ < delta) {
            steady_ = true;
            outcome = DriftOutcome::drift_ended;
        } else {
            outcome = DriftOutcome::drift_continuing;
        }
    }
    prev_ = current;
    return outcome;
}

void DriftState::restore(const StochasticTensor& prev, bool steady, std::uint64_t since_check,
                         double last_distance) {
    if (!prev.same_shape(prev_)) throw ValidationError("snapshot tensor shape mismatch");
    if (since_check >= tau_) throw ValidationError("updates-since-check exceeds check interval");
    prev_ = prev;
    steady_ = steady;
    since_check_ = since_check;
    last_distance_ = last_distance;
}

}  // namespace emc
