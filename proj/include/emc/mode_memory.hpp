#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "emc/tensor.hpp"

namespace emc {

// One discovered mode: the running mean of the estimates assigned to it and
// how many estimates that mean aggregates.
struct Mode {
    int id;
    StochasticTensor mean;
    std::uint64_t update_count;
};

enum class RegimeEvent { none, matched, refined, created };

struct RegimeResult {
    RegimeEvent event;
    int mode_id;      // kNoMode when no mode exists and none was created
    double distance;  // min distance to a stored mode; -1 when memory was empty
};

// Unsupervised mode set with nearest-mean matching. Modes are created and
// refined only while the caller is in the steady condition; during drift the
// memory is read-only and only the prediction may move to an existing mode.
// Modes are never evicted or merged.
class ModeMemory {
public:
    static constexpr int kNoMode = -1;

    explicit ModeMemory(int k, int m);

    // Nearest stored mode by tensor distance; ties break to the lowest id.
    // Throws when the memory is empty.
    std::pair<int, double> closest(const StochasticTensor& estimate) const;

    // Matching step. steady=false never writes: no creation, no refinement.
    // A match inside eta moves the prediction to the argmin mode; refinement
    // (steady only) folds the estimate into that mode's running mean. A miss
    // at or beyond eta creates a new mode in steady and does nothing in
    // drift.
    RegimeResult identify(const StochasticTensor& estimate, bool steady, double eta);

    const std::vector<Mode>& modes() const { return modes_; }
    std::size_t size() const { return modes_.size(); }
    int prediction() const { return prediction_; }

    // Total creations + refinements; lets a harness assert read-only phases.
    std::uint64_t mutation_count() const { return mutations_; }

    // Snapshot restore hooks.
    void restore_mode(const StochasticTensor& mean, std::uint64_t update_count);
    void restore_prediction(int id);

private:
    int k_;
    int m_;
    std::vector<Mode> modes_;
    int prediction_ = kNoMode;
    std::uint64_t mutations_ = 0;
};

}  // namespace emc
