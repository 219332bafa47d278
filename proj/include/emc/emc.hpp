#pragma once

#include <cstdint>

#include "emc/drift.hpp"
#include "emc/estimator.hpp"
#include "emc/mode_memory.hpp"

namespace emc {

// Full hyperparameter set. Fast values apply while the drift indicator is in
// the drift condition, slow values while it is steady; lambda_fast <=
// lambda_slow because the smaller coefficient takes the larger step 1-lambda.
struct EmcConfig {
    int k = 1;
    int m = 2;
    double lambda_fast = 0.9;
    double lambda_slow = 0.99;
    double beta = 0.0;
    double delta_fast = 0.3;
    double delta_slow = 0.1;
    double eta_fast = 0.5;
    double eta_slow = 0.25;
    std::uint64_t tau = 100;

    // Throws a ValidationError naming every violated constraint at once.
    void validate() const;
};

// Suggested check interval for a given slow coefficient: about one
// characteristic forgetting time, round(1 / (1 - lambda)).
std::uint64_t recommended_tau(double lambda_slow);

// Library defaults; tau derives from lambda_slow.
EmcConfig default_config(int k, int m);

enum class StepEvent {
    none,
    drift_entered,
    drift_ended,
    mode_created,
    mode_refined,
    mode_matched,
};

const char* to_string(StepEvent event);

struct PredictionRecord {
    std::uint64_t t;   // 0-based observation index
    int symbol;
    bool steady;       // indicator after this step's possible transition
    double distance;   // distance from the most recent drift check
    int mode;          // ModeMemory::kNoMode until a mode exists
    StepEvent event;
};

// Per-observation pipeline: select the learning coefficient from the current
// indicator, feed the estimator, and at each completed check interval run the
// drift comparison and the regime identification its outcome calls for.
//
// When one check produces both a drift transition and a memory event, the
// record keeps the most salient one: drift_entered > mode_created >
// mode_refined > mode_matched > drift_ended.
class Emc {
public:
    explicit Emc(const EmcConfig& config);

    PredictionRecord step(int s);

    const EmcConfig& config() const { return cfg_; }
    const Estimator& estimator() const { return est_; }
    const DriftState& drift() const { return drift_; }
    const ModeMemory& memory() const { return memory_; }
    std::uint64_t observation_count() const { return est_.observation_count(); }

    // Memory writes observed while the indicator was in drift; stays 0 by
    // construction, exposed so harnesses can assert it end to end.
    std::uint64_t drift_write_violations() const { return drift_writes_; }

    // Snapshot restore hooks (mutable access for the loader).
    Estimator& estimator_mut() { return est_; }
    DriftState& drift_mut() { return drift_; }
    ModeMemory& memory_mut() { return memory_; }

private:
    EmcConfig cfg_;
    Estimator est_;
    DriftState drift_;
    ModeMemory memory_;
    std::uint64_t drift_writes_ = 0;
};

}  // namespace emc
