#include "emc/emc.hpp"

#include <cmath>
#include <string>

#include "emc/error.hpp"

namespace emc {

void EmcConfig::validate() const {
    std::string problems;
    auto add = [&problems](const std::string& p) {
        if (!problems.empty()) problems += "; ";
        problems += p;
    };
    if (k < 0) add("order k must be non-negative, got " + std::to_string(k));
    if (m < 2) add("alphabet size m must be at least 2, got " + std::to_string(m));
    auto check_unit = [&add](double v, const char* name) {
        if (!(v > 0.0 && v < 1.0)) {
            add(std::string(name) + " must lie in (0,1), got " + std::to_string(v));
        }
    };
    check_unit(lambda_fast, "lambda_fast");
    check_unit(lambda_slow, "lambda_slow");
    if (lambda_fast > lambda_slow) {
        add("lambda_fast must not exceed lambda_slow (fast learning takes the larger step)");
    }
    if (!(beta >= 0.0 && beta < 1.0)) {
        add("beta must lie in [0,1), got " + std::to_string(beta));
    }
    auto check_threshold = [&add](double v, const char* name) {
        if (!(v > 0.0 && v <= 1.0)) {
            add(std::string(name) + " must lie in (0,1], got " + std::to_string(v));
        }
    };
    check_threshold(delta_fast, "delta_fast");
    check_threshold(delta_slow, "delta_slow");
    check_threshold(eta_fast, "eta_fast");
    check_threshold(eta_slow, "eta_slow");
    if (tau == 0) add("tau must be at least 1");
    if (!problems.empty()) throw ValidationError(problems);
}

std::uint64_t recommended_tau(double lambda_slow) {
    if (!(lambda_slow > 0.0 && lambda_slow < 1.0)) {
        throw ValidationError("lambda must lie in (0,1), got " + std::to_string(lambda_slow));
    }
    const double t = std::round(1.0 / (1.0 - lambda_slow));
    return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
}

EmcConfig default_config(int k, int m) {
    EmcConfig cfg;
    cfg.k = k;
    cfg.m = m;
    cfg.tau = recommended_tau(cfg.lambda_slow);
    cfg.validate();
    return cfg;
}

const char* to_string(StepEvent event) {
    switch (event) {
        case StepEvent::none: return "none";
        case StepEvent::drift_entered: return "drift_entered";
        case StepEvent::drift_ended: return "drift_ended";
        case StepEvent::mode_created: return "mode_created";
        case StepEvent::mode_refined: return "mode_refined";
        case StepEvent::mode_matched: return "mode_matched";
    }
    return "unknown";
}

namespace {
const EmcConfig& checked(const EmcConfig& config) {
    config.validate();
    return config;
}
}  // namespace

Emc::Emc(const EmcConfig& config)
    : cfg_(checked(config)),
      est_(config.k, config.m, config.beta),
      drift_(config.k, config.m, config.tau),
      memory_(config.k, config.m) {}

PredictionRecord Emc::step(int s) {
    const std::uint64_t t = est_.observation_count();
    const double lambda = drift_.steady() ? cfg_.lambda_slow : cfg_.lambda_fast;
    const bool updated = est_.observe(s, lambda);

    StepEvent event = StepEvent::none;
    if (updated && drift_.tick()) {
        const double delta = drift_.steady() ? cfg_.delta_slow : cfg_.delta_fast;
        const DriftOutcome outcome = drift_.check(est_.tensor(), delta);
        if (outcome != DriftOutcome::steady_kept) {
            const double eta = drift_.steady() ? cfg_.eta_slow : cfg_.eta_fast;
            const std::uint64_t before = memory_.mutation_count();
            const RegimeResult regime = memory_.identify(est_.tensor(), drift_.steady(), eta);
            if (!drift_.steady() && memory_.mutation_count() != before) ++drift_writes_;

            if (outcome == DriftOutcome::drift_entered) {
                event = StepEvent::drift_entered;
            } else if (regime.event == RegimeEvent::created) {
                event = StepEvent::mode_created;
            } else if (regime.event == RegimeEvent::refined) {
                event = StepEvent::mode_refined;
            } else if (regime.event == RegimeEvent::matched) {
                event = StepEvent::mode_matched;
            } else if (outcome == DriftOutcome::drift_ended) {
                event = StepEvent::drift_ended;
            }
        }
    }
    return {t, s, drift_.steady(), drift_.last_distance(), memory_.prediction(), event};
}

}  // namespace emc
