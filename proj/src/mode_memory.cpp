#include "emc/mode_memory.hpp"

#include <stdexcept>
#include <string>

#include "emc/error.hpp"

namespace emc {

ModeMemory::ModeMemory(int k, int m) : k_(k), m_(m) {
    StochasticTensor probe(k, m);  // validates the shape once
    (void)probe;
}

std::pair<int, double> ModeMemory::closest(const StochasticTensor& estimate) const {
    if (modes_.empty()) throw std::logic_error("closest() on empty mode memory");
    int best = 0;
    double best_d = tensor_distance(estimate, modes_[0].mean);
    for (std::size_t i = 1; i < modes_.size(); ++i) {
        const double d = tensor_distance(estimate, modes_[i].mean);
        if (d < best_d) {  // strict: ties keep the lowest id
            best = static_cast<int>(i);
            best_d = d;
        }
    }
    return {best, best_d};
}

RegimeResult ModeMemory::identify(const StochasticTensor& estimate, bool steady, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ValidationError("similarity threshold must lie in (0,1], got " + std::to_string(eta));
    }
    if (modes_.empty()) {
        if (!steady) return {RegimeEvent::none, kNoMode, -1.0};
        const int id = static_cast<int>(modes_.size());
        modes_.push_back({id, estimate, 1});
        ++mutations_;
        prediction_ = id;
        return {RegimeEvent::created, id, -1.0};
    }

    auto [id, d] = closest(estimate);
    if (d < eta) {
        prediction_ = id;
        if (!steady) return {RegimeEvent::matched, id, d};
        Mode& mode = modes_[static_cast<std::size_t>(id)];
        const double w = 1.0 / static_cast<double>(mode.update_count + 1);
        auto mean = mode.mean.values_mut();
        auto est = estimate.values();
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (est[i] - mean[i]) * w;
        mode.mean.normalize_rows();
        ++mode.update_count;
        ++mutations_;
        return {RegimeEvent::refined, id, d};
    }
    if (!steady) return {RegimeEvent::none, prediction_, d};
    const int fresh = static_cast<int>(modes_.size());
    modes_.push_back({fresh, estimate, 1});
    ++mutations_;
    prediction_ = fresh;
    return {RegimeEvent::created, fresh, d};
}

void ModeMemory::restore_mode(const StochasticTensor& mean, std::uint64_t update_count) {
    if (mean.order() != k_ || mean.alphabet_size() != m_) {
        throw ValidationError("mode tensor shape mismatch");
    }
    if (update_count == 0) throw ValidationError("mode update count must be positive");
    modes_.push_back({static_cast<int>(modes_.size()), mean, update_count});
}

void ModeMemory::restore_prediction(int id) {
    if (id != kNoMode && (id < 0 || id >= static_cast<int>(modes_.size()))) {
        throw ValidationError("prediction names a mode that does not exist");
    }
    prediction_ = id;
}

}  // namespace emc
