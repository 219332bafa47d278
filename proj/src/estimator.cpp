#include "emc/estimator.hpp"

#include <string>

#include "emc/error.hpp"

namespace emc {

Estimator::Estimator(int k, int m, double beta) : k_(k), m_(m), beta_(beta), tensor_(k, m) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ValidationError("regularization rate must lie in [0,1), got " + std::to_string(beta));
    }
    window_.reserve(static_cast<std::size_t>(k_));
}

bool Estimator::observe(int s, double lambda) {
    if (s < 0 || s >= m_) {
        throw ValidationError("symbol " + std::to_string(s) + " out of range [0," + std::to_string(m_) +
                              ") at stream position " + std::to_string(observations_));
    }
    ++observations_;
    bool updated = false;
    if (window_.size() == static_cast<std::size_t>(k_)) {
        const std::size_t r = tensor_.row_index(window_);
        tensor_.update_row_at(r, s, lambda);
        if (beta_ > 0.0) tensor_.regulate_at(r, beta_);
        ++updates_;
        updated = true;
        if (k_ > 0) window_.erase(window_.begin());
    }
    if (k_ > 0) window_.push_back(s);
    return updated;
}

void Estimator::restore_counts(std::uint64_t observations, std::uint64_t updates,
                               std::span<const int> window) {
    if (window.size() > static_cast<std::size_t>(k_)) {
        throw ValidationError("restored window longer than order " + std::to_string(k_));
    }
    for (int c : window) {
        if (c < 0 || c >= m_) throw ValidationError("restored window symbol out of range");
    }
    observations_ = observations;
    updates_ = updates;
    window_.assign(window.begin(), window.end());
}

}  // namespace emc
