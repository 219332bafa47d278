#include "emc/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "emc/error.hpp"

namespace emc {
namespace {

constexpr double kRowSumTolerance = 1e-9;

std::size_t checked_capacity(int k, int m) {
    if (m < 2) throw ValidationError("alphabet size must be at least 2, got " + std::to_string(m));
    if (k < 0) throw ValidationError("order must be non-negative, got " + std::to_string(k));
    const std::size_t limit = std::numeric_limits<std::size_t>::max() / sizeof(double);
    std::size_t cells = 1;
    for (int i = 0; i < k + 1; ++i) {
        if (cells > limit / static_cast<std::size_t>(m)) {
            throw ValidationError("tensor with k=" + std::to_string(k) + ", m=" + std::to_string(m) +
                                  " exceeds addressable capacity");
        }
        cells *= static_cast<std::size_t>(m);
    }
    return cells;
}

}  // namespace

StochasticTensor::StochasticTensor(int k, int m)
    : k_(k), m_(m), rows_(checked_capacity(k, m) / static_cast<std::size_t>(m)) {
    data_.assign(rows_ * static_cast<std::size_t>(m_), 1.0 / m_);
}

std::size_t StochasticTensor::row_index(std::span<const int> condition) const {
    if (condition.size() != static_cast<std::size_t>(k_)) {
        throw ValidationError("condition length " + std::to_string(condition.size()) +
                              " does not match order " + std::to_string(k_));
    }
    std::size_t idx = 0;
    for (int c : condition) {
        if (c < 0 || c >= m_) {
            throw ValidationError("condition symbol " + std::to_string(c) + " out of range [0," +
                                  std::to_string(m_) + ")");
        }
        idx = idx * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c);
    }
    return idx;
}

std::span<const double> StochasticTensor::row(std::size_t r) const {
    return {data_.data() + r * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
}

std::span<double> StochasticTensor::row_mut(std::size_t r) {
    return {data_.data() + r * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
}

void StochasticTensor::update_row(std::span<const int> condition, int s, double lambda) {
    update_row_at(row_index(condition), s, lambda);
}

void StochasticTensor::update_row_at(std::size_t r, int s, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw ValidationError("learning coefficient must lie in (0,1), got " + std::to_string(lambda));
    }
    if (s < 0 || s >= m_) {
        throw ValidationError("symbol " + std::to_string(s) + " out of range [0," + std::to_string(m_) + ")");
    }
    auto cpd = row_mut(r);
    for (double& p : cpd) p *= lambda;
    cpd[static_cast<std::size_t>(s)] += 1.0 - lambda;
    maintain_row(r);
}

void StochasticTensor::regulate(std::span<const int> exempt, double beta) {
    regulate_at(row_index(exempt), beta);
}

void StochasticTensor::regulate_at(std::size_t exempt_row, double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ValidationError("regularization rate must lie in [0,1), got " + std::to_string(beta));
    }
    if (beta == 0.0) return;
    const double pull = beta / m_;
    for (std::size_t r = 0; r < rows_; ++r) {
        if (r == exempt_row) continue;
        for (double& p : row_mut(r)) p = (1.0 - beta) * p + pull;
        maintain_row(r);
    }
}

void StochasticTensor::normalize_rows() {
    for (std::size_t r = 0; r < rows_; ++r) maintain_row(r);
}

void StochasticTensor::maintain_row(std::size_t r) {
    auto cpd = row_mut(r);
    double sum = 0.0;
    for (double p : cpd) sum += p;
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
        for (double& p : cpd) p /= sum;
        ++renorm_count_;
    }
}

double hellinger_row(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw ValidationError("distribution lengths differ: " + std::to_string(p.size()) + " vs " +
                              std::to_string(q.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
        acc += d * d;
    }
    const double h = std::sqrt(acc * 0.5);
    return h > 1.0 ? 1.0 : h;  // guards floating-point overshoot
}

double tensor_distance(const StochasticTensor& a, const StochasticTensor& b) {
    if (!a.same_shape(b)) throw ValidationError("tensor shapes differ");
    double total = 0.0;
    for (std::size_t r = 0; r < a.row_count(); ++r) total += hellinger_row(a.row(r), b.row(r));
    return total / static_cast<double>(a.row_count());
}

}  // namespace emc
