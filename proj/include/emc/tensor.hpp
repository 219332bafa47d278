#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace emc {

// Dense kth-order transition-probability tensor. One row per length-k
// condition, each row a distribution over the next symbol, stored
// contiguously in lexicographic condition-major order.
//
// Invariant: every row sums to 1 within 1e-9. update_row and regulate keep
// row sums exact in real arithmetic; accumulated floating-point drift beyond
// the tolerance is repaired on the spot and counted (renormalization_count).
class StochasticTensor {
public:
    // Uniform tensor; k >= 0 (k = 0 keeps a single unconditioned row), m >= 2.
    StochasticTensor(int k, int m);

    int order() const { return k_; }
    int alphabet_size() const { return m_; }
    std::size_t row_count() const { return rows_; }

    // Horner walk over the condition digits; validates symbol range.
    std::size_t row_index(std::span<const int> condition) const;

    std::span<const double> row(std::size_t r) const;
    std::span<double> row_mut(std::size_t r);
    std::span<const double> values() const { return data_; }
    std::span<double> values_mut() { return data_; }

    // Multiplicative update of one row: row *= lambda, then the observed
    // symbol's entry gains (1 - lambda). Other rows are untouched.
    void update_row(std::span<const int> condition, int s, double lambda);
    void update_row_at(std::size_t r, int s, double lambda);

    // Blends every row except `exempt` toward uniform with weight beta.
    // No-op for beta = 0.
    void regulate(std::span<const int> exempt, double beta);
    void regulate_at(std::size_t exempt_row, double beta);

    // Repairs row sums after external writes through values_mut (snapshot
    // load, mean refinement). Same tolerance and counting as the updates.
    void normalize_rows();

    // Number of times a row drifted past the 1e-9 sum tolerance and was
    // rescaled back to unit mass.
    std::uint64_t renormalization_count() const { return renorm_count_; }

    bool same_shape(const StochasticTensor& other) const {
        return k_ == other.k_ && m_ == other.m_;
    }
    bool operator==(const StochasticTensor& other) const {
        return same_shape(other) && data_ == other.data_;
    }

private:
    void maintain_row(std::size_t r);

    int k_;
    int m_;
    std::size_t rows_;
    std::vector<double> data_;
    std::uint64_t renorm_count_ = 0;
};

// Hellinger distance between two distributions, in [0, 1].
double hellinger_row(std::span<const double> p, std::span<const double> q);

// Mean of per-condition row distances; 0 iff equal, 1 iff all rows disjoint.
double tensor_distance(const StochasticTensor& a, const StochasticTensor& b);

}  // namespace emc
