#pragma once

#include <span>
#include <string>
#include <vector>

#include "emc/rng.hpp"
#include "emc/tensor.hpp"

namespace testutil {

// Runs f expecting it to throw E; returns the message, or "" if nothing (or
// something else) was thrown, so callers can assert on substrings.
template <typename E, typename F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    } catch (...) {
    }
    return {};
}

inline bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// Tensor with explicit rows, in condition-major row order.
inline emc::StochasticTensor make_tensor(int k, int m,
                                         const std::vector<std::vector<double>>& rows) {
    emc::StochasticTensor t(k, m);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto dst = t.row_mut(r);
        for (std::size_t s = 0; s < dst.size(); ++s) dst[s] = rows[r][s];
    }
    return t;
}

inline int draw_from_row(emc::SplitMix64& rng, std::span<const double> row) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
        acc += row[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(row.size() - 1);
}

// Stream sampled from a single fixed chain, first k symbols uniform.
inline std::vector<int> sample_chain(const emc::StochasticTensor& chain, std::size_t length,
                                     std::uint64_t seed) {
    emc::SplitMix64 rng(seed);
    const auto k = static_cast<std::size_t>(chain.order());
    const int m = chain.alphabet_size();
    std::vector<int> window;
    std::vector<int> out;
    out.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
        int s;
        if (window.size() < k) {
            s = static_cast<int>(rng.uniform_int(0, m - 1));
        } else {
            s = draw_from_row(rng, chain.row(chain.row_index(window)));
        }
        out.push_back(s);
        if (k > 0) {
            window.push_back(s);
            if (window.size() > k) window.erase(window.begin());
        }
    }
    return out;
}

}  // namespace testutil
