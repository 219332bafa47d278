#include "emc/synth.hpp"

#include <string>
#include <utility>

#include "emc/error.hpp"
#include "emc/rng.hpp"

namespace emc {
namespace {

// Streams draw from a generator decoupled from the mode draws, so externally
// supplied tensors reproduce the same stream as generated ones.
constexpr std::uint64_t kStreamSeedSalt = 0x6a09e667f3bcc909ULL;

int sample_categorical(SplitMix64& rng, std::span<const double> row) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
        acc += row[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(row.size() - 1);
}

}  // namespace

void SyntheticSpec::validate() const {
    std::string problems;
    auto add = [&problems](const std::string& p) {
        if (!problems.empty()) problems += "; ";
        problems += p;
    };
    if (n_modes < 2) add("need at least 2 modes, got " + std::to_string(n_modes));
    if (k < 0) add("order k must be non-negative, got " + std::to_string(k));
    if (m < 2) add("alphabet size must be at least 2, got " + std::to_string(m));
    if (n_regimes < 2) add("need at least 2 regimes, got " + std::to_string(n_regimes));
    if (duration_low < 1) add("duration_low must be at least 1, got " + std::to_string(duration_low));
    if (duration_high < duration_low) {
        add("duration_high " + std::to_string(duration_high) + " is below duration_low " +
            std::to_string(duration_low));
    }
    if (!problems.empty()) throw ValidationError(problems);
}

std::vector<StochasticTensor> generate_modes(const SyntheticSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);
    std::vector<StochasticTensor> modes;
    modes.reserve(static_cast<std::size_t>(spec.n_modes));
    for (int i = 0; i < spec.n_modes; ++i) {
        StochasticTensor t(spec.k, spec.m);
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            rng.dirichlet_flat(t.row_mut(r));
        }
        t.normalize_rows();
        modes.push_back(std::move(t));
    }
    return modes;
}

LabeledStream generate_stream(const SyntheticSpec& spec, std::vector<StochasticTensor> modes) {
    spec.validate();
    if (modes.size() != static_cast<std::size_t>(spec.n_modes)) {
        throw ValidationError("expected " + std::to_string(spec.n_modes) + " mode tensors, got " +
                              std::to_string(modes.size()));
    }
    for (const auto& t : modes) {
        if (t.order() != spec.k || t.alphabet_size() != spec.m) {
            throw ValidationError("mode tensor shape does not match the spec");
        }
    }
    SplitMix64 rng(spec.seed ^ kStreamSeedSalt);

    std::vector<int> regime_modes;
    regime_modes.reserve(static_cast<std::size_t>(spec.n_regimes));
    for (int r = 0; r < spec.n_regimes; ++r) {
        int mode = static_cast<int>(rng.uniform_int(0, spec.n_modes - 1));
        while (!regime_modes.empty() && mode == regime_modes.back()) {
            mode = static_cast<int>(rng.uniform_int(0, spec.n_modes - 1));
        }
        regime_modes.push_back(mode);
    }

    LabeledStream out;
    std::vector<std::uint64_t> durations;
    durations.reserve(regime_modes.size());
    std::uint64_t total = 0;
    for (std::size_t r = 0; r < regime_modes.size(); ++r) {
        const auto d =
            static_cast<std::uint64_t>(rng.uniform_int(spec.duration_low, spec.duration_high));
        durations.push_back(d);
        total += d;
        if (r + 1 < regime_modes.size()) out.change_points.push_back(total);
    }

    out.symbols.reserve(total);
    out.mode_labels.reserve(total);
    for (std::size_t r = 0; r < regime_modes.size(); ++r) {
        for (std::uint64_t i = 0; i < durations[r]; ++i) out.mode_labels.push_back(regime_modes[r]);
    }

    std::vector<int> window;
    window.reserve(static_cast<std::size_t>(spec.k));
    for (std::uint64_t t = 0; t < total; ++t) {
        int s;
        if (window.size() < static_cast<std::size_t>(spec.k)) {
            s = static_cast<int>(rng.uniform_int(0, spec.m - 1));
        } else {
            const auto& tensor = modes[static_cast<std::size_t>(out.mode_labels[t])];
            s = sample_categorical(rng, tensor.row(tensor.row_index(window)));
        }
        out.symbols.push_back(s);
        if (spec.k > 0) {
            window.push_back(s);
            if (window.size() > static_cast<std::size_t>(spec.k)) window.erase(window.begin());
        }
    }
    out.true_tensors = std::move(modes);
    return out;
}

LabeledStream generate_stream(const SyntheticSpec& spec) {
    return generate_stream(spec, generate_modes(spec));
}

}  // namespace emc
