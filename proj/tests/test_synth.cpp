#include "emc/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "emc/error.hpp"
#include "helpers.hpp"

using emc::LabeledStream;
using emc::StochasticTensor;
using emc::SyntheticSpec;
using emc::ValidationError;
using testutil::contains;
using testutil::message_of;

TEST_CASE("synth: spec validation lists every problem") {
    SyntheticSpec spec;
    spec.n_modes = 1;
    spec.n_regimes = 1;
    spec.duration_low = 100;
    spec.duration_high = 50;
    const auto msg = message_of<ValidationError>([&] { spec.validate(); });
    CHECK(contains(msg, "2 modes"));
    CHECK(contains(msg, "2 regimes"));
    CHECK(contains(msg, "below duration_low"));

    SyntheticSpec ok;
    ok.validate();  // the defaults describe a valid stream
}

TEST_CASE("synth: mode tensors are flat-Dirichlet rows") {
    SyntheticSpec spec;
    const auto modes = emc::generate_modes(spec);
    REQUIRE(modes.size() == 5);

    for (const auto& t : modes) {
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            double sum = 0.0;
            for (double p : t.row(r)) {
                CHECK(p > 0.0);
                sum += p;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }

    CHECK(emc::generate_modes(spec) == modes);  // deterministic in the seed
    spec.seed = 1;
    CHECK_FALSE(emc::generate_modes(spec) == modes);
}

TEST_CASE("synth: Dirichlet rows average to the uniform distribution") {
    // 25000 modes of 4 rows give 1e5 draws; the flat-Dirichlet mean is 1/m.
    SyntheticSpec spec;
    spec.n_modes = 25000;
    spec.seed = 9;
    const auto modes = emc::generate_modes(spec);
    std::vector<double> mean(static_cast<std::size_t>(spec.m), 0.0);
    std::uint64_t rows = 0;
    for (const auto& t : modes) {
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            const auto row = t.row(r);
            for (std::size_t s = 0; s < row.size(); ++s) mean[s] += row[s];
            ++rows;
        }
    }
    for (double& v : mean) v /= static_cast<double>(rows);
    for (double v : mean) CHECK(std::abs(v - 0.25) <= 0.01);
}

TEST_CASE("synth: the default spec reproduces the reference stream shape") {
    SyntheticSpec spec;  // 5 modes, k=1, m=4, U(1500,2000), 10 regimes
    const LabeledStream stream = emc::generate_stream(spec);

    CHECK(stream.symbols.size() == stream.mode_labels.size());
    CHECK(stream.symbols.size() >= 15000);
    CHECK(stream.symbols.size() <= 20000);
    REQUIRE(stream.change_points.size() == 9);
    REQUIRE(stream.true_tensors.size() == 5);

    for (const int s : stream.symbols) {
        CHECK(s >= 0);
        CHECK(s < spec.m);
    }

    // Change points mark the regime starts; labels are constant in between
    // and always differ across a boundary.
    std::uint64_t prev_cp = 0;
    for (const auto cp : stream.change_points) {
        CHECK(cp > prev_cp);
        const auto gap = cp - prev_cp;
        CHECK(gap >= 1500);
        CHECK(gap <= 2000);
        CHECK(stream.mode_labels[cp] != stream.mode_labels[cp - 1]);
        for (std::uint64_t t = prev_cp + 1; t < cp; ++t) {
            CHECK(stream.mode_labels[t] == stream.mode_labels[prev_cp]);
        }
        prev_cp = cp;
    }
    const auto tail = stream.symbols.size() - prev_cp;
    CHECK(tail >= 1500);
    CHECK(tail <= 2000);

    for (const int label : stream.mode_labels) {
        CHECK(label >= 0);
        CHECK(label < spec.n_modes);
    }
}

TEST_CASE("synth: streams are deterministic and decoupled from the mode draw") {
    SyntheticSpec spec;
    spec.seed = 4;
    const LabeledStream a = emc::generate_stream(spec);
    const LabeledStream b = emc::generate_stream(spec);
    CHECK(a.symbols == b.symbols);
    CHECK(a.mode_labels == b.mode_labels);
    CHECK(a.change_points == b.change_points);

    // Supplying the tensors explicitly reproduces the same stream.
    const LabeledStream c = emc::generate_stream(spec, emc::generate_modes(spec));
    CHECK(a.symbols == c.symbols);

    spec.seed = 5;
    CHECK_FALSE(emc::generate_stream(spec).symbols == a.symbols);
}

TEST_CASE("synth: empirical regime statistics match the active mode") {
    SyntheticSpec spec;
    spec.seed = 3;
    const LabeledStream stream = emc::generate_stream(spec);

    // Longest regime slice.
    std::vector<std::uint64_t> starts = {0};
    starts.insert(starts.end(), stream.change_points.begin(), stream.change_points.end());
    std::uint64_t begin = 0, end = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const std::uint64_t stop =
            i + 1 < starts.size() ? starts[i + 1] : stream.symbols.size();
        if (stop - starts[i] > end - begin) {
            begin = starts[i];
            end = stop;
        }
    }
    const auto& truth = stream.true_tensors[static_cast<std::size_t>(
        stream.mode_labels[begin])];

    // Count transitions whose condition lies inside the slice.
    std::vector<std::uint64_t> counts(truth.values().size(), 0);
    for (std::uint64_t t = begin + static_cast<std::uint64_t>(spec.k); t < end; ++t) {
        std::vector<int> condition(stream.symbols.begin() + static_cast<long>(t) - spec.k,
                                   stream.symbols.begin() + static_cast<long>(t));
        const std::size_t r = truth.row_index(condition);
        counts[r * static_cast<std::size_t>(spec.m) +
               static_cast<std::size_t>(stream.symbols[t])] += 1;
    }

    double abs_err = 0.0;
    std::uint64_t entries = 0;
    for (std::size_t r = 0; r < truth.row_count(); ++r) {
        std::uint64_t row_total = 0;
        for (int s = 0; s < spec.m; ++s) {
            row_total += counts[r * static_cast<std::size_t>(spec.m) +
                                static_cast<std::size_t>(s)];
        }
        if (row_total < 50) continue;
        for (int s = 0; s < spec.m; ++s) {
            const double freq =
                static_cast<double>(counts[r * static_cast<std::size_t>(spec.m) +
                                           static_cast<std::size_t>(s)]) /
                static_cast<double>(row_total);
            abs_err += std::abs(freq - truth.row(r)[static_cast<std::size_t>(s)]);
            ++entries;
        }
    }
    REQUIRE(entries > 0);
    CHECK(abs_err / static_cast<double>(entries) < 0.05);
}

TEST_CASE("synth: supplied tensors must match the spec") {
    SyntheticSpec spec;
    auto modes = emc::generate_modes(spec);
    modes.pop_back();
    CHECK(contains(
        message_of<ValidationError>([&] { emc::generate_stream(spec, modes); }),
        "mode tensors"));

    std::vector<StochasticTensor> wrong(5, StochasticTensor(2, 4));
    CHECK(contains(
        message_of<ValidationError>([&] { emc::generate_stream(spec, wrong); }),
        "shape"));
}
