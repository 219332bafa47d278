#include "emc/io.hpp"

#include <doctest.h>

#include <sstream>
#include <vector>

#include "emc/emc.hpp"
#include "emc/error.hpp"
#include "emc/synth.hpp"
#include "helpers.hpp"

using emc::IoError;
using emc::RecordRow;
using emc::ValidationError;
using testutil::contains;
using testutil::message_of;

TEST_CASE("io: symbol lines accept both plain and indexed forms") {
    CHECK(emc::parse_symbol_line("7", 10, "s", 1) == 7);
    CHECK(emc::parse_symbol_line("42,3", 10, "s", 1) == 3);
    CHECK(emc::parse_symbol_line("  2  ", 10, "s", 1) == 2);
    CHECK_FALSE(emc::parse_symbol_line("", 10, "s", 1).has_value());
    CHECK_FALSE(emc::parse_symbol_line("   ", 10, "s", 1).has_value());

    CHECK(contains(message_of<ValidationError>(
                       [] { emc::parse_symbol_line("x", 10, "input.csv", 3); }),
                   "input.csv: line 3"));
    CHECK(contains(message_of<ValidationError>(
                       [] { emc::parse_symbol_line("11", 10, "s", 1); }),
                   "out of range"));
    CHECK(contains(message_of<ValidationError>(
                       [] { emc::parse_symbol_line("-1", 10, "s", 1); }),
                   "out of range"));
    CHECK(contains(message_of<ValidationError>(
                       [] { emc::parse_symbol_line("1,2,3", 10, "s", 1); }),
                   "expected"));
}

TEST_CASE("io: symbol streams skip blank lines and flag the failing line") {
    std::istringstream good("0\n\n1,2\n3\n");
    CHECK(emc::read_symbols(good, 4, "s") == std::vector<int>{0, 2, 3});

    std::istringstream bad("0\n1\nx\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_symbols(bad, 4, "s"); }),
                   "line 3"));
}

TEST_CASE("io: labels must be non-negative integers") {
    std::istringstream good("0\n2\n1\n");
    CHECK(emc::read_labels(good, "l") == std::vector<int>{0, 2, 1});

    std::istringstream bad("0\n-1\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_labels(bad, "l"); }),
                   "non-negative"));
}

TEST_CASE("io: prediction records survive a write/read round trip") {
    emc::EmcConfig cfg = emc::default_config(1, 4);
    cfg.tau = 10;
    emc::Emc engine(cfg);
    emc::SyntheticSpec spec;
    spec.seed = 12;
    const auto stream = emc::generate_stream(spec);

    std::ostringstream out;
    std::vector<emc::PredictionRecord> written;
    for (std::size_t t = 0; t < 200; ++t) {
        written.push_back(engine.step(stream.symbols[t]));
        emc::write_record(out, written.back());
    }

    std::istringstream in(out.str());
    const auto rows = emc::read_records(in, "records");
    REQUIRE(rows.size() == written.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].t == written[i].t);
        CHECK(rows[i].symbol == written[i].symbol);
        CHECK(rows[i].steady == written[i].steady);
        CHECK(rows[i].distance == written[i].distance);  // 17 digits round-trip exactly
        CHECK(rows[i].mode == written[i].mode);
        CHECK(rows[i].event == emc::to_string(written[i].event));
    }
}

TEST_CASE("io: record parsing validates shape and fields") {
    std::istringstream missing("1,2,1,0.5,0\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_records(missing, "r"); }),
                   "6 columns"));

    std::istringstream bad_phi("1,2,7,0.5,0,none\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_records(bad_phi, "r"); }),
                   "phi"));

    // An empty mode column is the documented "no mode yet" marker.
    std::istringstream no_mode("0,1,1,0,,none\n");
    const auto rows = emc::read_records(no_mode, "r");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mode == -1);
}

TEST_CASE("io: truth tensors round-trip through the header format") {
    emc::SyntheticSpec spec;
    spec.seed = 8;
    const auto modes = emc::generate_modes(spec);

    std::ostringstream out;
    emc::write_truth(out, modes);
    CHECK(out.str().rfind("EMCTRUTH 1 1 4 5", 0) == 0);

    std::istringstream in(out.str());
    const auto back = emc::read_truth(in, "truth");
    REQUIRE(back.size() == modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) CHECK(back[i] == modes[i]);
}

TEST_CASE("io: truth parsing rejects damage") {
    std::istringstream empty("");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_truth(empty, "t"); }),
                   "empty"));

    std::istringstream magic("NOPE 1 1 4 1\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_truth(magic, "t"); }),
                   "header"));

    std::istringstream cut("EMCTRUTH 1 1 2 1\n0.5 0.5\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_truth(cut, "t"); }),
                   "mid-tensor"));

    std::istringstream narrow("EMCTRUTH 1 0 2 1\n0.5\n");
    CHECK(contains(message_of<ValidationError>([&] { emc::read_truth(narrow, "t"); }),
                   "too few"));
}

TEST_CASE("io: missing files raise io errors") {
    CHECK_THROWS_AS(emc::read_symbols_file("/nonexistent/stream.csv", 4), IoError);
    CHECK_THROWS_AS(emc::read_labels_file("/nonexistent/labels.csv"), IoError);
    CHECK_THROWS_AS(emc::read_truth_file("/nonexistent/truth.txt"), IoError);
    CHECK_THROWS_AS(emc::write_ints_file("/nonexistent/dir/out.csv", {1}), IoError);
}
