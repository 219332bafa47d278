#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "emc/emc.hpp"
#include "emc/tensor.hpp"

namespace emc {

// One parsed line of a prediction CSV (`t,symbol,phi,distance,mode,event`).
struct RecordRow {
    std::uint64_t t;
    int symbol;
    bool steady;
    double distance;
    int mode;  // -1 when the column is empty
    std::string event;
};

// Symbol streams: one integer per line, or `t,symbol`. Blank lines are
// skipped. Parse failures name the 1-based line number; symbols are checked
// against the alphabet when m > 0.
std::vector<int> read_symbols(std::istream& in, int m, const std::string& source);
std::vector<int> read_symbols_file(const std::string& path, int m);

// Single-line form of the above for streaming consumers; nullopt on a blank
// line.
std::optional<int> parse_symbol_line(const std::string& line, int m, const std::string& source,
                                     std::uint64_t lineno);

// Mode labels: one non-negative integer per line.
std::vector<int> read_labels(std::istream& in, const std::string& source);
std::vector<int> read_labels_file(const std::string& path);

std::vector<RecordRow> read_records(std::istream& in, const std::string& source);
std::vector<RecordRow> read_records_file(const std::string& path);

void write_record(std::ostream& out, const PredictionRecord& record);

void write_ints(std::ostream& out, const std::vector<int>& values);
void write_ints_file(const std::string& path, const std::vector<int>& values);

// Ground-truth tensor sets, header `EMCTRUTH 1 <k> <m> <count>` followed by
// each tensor's rows with 17 significant digits.
void write_truth(std::ostream& out, const std::vector<StochasticTensor>& tensors);
void write_truth_file(const std::string& path, const std::vector<StochasticTensor>& tensors);
std::vector<StochasticTensor> read_truth(std::istream& in, const std::string& source);
std::vector<StochasticTensor> read_truth_file(const std::string& path);

}  // namespace emc
