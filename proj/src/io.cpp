#include "emc/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "emc/error.hpp"

namespace emc {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail_line(const std::string& source, std::uint64_t line, const std::string& what) {
    throw ValidationError(source + ": line " + std::to_string(line) + ": " + what);
}

std::int64_t parse_int_field(const std::string& tok, const std::string& source, std::uint64_t line) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        fail_line(source, line, "malformed integer '" + tok + "'");
    }
    if (used != tok.size()) fail_line(source, line, "malformed integer '" + tok + "'");
    return v;
}

double parse_double_field(const std::string& tok, const std::string& source, std::uint64_t line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        fail_line(source, line, "malformed number '" + tok + "'");
    }
    if (used != tok.size()) fail_line(source, line, "malformed number '" + tok + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

}  // namespace

std::optional<int> parse_symbol_line(const std::string& line, int m, const std::string& source,
                                     std::uint64_t lineno) {
    const std::string t = trim(line);
    if (t.empty()) return std::nullopt;
    const auto fields = split_csv(t);
    std::int64_t s;
    if (fields.size() == 1) {
        s = parse_int_field(fields[0], source, lineno);
    } else if (fields.size() == 2) {
        parse_int_field(fields[0], source, lineno);  // index column, value unused
        s = parse_int_field(fields[1], source, lineno);
    } else {
        fail_line(source, lineno, "expected 'symbol' or 't,symbol', got '" + t + "'");
    }
    if (s < 0 || (m > 0 && s >= m)) {
        fail_line(source, lineno,
                  "symbol " + std::to_string(s) + " out of range [0," + std::to_string(m) + ")");
    }
    return static_cast<int>(s);
}

std::vector<int> read_symbols(std::istream& in, int m, const std::string& source) {
    std::vector<int> symbols;
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto s = parse_symbol_line(line, m, source, lineno)) symbols.push_back(*s);
    }
    return symbols;
}

std::vector<int> read_symbols_file(const std::string& path, int m) {
    auto in = open_input(path);
    return read_symbols(in, m, path);
}

std::vector<int> read_labels(std::istream& in, const std::string& source) {
    std::vector<int> labels;
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::int64_t v = parse_int_field(t, source, lineno);
        if (v < 0) fail_line(source, lineno, "mode label must be non-negative");
        labels.push_back(static_cast<int>(v));
    }
    return labels;
}

std::vector<int> read_labels_file(const std::string& path) {
    auto in = open_input(path);
    return read_labels(in, path);
}

std::vector<RecordRow> read_records(std::istream& in, const std::string& source) {
    std::vector<RecordRow> rows;
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto fields = split_csv(t);
        if (fields.size() != 6) {
            fail_line(source, lineno, "expected 6 columns t,symbol,phi,distance,mode,event");
        }
        RecordRow row;
        row.t = static_cast<std::uint64_t>(parse_int_field(fields[0], source, lineno));
        row.symbol = static_cast<int>(parse_int_field(fields[1], source, lineno));
        const std::int64_t phi = parse_int_field(fields[2], source, lineno);
        if (phi != 0 && phi != 1) fail_line(source, lineno, "phi must be 0 or 1");
        row.steady = phi == 1;
        row.distance = parse_double_field(fields[3], source, lineno);
        row.mode = fields[4].empty() ? -1 : static_cast<int>(parse_int_field(fields[4], source, lineno));
        row.event = fields[5];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RecordRow> read_records_file(const std::string& path) {
    auto in = open_input(path);
    return read_records(in, path);
}

void write_record(std::ostream& out, const PredictionRecord& record) {
    char distance[40];
    std::snprintf(distance, sizeof(distance), "%.17g", record.distance);
    out << record.t << ',' << record.symbol << ',' << (record.steady ? 1 : 0) << ',' << distance
        << ',';
    if (record.mode >= 0) out << record.mode;
    out << ',' << to_string(record.event) << '\n';
}

void write_ints(std::ostream& out, const std::vector<int>& values) {
    for (const int v : values) out << v << '\n';
    if (!out) throw IoError("failed writing values");
}

void write_ints_file(const std::string& path, const std::vector<int>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_ints(out, values);
}

void write_truth(std::ostream& out, const std::vector<StochasticTensor>& tensors) {
    if (tensors.empty()) throw ValidationError("no tensors to write");
    const int k = tensors.front().order();
    const int m = tensors.front().alphabet_size();
    out << "EMCTRUTH 1 " << k << ' ' << m << ' ' << tensors.size() << '\n';
    char buf[40];
    for (const auto& t : tensors) {
        if (t.order() != k || t.alphabet_size() != m) {
            throw ValidationError("truth tensors must share one shape");
        }
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            auto row = t.row(r);
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
                out << (i ? " " : "") << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw IoError("failed writing truth tensors");
}

void write_truth_file(const std::string& path, const std::vector<StochasticTensor>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_truth(out, tensors);
}

std::vector<StochasticTensor> read_truth(std::istream& in, const std::string& source) {
    std::string line;
    std::uint64_t lineno = 0;
    if (!std::getline(in, line)) throw ValidationError(source + ": empty truth file");
    ++lineno;
    std::istringstream header(line);
    std::string magic;
    int version = 0, k = -1, m = 0;
    std::size_t count = 0;
    if (!(header >> magic >> version >> k >> m >> count) || magic != "EMCTRUTH" || version != 1) {
        fail_line(source, lineno, "bad truth header");
    }
    std::vector<StochasticTensor> tensors;
    tensors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        StochasticTensor t(k, m);
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            if (!std::getline(in, line)) {
                fail_line(source, lineno, "truth file ends mid-tensor");
            }
            ++lineno;
            std::istringstream row_in(line);
            auto row = t.row_mut(r);
            for (int s = 0; s < m; ++s) {
                if (!(row_in >> row[static_cast<std::size_t>(s)])) {
                    fail_line(source, lineno, "truth row has too few entries");
                }
            }
        }
        t.normalize_rows();
        tensors.push_back(std::move(t));
    }
    return tensors;
}

std::vector<StochasticTensor> read_truth_file(const std::string& path) {
    auto in = open_input(path);
    return read_truth(in, path);
}

}  // namespace emc
