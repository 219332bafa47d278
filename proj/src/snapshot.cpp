#include "emc/snapshot.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "emc/error.hpp"

namespace emc {
namespace {

constexpr int kSnapshotVersion = 1;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_tensor(std::string& out, const StochasticTensor& t) {
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        auto row = t.row(r);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ' ';
            out += fmt(row[i]);
        }
        out += '\n';
    }
}

// Tokenizing cursor over the file body. Every consumed line must match the
// expected shape; anything else means the file is damaged.
class Reader {
public:
    explicit Reader(std::string body) : body_(std::move(body)) {}

    bool at_checksum() const {
        return body_.compare(pos_, 9, "checksum ") == 0;
    }

    std::string line() {
        if (pos_ >= body_.size()) throw IntegrityError("snapshot truncated");
        const std::size_t nl = body_.find('\n', pos_);
        if (nl == std::string::npos) throw IntegrityError("snapshot truncated");
        std::string l = body_.substr(pos_, nl - pos_);
        pos_ = nl + 1;
        return l;
    }

    std::uint64_t consumed_hash() const { return fnv1a(body_.substr(0, pos_)); }

    bool exhausted() const { return pos_ >= body_.size(); }

private:
    std::string body_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> parts;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) parts.push_back(tok);
    return parts;
}

double parse_double(const std::string& tok) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw IntegrityError("snapshot holds a malformed number: " + tok);
    }
    if (used != tok.size()) throw IntegrityError("snapshot holds a malformed number: " + tok);
    return v;
}

std::int64_t parse_int(const std::string& tok) {
    std::size_t used = 0;
    std::int64_t v;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        throw IntegrityError("snapshot holds a malformed integer: " + tok);
    }
    if (used != tok.size()) throw IntegrityError("snapshot holds a malformed integer: " + tok);
    return v;
}

StochasticTensor read_tensor(Reader& reader, int k, int m) {
    StochasticTensor t(k, m);
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        const auto parts = split(reader.line());
        if (parts.size() != static_cast<std::size_t>(m)) {
            throw IntegrityError("snapshot tensor row has " + std::to_string(parts.size()) +
                                 " entries, expected " + std::to_string(m));
        }
        auto row = t.row_mut(r);
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            row[static_cast<std::size_t>(i)] = parse_double(parts[static_cast<std::size_t>(i)]);
            sum += row[static_cast<std::size_t>(i)];
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw IntegrityError("snapshot tensor row does not sum to 1");
        }
    }
    return t;
}

}  // namespace

void save_snapshot(const Emc& emc, std::ostream& out) {
    const EmcConfig& cfg = emc.config();
    std::string body;
    body += "EMCSNAP " + std::to_string(kSnapshotVersion) + ' ' + std::to_string(cfg.k) + ' ' +
            std::to_string(cfg.m) + '\n';
    body += "config " + fmt(cfg.lambda_fast) + ' ' + fmt(cfg.lambda_slow) + ' ' + fmt(cfg.beta) +
            ' ' + fmt(cfg.delta_fast) + ' ' + fmt(cfg.delta_slow) + ' ' + fmt(cfg.eta_fast) + ' ' +
            fmt(cfg.eta_slow) + ' ' + std::to_string(cfg.tau) + '\n';
    const Estimator& est = emc.estimator();
    body += "counters " + std::to_string(est.observation_count()) + ' ' +
            std::to_string(est.update_count()) + '\n';
    body += "window";
    for (const int s : est.window()) body += ' ' + std::to_string(s);
    body += '\n';
    body += "tensor\n";
    append_tensor(body, est.tensor());
    body += "modes " + std::to_string(emc.memory().size()) + '\n';
    for (const Mode& mode : emc.memory().modes()) {
        body += "mode " + std::to_string(mode.id) + ' ' + std::to_string(mode.update_count) + '\n';
        append_tensor(body, mode.mean);
    }
    const DriftState& drift = emc.drift();
    body += "drift " + std::string(drift.steady() ? "1" : "0") + ' ' +
            std::to_string(drift.updates_since_check()) + ' ' + fmt(drift.last_distance()) + '\n';
    body += "prev\n";
    append_tensor(body, drift.snapshot());
    body += "prediction " + std::to_string(emc.memory().prediction()) + '\n';

    char checksum[32];
    std::snprintf(checksum, sizeof(checksum), "%016" PRIx64, fnv1a(body));
    out << body << "checksum " << checksum << '\n';
    if (!out) throw IoError("failed writing snapshot");
}

void save_snapshot(const Emc& emc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    save_snapshot(emc, out);
}

Emc load_snapshot(std::istream& in) {
    std::ostringstream raw;
    raw << in.rdbuf();
    Reader reader(raw.str());

    auto parts = split(reader.line());
    if (parts.size() != 4 || parts[0] != "EMCSNAP") {
        throw IntegrityError("not a snapshot file");
    }
    if (parse_int(parts[1]) != kSnapshotVersion) {
        throw IntegrityError("unsupported snapshot version " + parts[1]);
    }
    EmcConfig cfg;
    cfg.k = static_cast<int>(parse_int(parts[2]));
    cfg.m = static_cast<int>(parse_int(parts[3]));

    parts = split(reader.line());
    if (parts.size() != 9 || parts[0] != "config") throw IntegrityError("snapshot config line damaged");
    cfg.lambda_fast = parse_double(parts[1]);
    cfg.lambda_slow = parse_double(parts[2]);
    cfg.beta = parse_double(parts[3]);
    cfg.delta_fast = parse_double(parts[4]);
    cfg.delta_slow = parse_double(parts[5]);
    cfg.eta_fast = parse_double(parts[6]);
    cfg.eta_slow = parse_double(parts[7]);
    cfg.tau = static_cast<std::uint64_t>(parse_int(parts[8]));
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        throw IntegrityError(std::string("snapshot config invalid: ") + e.what());
    }
    Emc emc(cfg);

    parts = split(reader.line());
    if (parts.size() != 3 || parts[0] != "counters") {
        throw IntegrityError("snapshot counters line damaged");
    }
    const auto observations = static_cast<std::uint64_t>(parse_int(parts[1]));
    const auto updates = static_cast<std::uint64_t>(parse_int(parts[2]));

    parts = split(reader.line());
    if (parts.empty() || parts[0] != "window") throw IntegrityError("snapshot window line damaged");
    std::vector<int> window;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        window.push_back(static_cast<int>(parse_int(parts[i])));
    }

    if (reader.line() != "tensor") throw IntegrityError("snapshot tensor block missing");
    const StochasticTensor tensor = read_tensor(reader, cfg.k, cfg.m);

    parts = split(reader.line());
    if (parts.size() != 2 || parts[0] != "modes") throw IntegrityError("snapshot modes line damaged");
    const std::int64_t n_modes = parse_int(parts[1]);
    for (std::int64_t i = 0; i < n_modes; ++i) {
        parts = split(reader.line());
        if (parts.size() != 3 || parts[0] != "mode" || parse_int(parts[1]) != i) {
            throw IntegrityError("snapshot mode block damaged");
        }
        const std::int64_t count = parse_int(parts[2]);
        if (count < 1) throw IntegrityError("snapshot mode count must be positive");
        emc.memory_mut().restore_mode(read_tensor(reader, cfg.k, cfg.m),
                                      static_cast<std::uint64_t>(count));
    }

    parts = split(reader.line());
    if (parts.size() != 4 || parts[0] != "drift") throw IntegrityError("snapshot drift line damaged");
    const std::int64_t phi = parse_int(parts[1]);
    if (phi != 0 && phi != 1) throw IntegrityError("snapshot drift indicator must be 0 or 1");
    const auto since_check = static_cast<std::uint64_t>(parse_int(parts[2]));
    const double last_distance = parse_double(parts[3]);

    if (reader.line() != "prev") throw IntegrityError("snapshot prev block missing");
    const StochasticTensor prev = read_tensor(reader, cfg.k, cfg.m);

    parts = split(reader.line());
    if (parts.size() != 2 || parts[0] != "prediction") {
        throw IntegrityError("snapshot prediction line damaged");
    }
    const int prediction = static_cast<int>(parse_int(parts[1]));

    const std::uint64_t expected = reader.consumed_hash();
    if (!reader.at_checksum()) throw IntegrityError("snapshot checksum line missing");
    parts = split(reader.line());
    if (parts.size() != 2) throw IntegrityError("snapshot checksum line damaged");
    char wanted[32];
    std::snprintf(wanted, sizeof(wanted), "%016" PRIx64, expected);
    if (parts[1] != wanted) throw IntegrityError("snapshot checksum mismatch");
    if (!reader.exhausted()) throw IntegrityError("snapshot has trailing data");

    try {
        auto dest = emc.estimator_mut().tensor_mut().values_mut();
        auto src = tensor.values();
        for (std::size_t i = 0; i < dest.size(); ++i) dest[i] = src[i];
        emc.estimator_mut().restore_counts(observations, updates, window);
        emc.drift_mut().restore(prev, phi == 1, since_check, last_distance);
        emc.memory_mut().restore_prediction(prediction);
    } catch (const ValidationError& e) {
        throw IntegrityError(std::string("snapshot state inconsistent: ") + e.what());
    }
    return emc;
}

Emc load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return load_snapshot(in);
}

}  // namespace emc
