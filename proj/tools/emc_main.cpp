// Command-line front end: stream processing (run), synthetic data (synth),
// metric evaluation (eval), tracking comparison against the sliding-window
// baseline (track), and snapshot inspection (snapshot).
//
// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 integrity error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emc/emc.hpp"
#include "emc/error.hpp"
#include "emc/eval.hpp"
#include "emc/io.hpp"
#include "emc/snapshot.hpp"
#include "emc/synth.hpp"
#include "emc/tensor.hpp"
#include "emc/version.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// The manifest mirrors every input that determines the run, so any published
// number can be regenerated from the stderr log alone.
class Manifest {
public:
    explicit Manifest(const std::string& command) { add("command", command); }

    void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, fmt(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }

    void add_config(const emc::EmcConfig& cfg) {
        add("k", cfg.k);
        add("m", cfg.m);
        add("lambda_fast", cfg.lambda_fast);
        add("lambda_slow", cfg.lambda_slow);
        add("beta", cfg.beta);
        add("delta_fast", cfg.delta_fast);
        add("delta_slow", cfg.delta_slow);
        add("eta_fast", cfg.eta_fast);
        add("eta_slow", cfg.eta_slow);
        add("tau", cfg.tau);
    }

    void print() const {
        std::cerr << "manifest version=" << emc::kVersion;
        for (const auto& [k, v] : entries_) std::cerr << ' ' << k << '=' << v;
        std::cerr << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct ParamFlags {
    emc::EmcConfig cfg = emc::default_config(1, 4);
    std::string config_path;
    bool tau_given = false;
    bool lambda_slow_given = false;

    // tau defaults to the forgetting time of the slow coefficient unless
    // pinned explicitly.
    void finalize() {
        if (lambda_slow_given && !tau_given) cfg.tau = emc::recommended_tau(cfg.lambda_slow);
        cfg.validate();
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
    cmd->add_option("--config", p.config_path, "flat key=value parameter file (flags override it)");
    cmd->add_option("--k", p.cfg.k, "Markov order (condition length)");
    cmd->add_option("--m", p.cfg.m, "alphabet size");
    cmd->add_option("--lambda-fast,--lambda_fast", p.cfg.lambda_fast,
                    "learning coefficient during drift");
    cmd->add_option("--lambda-slow,--lambda_slow", p.cfg.lambda_slow,
                    "learning coefficient while steady")
        ->each([&p](const std::string&) { p.lambda_slow_given = true; });
    cmd->add_option("--beta", p.cfg.beta, "entropy regulation rate");
    cmd->add_option("--delta-fast,--delta_fast", p.cfg.delta_fast, "drift threshold during drift");
    cmd->add_option("--delta-slow,--delta_slow", p.cfg.delta_slow, "drift threshold while steady");
    cmd->add_option("--eta-fast,--eta_fast", p.cfg.eta_fast, "similarity threshold during drift");
    cmd->add_option("--eta-slow,--eta_slow", p.cfg.eta_slow, "similarity threshold while steady");
    cmd->add_option("--tau", p.cfg.tau, "observations between drift checks")
        ->each([&p](const std::string&) { p.tau_given = true; });
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

// Merges a flat key=value file into the parameters. Values given as flags on
// the command line keep priority over the file.
void apply_config_file(const CLI::App* cmd, ParamFlags& p) {
    if (p.config_path.empty()) return;
    std::ifstream in(p.config_path);
    if (!in) throw emc::IoError("cannot open " + p.config_path);

    auto flag_given = [cmd](const char* name) { return cmd->count(name) > 0; };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw emc::ValidationError(p.config_path + ": line " + std::to_string(line_no) +
                                       ": expected key=value");
        }
        std::string key = trim(text.substr(0, eq));
        for (auto& c : key) {
            if (c == '-') c = '_';
        }
        const std::string value = trim(text.substr(eq + 1));
        double number = 0.0;
        try {
            std::size_t pos = 0;
            number = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw emc::ValidationError(p.config_path + ": line " + std::to_string(line_no) +
                                       ": bad value for '" + key + "'");
        }

        if (key == "k") {
            if (!flag_given("--k")) p.cfg.k = static_cast<int>(number);
        } else if (key == "m") {
            if (!flag_given("--m")) p.cfg.m = static_cast<int>(number);
        } else if (key == "lambda_fast") {
            if (!flag_given("--lambda-fast")) p.cfg.lambda_fast = number;
        } else if (key == "lambda_slow") {
            if (!flag_given("--lambda-slow")) {
                p.cfg.lambda_slow = number;
                p.lambda_slow_given = true;
            }
        } else if (key == "beta") {
            if (!flag_given("--beta")) p.cfg.beta = number;
        } else if (key == "delta_fast") {
            if (!flag_given("--delta-fast")) p.cfg.delta_fast = number;
        } else if (key == "delta_slow") {
            if (!flag_given("--delta-slow")) p.cfg.delta_slow = number;
        } else if (key == "eta_fast") {
            if (!flag_given("--eta-fast")) p.cfg.eta_fast = number;
        } else if (key == "eta_slow") {
            if (!flag_given("--eta-slow")) p.cfg.eta_slow = number;
        } else if (key == "tau") {
            if (!flag_given("--tau")) {
                p.cfg.tau = static_cast<std::uint64_t>(number);
                p.tau_given = true;
            }
        } else {
            throw emc::ValidationError(p.config_path + ": unknown parameter '" + key + "'");
        }
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw emc::IoError("cannot open " + path + " for writing");
    return out;
}

std::vector<std::uint64_t> change_points_from_labels(const std::vector<int>& labels) {
    std::vector<std::uint64_t> cps;
    for (std::size_t t = 1; t < labels.size(); ++t) {
        if (labels[t] != labels[t - 1]) cps.push_back(static_cast<std::uint64_t>(t));
    }
    return cps;
}

int cmd_run(const ParamFlags& params, const std::string& input, const std::string& output,
            const std::string& load_state, const std::string& save_state, bool params_given) {
    std::optional<emc::Emc> engine;
    if (!load_state.empty()) {
        if (params_given) {
            throw emc::ValidationError(
                "--load-state restores the snapshot's parameters; drop the parameter flags");
        }
        engine.emplace(emc::load_snapshot(load_state));
    } else {
        engine.emplace(params.cfg);
    }

    Manifest manifest("run");
    manifest.add_config(engine->config());
    manifest.add("input", input.empty() ? "-" : input);
    manifest.add("output", output.empty() ? "-" : output);
    if (!load_state.empty()) manifest.add("load_state", load_state);
    if (!save_state.empty()) manifest.add("save_state", save_state);
    manifest.print();

    std::ifstream file_in;
    if (!input.empty()) {
        file_in.open(input);
        if (!file_in) throw emc::IoError("cannot open " + input + " for reading");
    }
    std::istream& in = input.empty() ? std::cin : file_in;
    const std::string source = input.empty() ? "<stdin>" : input;

    std::ofstream file_out;
    if (!output.empty()) file_out = open_output(output);
    std::ostream& out = output.empty() ? std::cout : file_out;

    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = emc::parse_symbol_line(line, engine->config().m, source, lineno);
        if (!s) continue;
        emc::write_record(out, engine->step(*s));
    }
    if (!out) throw emc::IoError("failed writing records");

    if (!save_state.empty()) emc::save_snapshot(*engine, save_state);
    return 0;
}

int cmd_synth(const emc::SyntheticSpec& spec, const std::string& output) {
    spec.validate();
    Manifest manifest("synth");
    manifest.add("modes", spec.n_modes);
    manifest.add("k", spec.k);
    manifest.add("m", spec.m);
    manifest.add("dur_low", static_cast<std::uint64_t>(spec.duration_low));
    manifest.add("dur_high", static_cast<std::uint64_t>(spec.duration_high));
    manifest.add("regimes", spec.n_regimes);
    manifest.add("seed", spec.seed);
    manifest.add("output", output);

    const emc::LabeledStream stream = emc::generate_stream(spec);
    emc::write_ints_file(output + ".stream.csv", stream.symbols);
    emc::write_ints_file(output + ".labels.csv", stream.mode_labels);
    emc::write_truth_file(output + ".truth.txt", stream.true_tensors);

    manifest.add("length", static_cast<std::uint64_t>(stream.symbols.size()));
    manifest.add("change_points", static_cast<std::uint64_t>(stream.change_points.size()));
    manifest.print();
    return 0;
}

int cmd_eval(const std::string& input, const std::string& labels_path, const std::string& output,
             std::uint64_t moe, const std::map<std::string, bool>& wanted) {
    Manifest manifest("eval");
    manifest.add("input", input);
    manifest.add("labels", labels_path);
    manifest.add("moe", moe);
    manifest.add("output", output.empty() ? "-" : output);
    manifest.print();

    const auto rows = emc::read_records_file(input);
    const auto labels = emc::read_labels_file(labels_path);
    if (rows.size() != labels.size()) {
        throw emc::ValidationError("predictions hold " + std::to_string(rows.size()) +
                                   " rows but labels hold " + std::to_string(labels.size()));
    }

    std::vector<int> predicted;
    std::vector<bool> steady;
    predicted.reserve(rows.size());
    steady.reserve(rows.size());
    for (const auto& row : rows) {
        predicted.push_back(row.mode);
        steady.push_back(row.steady);
    }

    std::ofstream file_out;
    if (!output.empty()) file_out = open_output(output);
    std::ostream& out = output.empty() ? std::cout : file_out;
    out << "metric,value\n";

    auto want = [&wanted](const std::string& name) {
        bool any = false;
        for (const auto& [key, on] : wanted) any = any || on;
        return !any || wanted.at(name);
    };

    if (want("ari")) out << "ari," << fmt(emc::adjusted_rand_index(labels, predicted)) << '\n';
    if (want("steady_ari")) {
        const auto v = emc::steady_only_ari(labels, predicted, steady);
        out << "steady_ari," << (v ? fmt(*v) : "absent") << '\n';
    }
    if (want("drift_ratio")) out << "drift_ratio," << fmt(emc::drift_ratio(steady)) << '\n';
    if (want("f1")) {
        const auto report = emc::change_point_f1(emc::prediction_changes(predicted),
                                                 change_points_from_labels(labels), moe);
        out << "f1," << fmt(report.f1) << '\n';
        out << "true_positives," << report.true_positives << '\n';
        out << "false_positives," << report.false_positives << '\n';
        out << "false_negatives," << report.false_negatives << '\n';
        out << "mean_lag," << fmt(report.mean_lag) << '\n';
    }
    if (want("recognition_lag")) {
        const auto v =
            emc::mean_recognition_lag(labels, predicted, change_points_from_labels(labels));
        out << "recognition_lag," << (v ? fmt(*v) : "absent") << '\n';
    }
    if (!out) throw emc::IoError("failed writing metrics");
    return 0;
}

int cmd_track(const ParamFlags& params, const std::string& input, const std::string& labels_path,
              const std::string& truth_path, std::uint64_t window, const std::string& output) {
    Manifest manifest("track");
    manifest.add_config(params.cfg);
    manifest.add("input", input);
    manifest.add("labels", labels_path);
    manifest.add("truth", truth_path);
    manifest.add("window", window);
    manifest.add("output", output.empty() ? "-" : output);
    manifest.print();

    const auto symbols = emc::read_symbols_file(input, params.cfg.m);
    const auto labels = emc::read_labels_file(labels_path);
    const auto truth = emc::read_truth_file(truth_path);
    if (symbols.size() != labels.size()) {
        throw emc::ValidationError("stream holds " + std::to_string(symbols.size()) +
                                   " symbols but labels hold " + std::to_string(labels.size()));
    }
    for (const int label : labels) {
        if (static_cast<std::size_t>(label) >= truth.size()) {
            throw emc::ValidationError("label " + std::to_string(label) +
                                       " exceeds the truth tensor count");
        }
    }

    emc::Emc engine(params.cfg);
    emc::SlidingWindowChain baseline(params.cfg.k, params.cfg.m, window);
    emc::TrackingAccumulator emc_err, sw_err;
    for (std::size_t t = 0; t < symbols.size(); ++t) {
        engine.step(symbols[t]);
        baseline.observe(symbols[t]);
        if (t + 1 > static_cast<std::size_t>(params.cfg.k)) {  // estimates exist once updates start
            const auto& active = truth[static_cast<std::size_t>(labels[t])];
            emc_err.add(engine.estimator().tensor(), active);
            sw_err.add(baseline.tensor(), active);
        }
    }

    std::ofstream file_out;
    if (!output.empty()) file_out = open_output(output);
    std::ostream& out = output.empty() ? std::cout : file_out;
    out << "method,mae,cae\n";
    out << "emc," << fmt(emc_err.mean()) << ',' << fmt(emc_err.cumulative()) << '\n';
    out << "mcsw_w" << window << ',' << fmt(sw_err.mean()) << ',' << fmt(sw_err.cumulative())
        << '\n';
    if (!out) throw emc::IoError("failed writing metrics");
    return 0;
}

int cmd_snapshot(const std::string& input) {
    Manifest manifest("snapshot");
    manifest.add("input", input);
    manifest.print();

    const emc::Emc engine = emc::load_snapshot(input);
    std::cout << "k," << engine.config().k << '\n';
    std::cout << "m," << engine.config().m << '\n';
    std::cout << "observations," << engine.estimator().observation_count() << '\n';
    std::cout << "updates," << engine.estimator().update_count() << '\n';
    std::cout << "phi," << (engine.drift().steady() ? 1 : 0) << '\n';
    std::cout << "modes," << engine.memory().size() << '\n';
    std::cout << "prediction,";
    if (engine.memory().prediction() >= 0) std::cout << engine.memory().prediction();
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolving Markov chains: online estimation, drift detection, mode discovery"};
    app.require_subcommand(1);
    app.set_version_flag("--version", emc::kVersion);

    ParamFlags run_params;
    std::string run_input, run_output, load_state, save_state;
    CLI::App* run = app.add_subcommand("run", "process a symbol stream into prediction records");
    add_param_flags(run, run_params);
    run->add_option("--input", run_input, "symbol CSV; stdin when omitted");
    run->add_option("--output", run_output, "record CSV; stdout when omitted");
    run->add_option("--load-state", load_state, "resume from a snapshot");
    run->add_option("--save-state", save_state, "write a snapshot after the stream ends");

    emc::SyntheticSpec spec;
    std::string synth_output;
    CLI::App* synth = app.add_subcommand("synth", "generate a labeled regime-switching stream");
    synth->add_option("--modes", spec.n_modes, "number of modes");
    synth->add_option("--k", spec.k, "Markov order");
    synth->add_option("--m", spec.m, "alphabet size");
    synth->add_option("--dur-low,--dur_low", spec.duration_low, "minimum regime duration");
    synth->add_option("--dur-high,--dur_high", spec.duration_high, "maximum regime duration");
    synth->add_option("--regimes", spec.n_regimes, "number of regimes");
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--output", synth_output, "base path for .stream.csv/.labels.csv/.truth.txt")
        ->required();

    std::string eval_input, eval_labels, eval_output;
    std::uint64_t moe = 250;
    std::map<std::string, bool> metric_flags = {{"ari", false},
                                                {"steady_ari", false},
                                                {"drift_ratio", false},
                                                {"f1", false},
                                                {"recognition_lag", false}};
    CLI::App* eval = app.add_subcommand("eval", "score prediction records against true labels");
    eval->add_option("--input", eval_input, "prediction record CSV")->required();
    eval->add_option("--labels", eval_labels, "true mode labels, one per line")->required();
    eval->add_option("--output", eval_output, "metrics CSV; stdout when omitted");
    eval->add_option("--moe", moe, "change-point matching margin in observations");
    eval->add_flag("--ari", metric_flags["ari"], "adjusted Rand index");
    eval->add_flag("--steady-ari", metric_flags["steady_ari"], "ARI over steady steps only");
    eval->add_flag("--drift-ratio", metric_flags["drift_ratio"], "fraction of drift steps");
    eval->add_flag("--f1", metric_flags["f1"], "change-point detection scores");
    eval->add_flag("--recognition-lag", metric_flags["recognition_lag"], "mean recognition lag");

    ParamFlags track_params;
    std::string track_input, track_labels, track_truth, track_output;
    std::uint64_t window = 500;
    CLI::App* track = app.add_subcommand("track", "tracking error of EMC vs the sliding-window chain");
    add_param_flags(track, track_params);
    track->add_option("--input", track_input, "symbol CSV")->required();
    track->add_option("--labels", track_labels, "true mode labels")->required();
    track->add_option("--truth", track_truth, "true tensors file")->required();
    track->add_option("--window", window, "sliding-window size in symbols");
    track->add_option("--output", track_output, "metrics CSV; stdout when omitted");

    std::string snap_input;
    CLI::App* snapshot = app.add_subcommand("snapshot", "verify a snapshot and print a summary");
    snapshot->add_option("--input", snap_input, "snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            bool params_given = !run_params.config_path.empty();
            for (const char* name : {"--k", "--m", "--lambda-fast", "--lambda-slow", "--beta",
                                     "--delta-fast", "--delta-slow", "--eta-fast", "--eta-slow",
                                     "--tau"}) {
                params_given = params_given || run->count(name) > 0;
            }
            apply_config_file(run, run_params);
            run_params.finalize();
            return cmd_run(run_params, run_input, run_output, load_state, save_state, params_given);
        }
        if (*synth) return cmd_synth(spec, synth_output);
        if (*eval) return cmd_eval(eval_input, eval_labels, eval_output, moe, metric_flags);
        if (*track) {
            apply_config_file(track, track_params);
            track_params.finalize();
            return cmd_track(track_params, track_input, track_labels, track_truth, window,
                             track_output);
        }
        if (*snapshot) return cmd_snapshot(snap_input);
    } catch (const emc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const emc::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const emc::IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
