// Copyright 2026 The pingpong-qsdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pingpong: command-line front end over the C library.

#include "pingpong/pingpong.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

// sysexits-style codes.
constexpr int kExitOk = 0;
constexpr int kExitIntrusion = 2;
constexpr int kExitUsage = 64;
constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LibraryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(pp_status status) {
    if (status == PP_OK) return;
    const std::string msg = pp_last_error();
    if (status == PP_ERR_INVALID_ARGUMENT || status == PP_ERR_BUDGET) throw UsageError(msg);
    throw LibraryError(msg);
}

// RAII owners for library handles.
struct Buffer {
    pp_buffer *ptr = nullptr;
    ~Buffer() { pp_buffer_destroy(ptr); }
    std::string str() const { return {pp_buffer_data(ptr), pp_buffer_size(ptr)}; }
};
struct Config {
    pp_config *ptr = nullptr;
    ~Config() { pp_config_destroy(ptr); }
};
struct Result {
    pp_result *ptr = nullptr;
    ~Result() { pp_result_destroy(ptr); }
};

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

template <class T> T parse_number(const std::string &text) {
    T value{};
    const char *first = text.data();
    const char *last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw UsageError("not a number: '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

// Comma-separated values or a:b[:step] ranges (inclusive).
std::vector<double> parse_real_grid(const std::string &text) {
    std::vector<double> grid;
    for (const auto &item : split(text, ',')) {
        const auto r = split(item, ':');
        if (r.size() == 1) {
            grid.push_back(parse_number<double>(r[0]));
            continue;
        }
        if (r.size() != 3) throw UsageError("real range needs a:b:step, got '" + item + "'");
        const double a = parse_number<double>(r[0]);
        const double b = parse_number<double>(r[1]);
        const double step = parse_number<double>(r[2]);
        if (!(step > 0.0) || b < a) throw UsageError("bad range '" + item + "'");
        const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= count; ++i) grid.push_back(a + static_cast<double>(i) * step);
    }
    return grid;
}

std::vector<std::uint64_t> parse_count_grid(const std::string &text) {
    std::vector<std::uint64_t> grid;
    for (const auto &item : split(text, ',')) {
        const auto r = split(item, ':');
        if (r.size() == 1) {
            grid.push_back(parse_number<std::uint64_t>(r[0]));
            continue;
        }
        if (r.size() > 3) throw UsageError("bad range '" + item + "'");
        const auto a = parse_number<std::uint64_t>(r[0]);
        const auto b = parse_number<std::uint64_t>(r[1]);
        const std::uint64_t step = r.size() == 3 ? parse_number<std::uint64_t>(r[2]) : 1;
        if (step == 0 || b < a) throw UsageError("bad range '" + item + "'");
        for (std::uint64_t v = a; v <= b; v += step) grid.push_back(v);
    }
    return grid;
}

std::vector<std::uint8_t> message_bits(const std::string &message) {
    std::vector<std::uint8_t> bits;
    for (unsigned char byte : message)
        for (int k = 7; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((byte >> k) & 1U));
    return bits;
}

std::string bits_to_bytes(const std::string &bits) {
    std::string out;
    for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
        unsigned char byte = 0;
        for (std::size_t k = 0; k < 8; ++k) byte = static_cast<unsigned char>((byte << 1) | (bits[i + k] & 1));
        out.push_back(static_cast<char>(byte));
    }
    return out;
}

// Reads key = value lines ('#' comments) into flag tokens. Boolean values
// become bare flags so the same file works for every option kind.
std::vector<std::string> config_tokens(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t\r");
        const auto e = t.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        for (auto &c : key)
            if (c == '_') c = '-';
        if (key.empty() || key == "config") throw UsageError(path + ":" + std::to_string(line_no) + ": bad key");
        if (value == "true") {
            tokens.push_back("--" + key);
        } else if (value != "false") {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

// Splices config-file tokens in right after the subcommand name so that
// explicit flags, which come later, take precedence.
std::vector<std::string> expand_config(int argc, char **argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].starts_with("--config=")) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (!path) return args;
    const auto tokens = config_tokens(*path);
    std::size_t at = 1;
    while (at < args.size() && args[at].starts_with("-")) ++at;
    if (at < args.size()) ++at;
    args.insert(args.begin() + static_cast<long>(at), tokens.begin(), tokens.end());
    return args;
}

struct RunOptions {
    std::string strategy = "none";
    std::uint64_t rounds = 1000;
    std::uint64_t trials = 1;
    std::uint64_t seed = pp_default_seed();
    std::uint64_t budget = 100000000;
    unsigned threads = 1;
    std::string message;
    bool stop_on_intrusion = false;
    std::string output;
    std::string transcript;
    std::string format = "json";
};

int cmd_run(const RunOptions &o, bool message_given) {
    Config cfg;
    check(pp_config_create(&cfg.ptr));
    check(pp_config_set_strategy(cfg.ptr, o.strategy.c_str()));
    check(pp_config_set_trials(cfg.ptr, o.trials));
    check(pp_config_set_seed(cfg.ptr, o.seed));
    check(pp_config_set_budget(cfg.ptr, o.budget));
    check(pp_config_set_threads(cfg.ptr, o.threads));
    check(pp_config_set_stop_on_intrusion(cfg.ptr, o.stop_on_intrusion ? 1 : 0));
    if (message_given) {
        const auto bits = message_bits(o.message);
        if (bits.empty()) throw UsageError("message is empty");
        check(pp_config_set_bits(cfg.ptr, bits.data(), bits.size()));
        check(pp_config_set_rounds(cfg.ptr, bits.size()));
    } else {
        check(pp_config_set_rounds(cfg.ptr, o.rounds));
    }
    const bool want_transcript = message_given || !o.transcript.empty() || o.format == "jsonl";
    check(pp_config_set_record_transcript(cfg.ptr, want_transcript ? 1 : 0));

    Result res;
    check(pp_run(cfg.ptr, &res.ptr));

    Buffer stats;
    check(pp_result_stats_json(res.ptr, &stats.ptr));
    if (want_transcript) {
        Buffer lines;
        check(pp_result_transcript_jsonl(res.ptr, &lines.ptr));
        if (!o.transcript.empty()) write_output(o.transcript, lines.str());
        if (o.format == "jsonl") write_output(o.output, lines.str());
    }
    if (o.format == "json") write_output(o.output, stats.str());

    const auto intrusions = pp_result_intrusions(res.ptr);
    std::cerr << "rounds=" << pp_result_rounds(res.ptr) << " intrusions=" << intrusions
              << " p_hat=" << fixed(pp_result_detection_estimate(res.ptr), 6)
              << " stderr=" << fixed(pp_result_detection_stderr(res.ptr), 6) << "\n";
    if (message_given) {
        Buffer decoded;
        int complete = 0;
        check(pp_result_decoded_bits(res.ptr, &decoded.ptr, &complete));
        const auto bits = decoded.str();
        const auto text = bits_to_bytes(bits);
        if (complete)
            std::cerr << "decoded \"" << text << "\"\n";
        else
            std::cerr << "decoded partial message (" << bits.size() << " of " << 8 * o.message.size()
                      << " bits) \"" << text << "\"\n";
    }
    return (o.stop_on_intrusion && intrusions > 0) ? kExitIntrusion : kExitOk;
}

int cmd_analytic(std::uint64_t n, std::optional<double> p, std::optional<double> d) {
    double p_detect = 0.0;
    if (p) {
        p_detect = *p;
    } else {
        char buf[32];
        const auto end = std::to_chars(buf, buf + sizeof buf, *d).ptr;
        const std::string spec = "ancilla:d=" + std::string(buf, end);
        check(pp_detection_probability(spec.c_str(), &p_detect));
    }
    double log10_survival = 0.0;
    check(pp_survival_log10(n, p_detect, &log10_survival));
    Buffer rendered;
    check(pp_format_log10(log10_survival, 3, &rendered.ptr));
    std::string out;
    out += "n = " + std::to_string(n) + "\n";
    out += "p_detect = " + fixed(p_detect, 12) + "\n";
    out += "log10_survival = " + (std::isinf(log10_survival) ? std::string("-inf") : fixed(log10_survival, 10)) + "\n";
    out += "survival = " + rendered.str() + "\n";
    std::cout << out;
    return kExitOk;
}

int cmd_sweep(const std::string &d_text, const std::string &n_text, const std::string &format,
              const std::string &output) {
    const auto d_grid = parse_real_grid(d_text);
    const auto n_grid = parse_count_grid(n_text);
    Buffer table;
    check(pp_sweep(d_grid.data(), d_grid.size(), n_grid.data(), n_grid.size(), format == "json" ? 1 : 0,
                   &table.ptr));
    write_output(output, table.str());
    return kExitOk;
}

int cmd_verify() {
    Buffer report;
    int ok = 0;
    check(pp_verify(&report.ptr, &ok));
    std::cout << report.str();
    return ok ? kExitOk : kExitSoftware;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Ping-pong quantum direct communication simulator", "pingpong"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    app.add_option("--config", config_path,
                   "key = value file using the flag names of the chosen subcommand; flags override it");
    app.footer("Numeric output formats:\n"
               "  CSV columns d,n,p_detect,log10_survival; d shortest round-trip, p_detect 12 fixed\n"
               "  decimals, log10_survival 10 fixed decimals or -inf.\n"
               "  analytic prints p_detect with 12 and log10_survival with 10 fixed decimals; survival\n"
               "  is rendered in scientific form with 3 significant figures (e.g. 9.33e-302).\n"
               "  JSON numbers use the shortest round-trip form. Output never depends on the locale.\n"
               "Exit codes: 0 ok, 2 intrusion in stop mode, 64 usage, 70 internal, 74 I/O.");

    RunOptions ro;
    auto *run = app.add_subcommand("run", "Run a seeded Monte Carlo experiment");
    run->add_option("--strategy", ro.strategy,
                    "none | ancilla:d=X[,chi=orthonormal|chi=overlap:S] | intercept_resend[:basis=computational|diagonal]")
        ->capture_default_str();
    run->add_option("--rounds", ro.rounds, "Rounds per trial")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--trials", ro.trials, "Independent trials")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--seed", ro.seed, "Master seed")->capture_default_str();
    run->add_option("--budget", ro.budget, "Maximum rounds x trials")->capture_default_str();
    run->add_option("--threads", ro.threads, "Worker threads")->capture_default_str();
    auto *msg_opt = run->add_option("--message", ro.message, "UTF-8 text sent as bits, most significant first");
    run->add_flag("--stop-on-intrusion", ro.stop_on_intrusion, "Abort a trial at the first intrusion");
    run->add_option("--output,-o", ro.output, "Output path (default stdout)");
    run->add_option("--transcript", ro.transcript, "Also write the per-round JSONL transcript here");
    run->add_option("--format", ro.format, "json (stats) or jsonl (transcript)")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "jsonl"}));

    std::uint64_t an_n = 0;
    std::optional<double> an_p;
    std::optional<double> an_d;
    auto *analytic = app.add_subcommand("analytic", "Exact survival probability (1-p)^n");
    analytic->add_option("--n", an_n, "Number of rounds")->required();
    auto *p_opt = analytic->add_option("--p", an_p, "Per-round detection probability")->check(CLI::Range(0.0, 1.0));
    auto *d_opt = analytic->add_option("--d", an_d, "Ancilla detection parameter")->check(CLI::Range(0.0, 1.0));
    p_opt->excludes(d_opt);
    analytic->callback([&] {
        if (!an_p && !an_d) throw CLI::ValidationError("analytic", "one of --p or --d is required");
    });

    std::string sw_d;
    std::string sw_n;
    std::string sw_format = "csv";
    std::string sw_output;
    auto *sweep = app.add_subcommand("sweep", "Tabulate detection and survival over d and n grids");
    sweep->add_option("--d", sw_d, "d values: comma list or a:b:step ranges")->required();
    sweep->add_option("--n", sw_n, "n values: comma list or a:b[:step] ranges")->required();
    sweep->add_option("--format", sw_format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--output,-o", sw_output, "Output path (default stdout)");

    auto *verify = app.add_subcommand("verify", "Run the embedded invariant suite");

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        args.pop_back();
        app.parse(args);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) return cmd_run(ro, msg_opt->count() > 0 || !ro.message.empty());
        if (*analytic) return cmd_analytic(an_n, an_p, an_d);
        if (*sweep) return cmd_sweep(sw_d, sw_n, sw_format, sw_output);
        if (*verify) return cmd_verify();
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSoftware;
    }
    return kExitUsage;
}
