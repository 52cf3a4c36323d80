// Experiment CLI: seeded trial batteries, scaling fits, and bound evaluation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qclaw/bounds.hpp"
#include "qclaw/claw_algorithms.hpp"
#include "qclaw/harness.hpp"

namespace {

struct RunArgs {
    std::string algorithm = "mclaw";
    unsigned ell = 2;
    unsigned log_n_min = 12;
    unsigned log_n_max = 22;
    unsigned log_n_step = 2;
    double c_n = 1.0;
    unsigned k = 4;
    unsigned trials = 200;
    std::string backend = "analytic";
    std::uint64_t seed = 1;
    std::string out = "results";
    std::string format = "csv";
    unsigned threads = 0;
    std::string config_path;
};

// Config file values fill in whatever was not given on the command line.
void apply_config_file(const CLI::App& cmd, RunArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config file " + args.config_path);
    const auto j = nlohmann::json::parse(in);
    const auto load = [&](const char* flag, const char* key, auto& slot) {
        if (cmd.count(flag) == 0 && j.contains(key)) {
            j.at(key).get_to(slot);
        }
    };
    load("--algorithm", "algorithm", args.algorithm);
    load("--ell", "ell", args.ell);
    load("--log-n-min", "log_n_min", args.log_n_min);
    load("--log-n-max", "log_n_max", args.log_n_max);
    load("--log-n-step", "log_n_step", args.log_n_step);
    load("--c-n", "c_n", args.c_n);
    load("--k", "k", args.k);
    load("--trials", "trials", args.trials);
    load("--backend", "backend", args.backend);
    load("--seed", "seed", args.seed);
    load("--out", "out", args.out);
    load("--format", "format", args.format);
    load("--threads", "threads", args.threads);
}

int do_run(const CLI::App& cmd, RunArgs& args) {
    if (!args.config_path.empty()) apply_config_file(cmd, args);
    if (args.log_n_step == 0) throw std::invalid_argument("--log-n-step must be positive");

    qclaw::ExperimentConfig cfg;
    cfg.algorithm = qclaw::parse_algorithm(args.algorithm);
    cfg.ell = args.ell;
    cfg.c_n = args.c_n;
    cfg.k = args.k;
    cfg.trials = args.trials;
    cfg.backend = qclaw::parse_backend(args.backend);
    cfg.base_seed = args.seed;
    cfg.threads = args.threads;
    for (unsigned lg = args.log_n_min; lg <= args.log_n_max; lg += args.log_n_step) {
        cfg.n_values.push_back(std::uint64_t{1} << lg);
    }

    const auto records = qclaw::run_trials(cfg);

    qclaw::ScalingFit fit;
    bool have_fit = false;
    try {
        fit = qclaw::fit_scaling_exponent(records);
        have_fit = true;
    } catch (const std::invalid_argument&) {
        // fewer than 3 sizes or too few clean trials; report without a fit
    }

    const auto written =
        qclaw::emit_report(cfg, records, have_fit ? &fit : nullptr, args.out, args.format);

    const auto exponent =
        qclaw::theoretical_exponent(cfg.ell, qclaw::exponent_kind(cfg.algorithm));
    std::cout << "algorithm " << args.algorithm << " ell " << cfg.ell << ", " << records.size()
              << " trials over " << cfg.n_values.size() << " sizes\n";
    for (std::uint64_t n : cfg.n_values) {
        const auto median = qclaw::median_queries(records, n);
        std::uint64_t aborted = 0;
        for (const auto& r : records) {
            if (r.n == n && r.aborted) ++aborted;
        }
        std::cout << "  N=2^" << std::log2(static_cast<double>(n)) << " median=";
        if (median) {
            std::cout << *median;
        } else {
            std::cout << "n/a";
        }
        std::cout << " aborted=" << aborted << "/" << cfg.trials << "\n";
    }
    if (have_fit) {
        std::cout << "fitted slope " << fit.slope << " (theoretical " << exponent.num << "/"
                  << exponent.den << " = " << exponent.value() << ")\n";
    }
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return 0;
}

int do_fit(const std::string& in_path, const std::string& out_path, double expect_slope,
           double tolerance, bool have_expectation) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open " + in_path);
    const auto records = qclaw::read_csv(in);
    const auto fit = qclaw::fit_scaling_exponent(records);
    const std::string text = qclaw::fit_to_json(fit);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    if (have_expectation) {
        const double delta = std::abs(fit.slope - expect_slope);
        std::cout << "slope " << fit.slope << " vs expected " << expect_slope << " +- "
                  << tolerance << ": " << (delta <= tolerance ? "ok" : "FAIL") << "\n";
        if (delta > tolerance) return 1;
    }
    return 0;
}

void emit_value(bool as_json, const char* name, double value) {
    if (as_json) {
        std::cout << nlohmann::json{{"evaluator", name}, {"value", value}}.dump() << "\n";
    } else {
        std::cout << value << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"query-model simulators for multicollision and multiclaw search"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "run a trial battery and emit a report");
    run->add_option("--algorithm", run_args.algorithm,
                    "mclaw | bht | multigrover | recmcoll | mcollision");
    run->add_option("--ell", run_args.ell, "claw/collision arity");
    run->add_option("--log-n-min", run_args.log_n_min, "smallest N as log2");
    run->add_option("--log-n-max", run_args.log_n_max, "largest N as log2");
    run->add_option("--log-n-step", run_args.log_n_step, "log2 step between sizes");
    run->add_option("--c-n", run_args.c_n, "domain shrinkage parameter c_N >= 1");
    run->add_option("--k", run_args.k, "cap multiplier k >= 2");
    run->add_option("--trials", run_args.trials, "trials per size");
    run->add_option("--backend", run_args.backend, "statevector | analytic");
    run->add_option("--seed", run_args.seed, "base seed");
    run->add_option("--out", run_args.out, "output path prefix");
    run->add_option("--format", run_args.format, "csv | json (records file)");
    run->add_option("--threads", run_args.threads, "worker threads (0 = hardware)");
    run->add_option("--config", run_args.config_path, "JSON config file; flags override it");

    std::string fit_in, fit_out;
    double expect_slope = 0.0, tolerance = 0.05;
    CLI::App* fit = app.add_subcommand("fit", "fit a scaling exponent from a records CSV");
    fit->add_option("--in", fit_in, "records CSV")->required();
    fit->add_option("--out", fit_out, "fit JSON output path (default stdout)");
    CLI::Option* expect_opt =
        fit->add_option("--expect-slope", expect_slope, "fail unless slope is within tolerance");
    fit->add_option("--tolerance", tolerance, "allowed |slope - expected| (default 0.05)");

    CLI::App* bounds = app.add_subcommand("bounds", "evaluate a closed-form bound");
    bounds->require_subcommand(1);
    bool as_json = false;
    bounds->add_flag("--json", as_json, "emit JSON instead of a bare value");

    std::uint64_t a1 = 0, a2 = 0, a3 = 0;
    unsigned u1 = 2, u2 = 2;
    double d1 = 0.0, d2 = 1.0;
    std::string name;

    CLI::App* b_bbht = bounds->add_subcommand("bbht", "expected-query bound: M t");
    b_bbht->add_option("M", a1)->required();
    b_bbht->add_option("t", a2)->required();

    CLI::App* b_mtqs = bounds->add_subcommand("mtqs", "multi-target bound: X preimages");
    b_mtqs->add_option("X", a1)->required();
    b_mtqs->add_option("preimages", a2)->required();

    CLI::App* b_eps = bounds->add_subcommand("epsilon", "failure term: ell N c_N");
    b_eps->add_option("ell", u1)->required();
    b_eps->add_option("N", a1)->required();
    b_eps->add_option("c_N", d2, "defaults to 1");

    CLI::App* b_floor = bounds->add_subcommand("floor", "success floor: ell N c_N k");
    b_floor->add_option("ell", u1)->required();
    b_floor->add_option("N", a1)->required();
    b_floor->add_option("c_N", d2)->required();
    b_floor->add_option("k", u2)->required();

    CLI::App* b_img = bounds->add_subcommand("image-size", "image lower bound: X Y");
    b_img->add_option("X", a1)->required();
    b_img->add_option("Y", a2)->required();

    CLI::App* b_mcd = bounds->add_subcommand("mcdiarmid", "deviation bound: M lambda");
    b_mcd->add_option("M", a1)->required();
    b_mcd->add_option("lambda", d1)->required();

    CLI::App* b_hyp = bounds->add_subcommand("hypergeometric", "tail bound: n1 n m lambda");
    b_hyp->add_option("n1", a1)->required();
    b_hyp->add_option("n", a2)->required();
    b_hyp->add_option("m", a3)->required();
    b_hyp->add_option("lambda", d1)->required();

    CLI::App* b_expo = bounds->add_subcommand("exponent", "query exponent: ell algorithm");
    b_expo->add_option("ell", u1)->required();
    b_expo->add_option("algorithm", name)->required();

    CLI::App* b_sched = bounds->add_subcommand("schedule", "list sizes N_0..N_ell: ell N c_N");
    b_sched->add_option("ell", u1)->required();
    b_sched->add_option("N", a1)->required();
    b_sched->add_option("c_N", d2, "defaults to 1");

    CLI::App* b_qlim = bounds->add_subcommand("qlimit", "query cap: k ell N c_N");
    b_qlim->add_option("k", u2)->required();
    b_qlim->add_option("ell", u1)->required();
    b_qlim->add_option("N", a1)->required();
    b_qlim->add_option("c_N", d2, "defaults to 1");

    CLI::App* b_qlog = bounds->add_subcommand("qlimit-log2", "log2 query cap: k ell log2N c_N");
    b_qlog->add_option("k", u2)->required();
    b_qlog->add_option("ell", u1)->required();
    b_qlog->add_option("log2N", d1)->required();
    b_qlog->add_option("c_N", d2, "defaults to 1");

    CLI::App* b_res = bounds->add_subcommand("resources", "iteration cost: m_bits n_bits list_len");
    b_res->add_option("m_bits", u1)->required();
    b_res->add_option("n_bits", u2)->required();
    b_res->add_option("list_len", a1)->required();

    CLI::App* b_peak = bounds->add_subcommand("peak-qubits", "staged-claw peak: ell N c_N");
    b_peak->add_option("ell", u1)->required();
    b_peak->add_option("N", a1)->required();
    b_peak->add_option("c_N", d2, "defaults to 1");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(*run, run_args);
        if (fit->parsed()) {
            return do_fit(fit_in, fit_out, expect_slope, tolerance, expect_opt->count() > 0);
        }
        if (b_bbht->parsed()) {
            const auto b = qclaw::bbht_query_bound(a1, a2);
            if (as_json) {
                std::cout << nlohmann::json{{"evaluator", "bbht"},
                                            {"exact", b.exact},
                                            {"relaxed", b.relaxed}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << b.exact << " " << b.relaxed << "\n";
            }
        } else if (b_mtqs->parsed()) {
            emit_value(as_json, "mtqs", qclaw::mtqs_query_bound(a1, a2));
        } else if (b_eps->parsed()) {
            emit_value(as_json, "epsilon", qclaw::epsilon_bound(u1, a1, d2));
        } else if (b_floor->parsed()) {
            emit_value(as_json, "floor", qclaw::mclaw_success_floor(u1, a1, d2, u2));
        } else if (b_img->parsed()) {
            emit_value(as_json, "image-size", qclaw::image_size_bound(a1, a2));
        } else if (b_mcd->parsed()) {
            emit_value(as_json, "mcdiarmid", qclaw::mcdiarmid_tail(a1, d1));
        } else if (b_hyp->parsed()) {
            emit_value(as_json, "hypergeometric", qclaw::hypergeometric_tail(a1, a2, a3, d1));
        } else if (b_expo->parsed()) {
            const auto e = qclaw::theoretical_exponent(u1, qclaw::parse_algorithm_kind(name));
            if (as_json) {
                std::cout << nlohmann::json{{"evaluator", "exponent"},
                                            {"num", e.num},
                                            {"den", e.den},
                                            {"value", e.value()}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << e.num << "/" << e.den << " = " << e.value() << "\n";
            }
        } else if (b_sched->parsed()) {
            const auto s = qclaw::list_size_schedule(u1, a1, d2);
            if (as_json) {
                std::cout << nlohmann::json{{"evaluator", "schedule"}, {"values", s}}.dump()
                          << "\n";
            } else {
                for (std::size_t i = 0; i < s.size(); ++i) {
                    std::cout << (i ? " " : "") << s[i];
                }
                std::cout << "\n";
            }
        } else if (b_qlim->parsed()) {
            emit_value(as_json, "qlimit",
                       static_cast<double>(qclaw::query_limit(u2, u1, a1, d2)));
        } else if (b_qlog->parsed()) {
            emit_value(as_json, "qlimit-log2", qclaw::log2_query_limit(u2, u1, d1, d2));
        } else if (b_res->parsed()) {
            const auto r = qclaw::grover_iteration_resources(u1, u2, a1);
            if (as_json) {
                std::cout << nlohmann::json{{"evaluator", "resources"},
                                            {"time_units", r.time_units},
                                            {"qubit_units", r.qubit_units}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << r.time_units << " " << r.qubit_units << "\n";
            }
        } else if (b_peak->parsed()) {
            emit_value(as_json, "peak-qubits", qclaw::mclaw_peak_qubit_estimate(u1, a1, d2));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
