#include "qclaw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qclaw/bounds.hpp"

namespace qclaw {

Algorithm parse_algorithm(const std::string& name) {
    if (name == "mclaw") return Algorithm::mclaw;
    if (name == "bht") return Algorithm::bht;
    if (name == "multigrover") return Algorithm::multigrover;
    if (name == "recmcoll") return Algorithm::recmcoll;
    if (name == "mcollision") return Algorithm::mcollision;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::mclaw: return "mclaw";
        case Algorithm::bht: return "bht";
        case Algorithm::multigrover: return "multigrover";
        case Algorithm::recmcoll: return "recmcoll";
        case Algorithm::mcollision: return "mcollision";
    }
    return "?";
}

AlgorithmKind exponent_kind(Algorithm a) {
    switch (a) {
        case Algorithm::mclaw:
        case Algorithm::mcollision: return AlgorithmKind::mclaw;
        case Algorithm::bht: return AlgorithmKind::bht;
        case Algorithm::multigrover: return AlgorithmKind::multigrover;
        case Algorithm::recmcoll: return AlgorithmKind::recmcoll;
    }
    return AlgorithmKind::mclaw;
}

std::uint64_t default_query_cap(Algorithm a, unsigned ell, std::uint64_t n, double c_n,
                                unsigned k) {
    if (a == Algorithm::mclaw || a == Algorithm::mcollision) {
        return query_limit(k, ell, n, c_n);
    }
    const Rational e = theoretical_exponent(ell, exponent_kind(a));
    const double scale = pow_rational(static_cast<double>(n), e.num, e.den);
    return static_cast<std::uint64_t>(std::ceil(static_cast<double>(k) * 169.0 * ell * c_n * scale));
}

namespace {

// Padded search space each algorithm feeds to the engine, for the
// statevector feasibility check.
std::uint64_t statevector_space(Algorithm a, unsigned ell, std::uint64_t n, double c_n) {
    const auto domain = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) / c_n));
    switch (a) {
        case Algorithm::mclaw:
        case Algorithm::mcollision: return 5 * domain;
        case Algorithm::bht: return 2 * n;
        case Algorithm::multigrover: return ell * n;
        case Algorithm::recmcoll: return 5 * ell * n;
    }
    return 0;
}

TrialRecord execute_trial(const ExperimentConfig& cfg, std::uint64_t n, std::uint64_t seed) {
    TrialRecord rec;
    rec.algorithm = cfg.algorithm;
    rec.ell = cfg.ell;
    rec.n = n;
    rec.c_n = cfg.c_n;
    rec.k = cfg.k;
    rec.seed = seed;

    Rng rng(Rng::derive(seed, 0));
    const std::uint64_t cap = default_query_cap(cfg.algorithm, cfg.ell, n, cfg.c_n, cfg.k);
    AlgorithmOutcome outcome;

    switch (cfg.algorithm) {
        case Algorithm::mclaw: {
            const auto params = MclawParams::make(cfg.ell, n, cfg.c_n, cfg.k);
            std::vector<FunctionTable> fs;
            fs.reserve(cfg.ell);
            for (unsigned i = 0; i < cfg.ell; ++i) {
                fs.push_back(sample_random_function(params.required_domain(), n,
                                                    Rng::derive(seed, i + 1)));
            }
            outcome = run_mclaw(fs, params, cfg.backend, rng);
            if (const ClawWitness* w = outcome.claw()) rec.success = verify_claw(fs, *w);
            break;
        }
        case Algorithm::mcollision: {
            const auto params = MclawParams::make(cfg.ell, n, cfg.c_n, cfg.k);
            const FunctionTable f = sample_random_function(
                cfg.ell * params.required_domain(), n, Rng::derive(seed, 1));
            outcome = run_mcollision_via_claw(f, params, cfg.backend, rng);
            if (const CollisionWitness* w = outcome.collision()) {
                rec.success = verify_collision(f, *w);
            }
            break;
        }
        case Algorithm::bht: {
            const FunctionTable f = sample_two_to_one_function(n, Rng::derive(seed, 1));
            const auto list_size = static_cast<std::uint64_t>(
                std::ceil(pow_rational(static_cast<double>(n), 1, 3)));
            outcome = run_bht(f, list_size, cfg.backend, rng, cap);
            if (const CollisionWitness* w = outcome.collision()) {
                rec.success = verify_collision(f, *w);
            }
            break;
        }
        case Algorithm::multigrover: {
            const FunctionTable f =
                sample_random_function(cfg.ell * n, n, Rng::derive(seed, 1));
            outcome = run_multi_grover(f, cfg.ell, cfg.backend, rng, cap);
            if (const CollisionWitness* w = outcome.collision()) {
                rec.success = verify_collision(f, *w);
            }
            break;
        }
        case Algorithm::recmcoll: {
            const FunctionTable f =
                sample_random_function(cfg.ell * n, n, Rng::derive(seed, 1));
            outcome = run_recmcoll(f, cfg.ell, cfg.backend, rng, cap);
            if (const CollisionWitness* w = outcome.collision()) {
                rec.success = verify_collision(f, *w);
            }
            break;
        }
    }

    rec.queries = outcome.queries;
    rec.aborted = outcome.aborted;
    rec.per_stage = outcome.per_stage;
    rec.peak_list_size = outcome.peak_list_size;
    return rec;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (ell < 2) throw std::invalid_argument("config: ell must be >= 2");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (c_n < 1.0) throw std::invalid_argument("config: c_N must be >= 1");
    if (k < 2) throw std::invalid_argument("config: k must be >= 2");
    if (n_values.empty()) throw std::invalid_argument("config: no N values");
    for (std::size_t i = 0; i + 1 < n_values.size(); ++i) {
        if (n_values[i] >= n_values[i + 1]) {
            throw std::invalid_argument("config: N values must be strictly increasing");
        }
    }
    if (algorithm == Algorithm::bht && ell != 2) {
        throw std::invalid_argument("config: bht requires ell = 2");
    }
    if (backend == Backend::statevector) {
        for (std::uint64_t n : n_values) {
            if (statevector_space(algorithm, ell, n, c_n) > kStatevectorMaxSpace) {
                throw std::invalid_argument(
                    "config: N too large for the statevector backend (memory guard)");
            }
        }
    }
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Task {
        std::uint64_t n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    tasks.reserve(cfg.n_values.size() * cfg.trials);
    std::uint64_t trial_index = 0;
    for (std::uint64_t n : cfg.n_values) {
        for (unsigned t = 0; t < cfg.trials; ++t) {
            tasks.push_back({n, Rng::derive(cfg.base_seed, trial_index++)});
        }
    }

    std::vector<TrialRecord> records(tasks.size());
    unsigned workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, tasks.size()));

    if (workers == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            records[i] = execute_trial(cfg, tasks[i].n, tasks[i].seed);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                records[i] = execute_trial(cfg, tasks[i].n, tasks[i].seed);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return records;
}

std::optional<double> median_queries(std::span<const TrialRecord> records, std::uint64_t n) {
    std::vector<std::uint64_t> qs;
    for (const auto& r : records) {
        if (r.n == n && !r.aborted) qs.push_back(r.queries);
    }
    if (qs.empty()) return std::nullopt;
    std::sort(qs.begin(), qs.end());
    const std::size_t mid = qs.size() / 2;
    if (qs.size() % 2 == 1) return static_cast<double>(qs[mid]);
    return (static_cast<double>(qs[mid - 1]) + static_cast<double>(qs[mid])) / 2.0;
}

ScalingFit fit_scaling_exponent(std::span<const TrialRecord> records) {
    std::vector<std::uint64_t> ns;
    for (const auto& r : records) {
        if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
    }
    std::sort(ns.begin(), ns.end());
    if (ns.size() < 3) throw std::invalid_argument("fit: need at least 3 distinct N values");

    ScalingFit fit;
    for (std::uint64_t n : ns) {
        std::size_t ok = 0;
        for (const auto& r : records) {
            if (r.n == n && !r.aborted) ++ok;
        }
        if (ok < 30) throw std::invalid_argument("fit: need >= 30 non-aborted trials per N");
        fit.points.emplace_back(std::log2(static_cast<double>(n)),
                                std::log2(*median_queries(records, n)));
    }

    const double count = static_cast<double>(fit.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : fit.points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / count;
    double ss = 0;
    for (const auto& [x, y] : fit.points) {
        const double r = y - (fit.intercept + fit.slope * x);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / count);
    return fit;
}

void write_csv(std::span<const TrialRecord> records, std::ostream& out) {
    out << "algorithm,ell,N,c_N,k,seed,queries,aborted,success,peak_list_size\n";
    for (const auto& r : records) {
        out << to_string(r.algorithm) << ',' << r.ell << ',' << r.n << ',' << format_double(r.c_n)
            << ',' << r.k << ',' << r.seed << ',' << r.queries << ',' << (r.aborted ? 1 : 0)
            << ',' << (r.success ? 1 : 0) << ',' << r.peak_list_size << '\n';
    }
}

std::vector<TrialRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 10) throw std::runtime_error("csv: malformed row: " + line);
        TrialRecord r;
        r.algorithm = parse_algorithm(fields[0]);
        r.ell = static_cast<unsigned>(std::stoul(fields[1]));
        r.n = std::stoull(fields[2]);
        r.c_n = std::stod(fields[3]);
        r.k = static_cast<unsigned>(std::stoul(fields[4]));
        r.seed = std::stoull(fields[5]);
        r.queries = std::stoull(fields[6]);
        r.aborted = fields[7] == "1";
        r.success = fields[8] == "1";
        r.peak_list_size = std::stoull(fields[9]);
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

nlohmann::json fit_json_object(const ScalingFit& fit) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& [x, y] : fit.points) points.push_back({{"log2_n", x}, {"log2_median", y}});
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"residual_rms", fit.residual_rms},
            {"points", points}};
}

}  // namespace

std::string fit_to_json(const ScalingFit& fit) { return fit_json_object(fit).dump(2); }

std::string summary_json(const ExperimentConfig& cfg, std::span<const TrialRecord> records,
                         const ScalingFit* fit) {
    nlohmann::json j;
    j["algorithm"] = to_string(cfg.algorithm);
    j["ell"] = cfg.ell;
    j["c_N"] = cfg.c_n;
    j["k"] = cfg.k;
    j["backend"] = to_string(cfg.backend);
    j["base_seed"] = cfg.base_seed;
    j["trials_per_n"] = cfg.trials;

    const Rational e = theoretical_exponent(cfg.ell, exponent_kind(cfg.algorithm));
    j["theoretical_exponent"] = {{"num", e.num}, {"den", e.den}, {"value", e.value()}};
    j["measured_slope"] = fit ? nlohmann::json(fit->slope) : nlohmann::json(nullptr);
    j["fit"] = fit ? fit_json_object(*fit) : nlohmann::json(nullptr);

    // Medians use the non-aborted runs; means over everything are reported
    // alongside since the theorem bounds speak about expectations.
    nlohmann::json per_n = nlohmann::json::array();
    for (std::uint64_t n : cfg.n_values) {
        std::uint64_t total = 0, aborted = 0, successes = 0;
        double query_sum = 0.0;
        std::uint64_t peak_max = 0;
        for (const auto& r : records) {
            if (r.n != n) continue;
            ++total;
            if (r.aborted) ++aborted;
            if (r.success) ++successes;
            query_sum += static_cast<double>(r.queries);
            peak_max = std::max(peak_max, r.peak_list_size);
        }
        nlohmann::json row;
        row["n"] = n;
        row["log2_n"] = std::log2(static_cast<double>(n));
        row["trials"] = total;
        row["aborted"] = aborted;
        row["abort_rate"] = total ? static_cast<double>(aborted) / total : 0.0;
        row["success_rate"] = total ? static_cast<double>(successes) / total : 0.0;
        const auto med = median_queries(records, n);
        row["median_queries"] = med ? nlohmann::json(*med) : nlohmann::json(nullptr);
        row["mean_queries"] = total ? nlohmann::json(query_sum / total) : nlohmann::json(nullptr);
        row["peak_list_size_max"] = peak_max;
        if (cfg.algorithm == Algorithm::mclaw || cfg.algorithm == Algorithm::mcollision) {
            row["success_floor"] = mclaw_success_floor(cfg.ell, n, cfg.c_n, cfg.k);
            row["qlimit"] = query_limit(cfg.k, cfg.ell, n, cfg.c_n);
        }
        per_n.push_back(std::move(row));
    }
    j["per_n"] = std::move(per_n);
    return j.dump(2);
}

std::vector<std::string> emit_report(const ExperimentConfig& cfg,
                                     std::span<const TrialRecord> records, const ScalingFit* fit,
                                     const std::string& out_base, const std::string& format) {
    std::vector<std::string> written;
    if (format == "csv") {
        const std::string path = out_base + ".csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        write_csv(records, out);
        written.push_back(path);
    } else if (format == "json") {
        const std::string path = out_base + ".records.json";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : records) {
            rows.push_back({{"algorithm", to_string(r.algorithm)},
                            {"ell", r.ell},
                            {"N", r.n},
                            {"c_N", r.c_n},
                            {"k", r.k},
                            {"seed", r.seed},
                            {"queries", r.queries},
                            {"per_stage", r.per_stage},
                            {"aborted", r.aborted},
                            {"success", r.success},
                            {"peak_list_size", r.peak_list_size}});
        }
        out << rows.dump(2) << '\n';
        written.push_back(path);
    } else {
        throw std::invalid_argument("emit_report: format must be csv or json");
    }

    const std::string summary_path = out_base + ".summary.json";
    std::ofstream out(summary_path);
    if (!out) throw std::runtime_error("cannot write " + summary_path);
    out << summary_json(cfg, records, fit) << '\n';
    written.push_back(summary_path);
    return written;
}

}  // namespace qclaw
