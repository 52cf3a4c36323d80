#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qclaw/claw_algorithms.hpp"
#include "qclaw/grover.hpp"

namespace qclaw {

enum class Algorithm { mclaw, bht, multigrover, recmcoll, mcollision };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);
AlgorithmKind exponent_kind(Algorithm a);

/// One experiment battery: an algorithm run against a ladder of range sizes
/// with a fixed number of fresh-instance trials per size.
struct ExperimentConfig {
    Algorithm algorithm = Algorithm::mclaw;
    unsigned ell = 2;
    std::vector<std::uint64_t> n_values;  // strictly increasing
    double c_n = 1.0;
    unsigned k = 4;
    unsigned trials = 200;
    Backend backend = Backend::analytic;
    std::uint64_t base_seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument on bad configs
};

struct TrialRecord {
    Algorithm algorithm = Algorithm::mclaw;
    unsigned ell = 2;
    std::uint64_t n = 0;
    double c_n = 1.0;
    unsigned k = 4;
    std::uint64_t seed = 0;
    std::uint64_t queries = 0;
    bool aborted = false;
    bool success = false;  // witness present and verified; implies !aborted
    std::vector<std::uint64_t> per_stage;
    std::uint64_t peak_list_size = 0;
};

struct ScalingFit {
    std::vector<std::pair<double, double>> points;  // (log2 N, log2 median queries)
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

// Markov-style query cap for each algorithm:
// ceil(k * 169 * ell * c_N * N^exponent) with the algorithm's own exponent.
std::uint64_t default_query_cap(Algorithm a, unsigned ell, std::uint64_t n, double c_n,
                                unsigned k);

// Runs the whole battery. Fresh random instances per trial; per-trial seeds
// derived deterministically from the base seed, so results are identical no
// matter how many threads execute them. Witnesses are verified before a
// record is marked successful.
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg);

// Ordinary least squares on (log2 N, log2 median queries), medians over
// non-aborted trials. Needs >= 3 distinct N values with >= 30 non-aborted
// trials each.
ScalingFit fit_scaling_exponent(std::span<const TrialRecord> records);

// Median of the non-aborted query counts for one N (middle pair averaged).
std::optional<double> median_queries(std::span<const TrialRecord> records, std::uint64_t n);

void write_csv(std::span<const TrialRecord> records, std::ostream& out);
std::vector<TrialRecord> read_csv(std::istream& in);

std::string fit_to_json(const ScalingFit& fit);

// Per-N medians/means/rates, the fit (null when absent), and the theoretical
// exponent and success floor next to the measured values.
std::string summary_json(const ExperimentConfig& cfg, std::span<const TrialRecord> records,
                         const ScalingFit* fit);

// Writes <out_base>.csv (or <out_base>.records.json when format == "json")
// plus <out_base>.summary.json. Returns the list of paths written.
std::vector<std::string> emit_report(const ExperimentConfig& cfg,
                                     std::span<const TrialRecord> records, const ScalingFit* fit,
                                     const std::string& out_base, const std::string& format);

}  // namespace qclaw
