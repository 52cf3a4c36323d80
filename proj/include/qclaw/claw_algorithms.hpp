#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qclaw/bounds.hpp"
#include "qclaw/function_table.hpp"
#include "qclaw/grover.hpp"
#include "qclaw/query_ledger.hpp"

namespace qclaw {

// List-size schedule N_0..N_ell: N_0 = N/(4 c_N), N_i = N^{(2^{l-i}-1)/(2^l-1)}
// for i >= 1, so N_ell = 1. Stage i collects ceil(4 c_N N_i) claws.
std::vector<double> list_size_schedule(unsigned ell, std::uint64_t range_size, double c_n);

// Hard query cap ceil(k * 169 * ell * c_N * N^{(2^{l-1}-1)/(2^l-1)}).
std::uint64_t query_limit(unsigned k, unsigned ell, std::uint64_t range_size, double c_n);

// Recursion widths ceil(t_i) with t_i = N^{1/3^i}, for i = 1..ell-1.
std::vector<std::uint64_t> recmcoll_t_schedule(unsigned ell, std::uint64_t range_size);

/// Parameters of the staged claw finder, with the derived schedule and cap.
struct MclawParams {
    unsigned ell = 2;
    std::uint64_t range_size = 2;  // N
    double c_n = 1.0;
    unsigned k = 2;

    std::vector<double> schedule;  // N_0..N_ell
    std::uint64_t qlimit = 0;

    // Diagnostics, not errors: the schedule is strictly decreasing only for
    // N > (4 c_N)^{(2^l-1)/2^{l-1}}, and the analysis wants
    // c_N <= N^{1/(2^l-1)} / log2 N.
    bool schedule_ordered = false;
    bool c_regime_ok = false;

    static MclawParams make(unsigned ell, std::uint64_t range_size, double c_n, unsigned k);

    // ceil(4 c_N N_i), the number of i-claws stage i collects.
    std::uint64_t stage_loop_count(unsigned i) const;

    // Minimal domain size ceil(N / c_N); larger domains get restricted.
    std::uint64_t required_domain() const;
};

/// Paired stage lists: partial claws keyed by their (pairwise-distinct)
/// y-value, insertion-ordered so runs are reproducible.
class StageLists {
public:
    void insert(std::uint32_t y, std::vector<std::uint64_t> inputs);
    // Removes and returns the entry for y; y must be present.
    std::vector<std::uint64_t> take(std::uint32_t y);
    bool contains(std::uint32_t y) const { return entries_.contains(y); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::uint32_t>& insertion_order() const { return order_; }
    const std::unordered_map<std::uint32_t, std::vector<std::uint64_t>>& entries() const {
        return entries_;
    }

private:
    std::unordered_map<std::uint32_t, std::vector<std::uint64_t>> entries_;
    std::vector<std::uint32_t> order_;
};

struct AlgorithmOutcome {
    std::variant<std::monostate, ClawWitness, CollisionWitness> result;
    std::uint64_t queries = 0;
    std::vector<std::uint64_t> per_stage;
    bool aborted = false;
    std::uint64_t peak_list_size = 0;  // peak stored slots (x components + y per entry)

    bool found() const { return !std::holds_alternative<std::monostate>(result); }
    const ClawWitness* claw() const { return std::get_if<ClawWitness>(&result); }
    const CollisionWitness* collision() const { return std::get_if<CollisionWitness>(&result); }
};

/// Per-stage instrumentation of a staged-claw run, for invariant checks.
struct MclawStats {
    std::vector<std::uint64_t> stage_start_list_size;  // |L'_{i-1}| when stage i starts
    std::vector<std::uint64_t> stage_collected;        // claws collected by stage i
    std::vector<std::uint64_t> stage_leftover;         // |L_{i-1}| when stage i ends
};

// The staged claw finder. Stage i extends claws from the previous stage's
// list by multi-target search against its y-values, consuming each used
// entry, under the hard cap params.qlimit. Domains larger than
// ceil(N / c_N) are restricted to their first ceil(N / c_N) elements.
AlgorithmOutcome run_mclaw(std::span<const FunctionTable> functions, const MclawParams& params,
                           Backend backend, Rng& rng, MclawStats* stats = nullptr);

// Collision finding via a list of list_size known pairs: an in-list
// collision if one exists, otherwise a randomized Grover search for a second
// preimage into the list. Intended regime: two-to-one f with |X| = 2N and
// list_size ~ N^{1/3}.
AlgorithmOutcome run_bht(const FunctionTable& f, std::uint64_t list_size, Backend backend,
                         Rng& rng, std::uint64_t query_cap);

// The trivial upper bound: pick x_1 at random, then grow the collision one
// preimage at a time with randomized Grover search, excluding inputs already
// found.
AlgorithmOutcome run_multi_grover(const FunctionTable& f, unsigned ell, Backend backend, Rng& rng,
                                  std::uint64_t query_cap);

// Recursive multicollision finder with t_i = N^{1/3^i}: level i gathers
// ceil(t_{i-1}) many (i-1)-collisions with pairwise-distinct y-values, then
// one multi-target search extends one of them. Trades queries for a small
// peak list size.
AlgorithmOutcome run_recmcoll(const FunctionTable& f, unsigned ell, Backend backend, Rng& rng,
                              std::uint64_t query_cap);

// Collision finding through the claw reduction: partition the domain into
// ell parts, run the claw finder on the restrictions, and remap the claw
// inputs to global indices. Costs exactly the claw finder's queries.
AlgorithmOutcome run_mcollision_via_claw(const FunctionTable& f, const MclawParams& params,
                                         Backend backend, Rng& rng);

// Uniform JSON record for a single run:
// {algorithm, ell, N, c_N, k, seed, queries, per_stage, aborted, witness}.
std::string outcome_record_json(const std::string& algorithm, unsigned ell,
                                std::uint64_t range_size, double c_n, unsigned k,
                                std::uint64_t seed, const AlgorithmOutcome& outcome);

}  // namespace qclaw
