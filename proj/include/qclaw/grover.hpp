#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qclaw/function_table.hpp"
#include "qclaw/query_ledger.hpp"
#include "qclaw/rng.hpp"

namespace qclaw {

enum class Backend { statevector, analytic };

Backend parse_backend(const std::string& name);
std::string to_string(Backend b);

// Largest statevector the exact backend will allocate.
inline constexpr std::uint64_t kStatevectorMaxSpace = 1ull << 22;

/// A search instance in the query model: a space of M indices, a target
/// predicate, and the exact target count t. The predicate and the count are
/// simulation-side bookkeeping; only engine-issued oracle queries are metered.
struct SearchProblem {
    std::uint64_t space_size = 0;
    std::uint64_t target_count = 0;
    std::function<bool(std::uint64_t)> is_target;
};

// sin^2((2j+1) * arcsin(sqrt(t/M))), clamped to [0,1]. Probability that j
// Grover iterations from the uniform state measure a target.
double grover_success_probability(std::uint64_t space_size, std::uint64_t target_count,
                                  std::uint64_t iterations);

/// Exact statevector of a Grover run over an arbitrary (not necessarily
/// power-of-two) space, starting from the uniform superposition.
class GroverState {
public:
    explicit GroverState(std::uint64_t space_size);

    // One iteration -W S0 W S_f: target phase flip, then inversion about the
    // mean of the amplitudes.
    void apply_iteration(const SearchProblem& p);

    std::span<const std::complex<double>> amplitudes() const { return amps_; }
    double norm_squared() const;
    double target_probability(const SearchProblem& p) const;
    std::uint64_t measure(Rng& rng) const;

private:
    std::vector<std::complex<double>> amps_;
};

// One Grover run with `iterations` iterations followed by a measurement.
// Charges iterations + 1 queries (one per iteration, one to verify the
// measured index). Returns the measured index, or nullopt when the ledger
// cap aborts the run. The measured index need not be a target.
std::optional<std::uint64_t> run_grover_statevector(const SearchProblem& p,
                                                    std::uint64_t iterations, QueryLedger& ledger,
                                                    Rng& rng);

// Statistically equivalent fast path: with probability
// grover_success_probability returns a uniform target, otherwise a uniform
// non-target. Identical accounting to the statevector run.
std::optional<std::uint64_t> sample_grover_analytic(const SearchProblem& p,
                                                    std::uint64_t iterations, QueryLedger& ledger,
                                                    Rng& rng);

struct BbhtOptions {
    double initial_m = 1.0;
    double growth = 6.0 / 5.0;  // lambda; any value in (1, 4/3) works
    std::uint64_t cost_per_iteration = 1;
    std::uint64_t cost_per_verification = 1;
};

struct BbhtStats {
    std::uint64_t rounds = 0;
    std::uint64_t iterations = 0;
};

// Randomized-schedule search for an unknown target count: each round draws
// j uniform in [0, ceil(m)), runs one Grover sampling, verifies the measured
// index, and on failure grows m by `growth` up to sqrt(M). Returns a verified
// target, or nullopt when the cap aborts (with t = 0 and no cap it would loop
// forever, so callers must cap such runs).
std::optional<std::uint64_t> run_bbht(const SearchProblem& p, QueryLedger& ledger, Rng& rng,
                                      Backend backend, const BbhtOptions& options = {},
                                      BbhtStats* stats = nullptr);

// Multi-target search on the padded space {0..4} x X with predicate
// "block 0 and hits_target(x)", so the target fraction stays below 17/81.
// Every iteration and verification costs two oracle calls. `target_count`
// must equal the exact number of x with hits_target(x).
std::optional<std::uint64_t> run_mtqs_padded(std::uint64_t domain_size, std::uint64_t target_count,
                                             const std::function<bool(std::uint64_t)>& hits_target,
                                             QueryLedger& ledger, Rng& rng, Backend backend,
                                             BbhtStats* stats = nullptr);

// Finds x with f(x) in target_ys. Rejects an empty target set. The preimage
// count is derived by a (query-free) table scan.
std::optional<std::uint64_t> run_mtqs(const FunctionTable& f,
                                      std::span<const std::uint32_t> target_ys,
                                      QueryLedger& ledger, Rng& rng, Backend backend,
                                      BbhtStats* stats = nullptr);

}  // namespace qclaw
