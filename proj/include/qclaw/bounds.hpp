#pragma once

#include <cstdint>
#include <string>

namespace qclaw {

enum class AlgorithmKind { mclaw, bht, multigrover, recmcoll };

AlgorithmKind parse_algorithm_kind(const std::string& name);
std::string to_string(AlgorithmKind a);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

struct BbhtBound {
    double exact = 0.0;    // 4M / sqrt((M-t)t)
    double relaxed = 0.0;  // (9/2) sqrt(M/t)
};

struct ResourceEstimate {
    double time_units = 0.0;
    double qubit_units = 0.0;
    bool constants_set_to_one = true;  // only relative comparisons are meaningful
};

// N^(num/den), evaluated as exp2(log2(N) * num / den) so that power-of-two
// bases with divisible exponents come out bit-exact.
double pow_rational(double base, std::int64_t num, std::int64_t den);

// Expected-query bound for randomized Grover search with t targets out of M.
// Requires 0 < t < M and t/M < 17/81.
BbhtBound bbht_query_bound(std::uint64_t space_size, std::uint64_t target_count);

// 9 sqrt(5 |X| / preimage_count), the multi-target search bound.
double mtqs_query_bound(std::uint64_t domain_size, std::uint64_t preimage_count);

// Failure-probability term of the staged claw finder:
//   2 ell / N + ell exp(-(1/25) N^{1/(2^ell - 1)} / c_N).
double epsilon_bound(unsigned ell, std::uint64_t range_size, double c_n);

// Success floor 1 - epsilon - 1/k of the capped staged claw finder.
double mclaw_success_floor(unsigned ell, std::uint64_t range_size, double c_n, unsigned k);

// |X|/2 - sqrt(|X| ln|Y| / 2); a random function's image is at least this
// large with probability >= 1 - 2/|Y|. Requires |X| <= |Y|.
double image_size_bound(std::uint64_t domain_size, std::uint64_t range_size);

// 2 exp(-2 lambda^2 / M), the bounded-difference deviation bound.
double mcdiarmid_tail(std::uint64_t m, double lambda);

// exp(-2 alpha (lambda^2 - 1)) with
// alpha = max(1/(n1+1) + 1/(n-n1+1), 1/(m+1) + 1/(n-m+1)). Requires
// lambda >= 2 and 0 <= n1, m <= n.
double hypergeometric_tail(std::uint64_t n1, std::uint64_t n, std::uint64_t m, double lambda);

// Query-complexity exponent of each algorithm as an exact rational:
// (2^{l-1}-1)/(2^l-1) for mclaw, (3^{l-1}-1)/(2*3^{l-1}) for recmcoll,
// 1/2 for multigrover, 1/3 for bht (ell = 2 only).
Rational theoretical_exponent(unsigned ell, AlgorithmKind algorithm);

// Cost of one list-membership Grover iteration with m index bits, n value
// bits and a sorted list of list_len entries: time m + n ceil(log2 list_len),
// qubits m + list_len * n. Constants of the underlying estimates set to one.
ResourceEstimate grover_iteration_resources(unsigned m_bits, unsigned n_bits,
                                            std::uint64_t list_len);

// Peak qubit-units estimate of the staged claw finder under the
// complement-list trick for stage one: c_N * max(N_1, max_{i>=2} N_{i-1}).
double mclaw_peak_qubit_estimate(unsigned ell, std::uint64_t range_size, double c_n);

// log2 of the query cap k * 169 * ell * c_N * N^{(2^{l-1}-1)/(2^l-1)},
// usable for ranges far beyond what fits in an integer (e.g. log2_n = 512).
double log2_query_limit(unsigned k, unsigned ell, double log2_n, double c_n);

}  // namespace qclaw
