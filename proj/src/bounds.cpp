#include "qclaw/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qclaw/claw_algorithms.hpp"

namespace qclaw {

namespace {

void check_ell(unsigned ell) {
    if (ell < 2 || ell > 32) throw std::invalid_argument("ell must be in [2, 32]");
}

Rational reduced(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

}  // namespace

AlgorithmKind parse_algorithm_kind(const std::string& name) {
    if (name == "mclaw") return AlgorithmKind::mclaw;
    if (name == "bht") return AlgorithmKind::bht;
    if (name == "multigrover") return AlgorithmKind::multigrover;
    if (name == "recmcoll") return AlgorithmKind::recmcoll;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(AlgorithmKind a) {
    switch (a) {
        case AlgorithmKind::mclaw: return "mclaw";
        case AlgorithmKind::bht: return "bht";
        case AlgorithmKind::multigrover: return "multigrover";
        case AlgorithmKind::recmcoll: return "recmcoll";
    }
    return "?";
}

double pow_rational(double base, std::int64_t num, std::int64_t den) {
    if (base <= 0.0 || den == 0) throw std::invalid_argument("pow_rational: bad arguments");
    if (num == 0) return 1.0;
    return std::exp2(std::log2(base) * static_cast<double>(num) / static_cast<double>(den));
}

BbhtBound bbht_query_bound(std::uint64_t space_size, std::uint64_t target_count) {
    if (target_count == 0 || target_count >= space_size) {
        throw std::invalid_argument("bbht_query_bound: need 0 < t < M");
    }
    if (81 * target_count >= 17 * space_size) {
        throw std::invalid_argument("bbht_query_bound: t/M >= 17/81");
    }
    const double m = static_cast<double>(space_size);
    const double t = static_cast<double>(target_count);
    return {4.0 * m / std::sqrt((m - t) * t), 4.5 * std::sqrt(m / t)};
}

double mtqs_query_bound(std::uint64_t domain_size, std::uint64_t preimage_count) {
    if (preimage_count == 0) throw std::invalid_argument("mtqs_query_bound: no preimages");
    return 9.0 * std::sqrt(5.0 * static_cast<double>(domain_size) /
                           static_cast<double>(preimage_count));
}

double epsilon_bound(unsigned ell, std::uint64_t range_size, double c_n) {
    check_ell(ell);
    const double n = static_cast<double>(range_size);
    const double root = pow_rational(n, 1, (std::int64_t{1} << ell) - 1);
    return 2.0 * ell / n + ell * std::exp(-root / (25.0 * c_n));
}

double mclaw_success_floor(unsigned ell, std::uint64_t range_size, double c_n, unsigned k) {
    if (k < 2) throw std::invalid_argument("mclaw_success_floor: k must be >= 2");
    return 1.0 - epsilon_bound(ell, range_size, c_n) - 1.0 / static_cast<double>(k);
}

double image_size_bound(std::uint64_t domain_size, std::uint64_t range_size) {
    if (domain_size > range_size) {
        throw std::invalid_argument("image_size_bound: requires |X| <= |Y|");
    }
    const double x = static_cast<double>(domain_size);
    const double y = static_cast<double>(range_size);
    return x / 2.0 - std::sqrt(x * std::log(y) / 2.0);
}

double mcdiarmid_tail(std::uint64_t m, double lambda) {
    if (m == 0 || lambda < 0.0) throw std::invalid_argument("mcdiarmid_tail: bad arguments");
    return 2.0 * std::exp(-2.0 * lambda * lambda / static_cast<double>(m));
}

double hypergeometric_tail(std::uint64_t n1, std::uint64_t n, std::uint64_t m, double lambda) {
    if (lambda < 2.0) throw std::invalid_argument("hypergeometric_tail: lambda must be >= 2");
    if (n1 > n || m > n) throw std::invalid_argument("hypergeometric_tail: need n1, m <= n");
    const double a1 = 1.0 / static_cast<double>(n1 + 1) + 1.0 / static_cast<double>(n - n1 + 1);
    const double a2 = 1.0 / static_cast<double>(m + 1) + 1.0 / static_cast<double>(n - m + 1);
    const double alpha = std::max(a1, a2);
    return std::exp(-2.0 * alpha * (lambda * lambda - 1.0));
}

Rational theoretical_exponent(unsigned ell, AlgorithmKind algorithm) {
    check_ell(ell);
    switch (algorithm) {
        case AlgorithmKind::mclaw: {
            const std::int64_t half = std::int64_t{1} << (ell - 1);
            return reduced(half - 1, 2 * half - 1);
        }
        case AlgorithmKind::recmcoll: {
            std::int64_t p = 1;
            for (unsigned i = 1; i < ell; ++i) p *= 3;
            return reduced(p - 1, 2 * p);
        }
        case AlgorithmKind::multigrover:
            return {1, 2};
        case AlgorithmKind::bht:
            if (ell != 2) throw std::invalid_argument("bht exponent is defined for ell = 2 only");
            return {1, 3};
    }
    throw std::invalid_argument("unknown algorithm");
}

ResourceEstimate grover_iteration_resources(unsigned m_bits, unsigned n_bits,
                                            std::uint64_t list_len) {
    if (list_len == 0) throw std::invalid_argument("grover_iteration_resources: empty list");
    const double log_k = std::ceil(std::log2(static_cast<double>(list_len)));
    ResourceEstimate est;
    est.time_units = static_cast<double>(m_bits) + static_cast<double>(n_bits) * log_k;
    est.qubit_units =
        static_cast<double>(m_bits) + static_cast<double>(list_len) * static_cast<double>(n_bits);
    return est;
}

double mclaw_peak_qubit_estimate(unsigned ell, std::uint64_t range_size, double c_n) {
    const auto schedule = list_size_schedule(ell, range_size, c_n);
    double peak = schedule[1];                             // stage 1 via the complement list
    for (unsigned i = 2; i <= ell; ++i) peak = std::max(peak, schedule[i - 1]);
    return c_n * peak;
}

double log2_query_limit(unsigned k, unsigned ell, double log2_n, double c_n) {
    check_ell(ell);
    if (k < 2) throw std::invalid_argument("log2_query_limit: k must be >= 2");
    const double half = static_cast<double>(std::int64_t{1} << (ell - 1));
    return std::log2(static_cast<double>(k) * 169.0 * ell * c_n) +
           log2_n * (half - 1.0) / (2.0 * half - 1.0);
}

}  // namespace qclaw
