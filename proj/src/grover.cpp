#include "qclaw/grover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace qclaw {

Backend parse_backend(const std::string& name) {
    if (name == "statevector") return Backend::statevector;
    if (name == "analytic") return Backend::analytic;
    throw std::invalid_argument("unknown backend: " + name);
}

std::string to_string(Backend b) {
    return b == Backend::statevector ? "statevector" : "analytic";
}

double grover_success_probability(std::uint64_t space_size, std::uint64_t target_count,
                                  std::uint64_t iterations) {
    if (space_size == 0 || target_count == 0) return 0.0;
    if (target_count >= space_size) return 1.0;
    const double theta =
        std::asin(std::sqrt(static_cast<double>(target_count) / static_cast<double>(space_size)));
    const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
    return std::clamp(s * s, 0.0, 1.0);
}

GroverState::GroverState(std::uint64_t space_size) {
    if (space_size == 0) throw std::invalid_argument("GroverState: empty space");
    if (space_size > kStatevectorMaxSpace) {
        throw std::invalid_argument("GroverState: space exceeds the statevector memory guard");
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(space_size));
    amps_.assign(space_size, std::complex<double>(amp, 0.0));
}

void GroverState::apply_iteration(const SearchProblem& p) {
    // S_f: phase flip on targets.
    for (std::uint64_t x = 0; x < amps_.size(); ++x) {
        if (p.is_target(x)) amps_[x] = -amps_[x];
    }
    // -W S0 W: inversion about the mean.
    std::complex<double> mean(0.0, 0.0);
    for (const auto& a : amps_) mean += a;
    mean /= static_cast<double>(amps_.size());
    for (auto& a : amps_) a = 2.0 * mean - a;
}

double GroverState::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double GroverState::target_probability(const SearchProblem& p) const {
    double s = 0.0;
    for (std::uint64_t x = 0; x < amps_.size(); ++x) {
        if (p.is_target(x)) s += std::norm(amps_[x]);
    }
    return s;
}

std::uint64_t GroverState::measure(Rng& rng) const {
    const double u = rng.uniform01() * norm_squared();
    double acc = 0.0;
    for (std::uint64_t x = 0; x + 1 < amps_.size(); ++x) {
        acc += std::norm(amps_[x]);
        if (u < acc) return x;
    }
    return amps_.size() - 1;
}

namespace {

// Measurement outcome of one Grover run; no ledger interaction.
std::uint64_t grover_measure(const SearchProblem& p, std::uint64_t iterations, Rng& rng,
                             Backend backend) {
    if (backend == Backend::statevector) {
        GroverState state(p.space_size);
        for (std::uint64_t i = 0; i < iterations; ++i) state.apply_iteration(p);
        return state.measure(rng);
    }
    const double success = grover_success_probability(p.space_size, p.target_count, iterations);
    if (rng.bernoulli(success)) {
        // Uniform target by rejection; success > 0 implies target_count > 0.
        for (;;) {
            const std::uint64_t x = rng.below(p.space_size);
            if (p.is_target(x)) return x;
        }
    }
    for (;;) {
        const std::uint64_t x = rng.below(p.space_size);
        if (!p.is_target(x)) return x;
    }
}

std::optional<std::uint64_t> grover_run(const SearchProblem& p, std::uint64_t iterations,
                                        QueryLedger& ledger, Rng& rng, Backend backend) {
    if (!ledger.charge(iterations + 1)) return std::nullopt;
    return grover_measure(p, iterations, rng, backend);
}

}  // namespace

std::optional<std::uint64_t> run_grover_statevector(const SearchProblem& p,
                                                    std::uint64_t iterations, QueryLedger& ledger,
                                                    Rng& rng) {
    return grover_run(p, iterations, ledger, rng, Backend::statevector);
}

std::optional<std::uint64_t> sample_grover_analytic(const SearchProblem& p,
                                                    std::uint64_t iterations, QueryLedger& ledger,
                                                    Rng& rng) {
    return grover_run(p, iterations, ledger, rng, Backend::analytic);
}

std::optional<std::uint64_t> run_bbht(const SearchProblem& p, QueryLedger& ledger, Rng& rng,
                                      Backend backend, const BbhtOptions& options,
                                      BbhtStats* stats) {
    if (p.space_size == 0) throw std::invalid_argument("run_bbht: empty search space");
    const double m_max = std::sqrt(static_cast<double>(p.space_size));
    double m = options.initial_m;
    for (;;) {
        const std::uint64_t j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
        if (!ledger.charge(options.cost_per_iteration * j + options.cost_per_verification)) {
            return std::nullopt;
        }
        if (stats) {
            stats->rounds += 1;
            stats->iterations += j;
        }
        const std::uint64_t x = grover_measure(p, j, rng, backend);
        if (p.is_target(x)) return x;
        m = std::min(options.growth * m, m_max);
    }
}

std::optional<std::uint64_t> run_mtqs_padded(std::uint64_t domain_size, std::uint64_t target_count,
                                             const std::function<bool(std::uint64_t)>& hits_target,
                                             QueryLedger& ledger, Rng& rng, Backend backend,
                                             BbhtStats* stats) {
    SearchProblem padded;
    padded.space_size = 5 * domain_size;
    padded.target_count = target_count;
    padded.is_target = [&hits_target, domain_size](std::uint64_t flat) {
        return flat < domain_size && hits_target(flat);
    };
    BbhtOptions options;
    options.cost_per_iteration = 2;    // the padded predicate takes two oracle calls
    options.cost_per_verification = 2;
    return run_bbht(padded, ledger, rng, backend, options, stats);
}

std::optional<std::uint64_t> run_mtqs(const FunctionTable& f,
                                      std::span<const std::uint32_t> target_ys,
                                      QueryLedger& ledger, Rng& rng, Backend backend,
                                      BbhtStats* stats) {
    if (target_ys.empty()) throw std::invalid_argument("run_mtqs: empty target set");
    std::unordered_set<std::uint32_t> members;
    members.reserve(target_ys.size() * 2);
    for (std::uint32_t y : target_ys) {
        if (y >= f.range_size()) throw std::invalid_argument("run_mtqs: target outside the range");
        members.insert(y);
    }
    std::uint64_t preimages = 0;
    for (std::uint32_t v : f.values()) {
        if (members.contains(v)) ++preimages;
    }
    const auto hits = [&f, &members](std::uint64_t x) { return members.contains(f.value(x)); };
    return run_mtqs_padded(f.domain_size(), preimages, hits, ledger, rng, backend, stats);
}

}  // namespace qclaw
