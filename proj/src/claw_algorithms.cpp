#include "qclaw/claw_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace qclaw {

std::vector<double> list_size_schedule(unsigned ell, std::uint64_t range_size, double c_n) {
    if (ell < 2 || ell > 32) throw std::invalid_argument("list_size_schedule: ell must be in [2, 32]");
    if (range_size < 2) throw std::invalid_argument("list_size_schedule: need N >= 2");
    if (c_n < 1.0) throw std::invalid_argument("list_size_schedule: need c_N >= 1");
    const std::int64_t den = (std::int64_t{1} << ell) - 1;
    std::vector<double> schedule(ell + 1);
    schedule[0] = static_cast<double>(range_size) / (4.0 * c_n);
    for (unsigned i = 1; i <= ell; ++i) {
        const std::int64_t num = (std::int64_t{1} << (ell - i)) - 1;
        schedule[i] = pow_rational(static_cast<double>(range_size), num, den);
    }
    return schedule;
}

std::uint64_t query_limit(unsigned k, unsigned ell, std::uint64_t range_size, double c_n) {
    if (k < 2) throw std::invalid_argument("query_limit: k must be >= 2");
    if (ell < 2 || ell > 32) throw std::invalid_argument("query_limit: ell must be in [2, 32]");
    const std::int64_t half = std::int64_t{1} << (ell - 1);
    const double scale = pow_rational(static_cast<double>(range_size), half - 1, 2 * half - 1);
    return static_cast<std::uint64_t>(std::ceil(static_cast<double>(k) * 169.0 * ell * c_n * scale));
}

std::vector<std::uint64_t> recmcoll_t_schedule(unsigned ell, std::uint64_t range_size) {
    if (ell < 2 || ell > 16) throw std::invalid_argument("recmcoll_t_schedule: ell must be in [2, 16]");
    if (range_size < 2) throw std::invalid_argument("recmcoll_t_schedule: need N >= 2");
    std::vector<std::uint64_t> schedule(ell - 1);
    std::int64_t power = 3;
    for (unsigned i = 1; i < ell; ++i) {
        schedule[i - 1] = static_cast<std::uint64_t>(
            std::ceil(pow_rational(static_cast<double>(range_size), 1, power)));
        power *= 3;
    }
    return schedule;
}

MclawParams MclawParams::make(unsigned ell, std::uint64_t range_size, double c_n, unsigned k) {
    if (k < 2) throw std::invalid_argument("MclawParams: k must be >= 2");
    MclawParams p;
    p.ell = ell;
    p.range_size = range_size;
    p.c_n = c_n;
    p.k = k;
    p.schedule = list_size_schedule(ell, range_size, c_n);
    p.qlimit = query_limit(k, ell, range_size, c_n);
    p.schedule_ordered = true;
    for (unsigned i = 0; i < ell; ++i) {
        if (!(p.schedule[i] > p.schedule[i + 1])) p.schedule_ordered = false;
    }
    const double root = pow_rational(static_cast<double>(range_size), 1,
                                     (std::int64_t{1} << ell) - 1);
    p.c_regime_ok = c_n <= root / std::log2(static_cast<double>(range_size));
    return p;
}

std::uint64_t MclawParams::stage_loop_count(unsigned i) const {
    if (i < 1 || i > ell) throw std::invalid_argument("stage_loop_count: stage out of range");
    return static_cast<std::uint64_t>(std::ceil(4.0 * c_n * schedule[i]));
}

std::uint64_t MclawParams::required_domain() const {
    return static_cast<std::uint64_t>(std::ceil(static_cast<double>(range_size) / c_n));
}

void StageLists::insert(std::uint32_t y, std::vector<std::uint64_t> inputs) {
    const auto [it, fresh] = entries_.emplace(y, std::move(inputs));
    if (!fresh) throw std::logic_error("StageLists: duplicate y value");
    order_.push_back(y);
}

std::vector<std::uint64_t> StageLists::take(std::uint32_t y) {
    auto it = entries_.find(y);
    if (it == entries_.end()) throw std::logic_error("StageLists: y not present");
    std::vector<std::uint64_t> inputs = std::move(it->second);
    entries_.erase(it);
    return inputs;
}

namespace {

AlgorithmOutcome aborted_outcome(const QueryLedger& ledger, std::uint64_t peak) {
    AlgorithmOutcome out;
    out.aborted = true;
    out.queries = ledger.total();
    out.per_stage = ledger.per_stage();
    out.peak_list_size = peak;
    return out;
}

}  // namespace

AlgorithmOutcome run_mclaw(std::span<const FunctionTable> functions, const MclawParams& params,
                           Backend backend, Rng& rng, MclawStats* stats) {
    const unsigned ell = params.ell;
    const std::uint64_t n = params.range_size;
    if (functions.size() != ell) {
        throw std::invalid_argument("run_mclaw: function count does not match ell");
    }
    const std::uint64_t need = params.required_domain();
    std::vector<FunctionTable> restricted_storage;
    restricted_storage.reserve(ell);
    std::vector<const FunctionTable*> fs(ell);
    for (unsigned i = 0; i < ell; ++i) {
        const FunctionTable& f = *(functions.begin() + i);
        if (f.range_size() != n) {
            throw std::invalid_argument("run_mclaw: function range does not match N");
        }
        if (f.domain_size() < need) {
            throw std::invalid_argument("run_mclaw: domain smaller than ceil(N / c_N)");
        }
        if (f.domain_size() > need) {
            restricted_storage.push_back(restrict_domain(f, need));
            fs[i] = &restricted_storage.back();
        } else {
            fs[i] = &f;
        }
    }

    QueryLedger ledger(params.qlimit, ell);
    std::vector<std::uint8_t> alive(n, 1);  // membership in L'_{i-1}; starts as all of Y
    std::uint64_t alive_count = n;
    std::vector<std::uint32_t> preimages(n, 0);
    StageLists prev;  // L_{i-1} for i >= 2; stage 0 entries are implicit
    std::uint64_t cur_slots = 0;
    std::uint64_t peak_slots = 0;

    for (unsigned stage = 1; stage <= ell; ++stage) {
        ledger.set_stage(stage - 1);
        const FunctionTable& f = *fs[stage - 1];

        std::fill(preimages.begin(), preimages.end(), 0);
        for (std::uint32_t v : f.values()) ++preimages[v];
        std::uint64_t targets = 0;
        for (std::uint32_t v : f.values()) targets += alive[v];

        // One cannot consume more partial claws than the previous stage holds;
        // the clamp is inert whenever the schedule is ordered.
        const std::uint64_t loops = std::min<std::uint64_t>(params.stage_loop_count(stage),
                                                            alive_count);
        const std::uint64_t stage_start = alive_count;
        const std::uint64_t prev_width = stage;     // (stage-1) inputs + y
        const std::uint64_t new_width = stage + 1;  // stage inputs + y

        StageLists next;
        const auto hits = [&f, &alive](std::uint64_t x) { return alive[f.value(x)] != 0; };
        for (std::uint64_t j = 0; j < loops; ++j) {
            const auto found =
                run_mtqs_padded(f.domain_size(), targets, hits, ledger, rng, backend);
            if (!found) return aborted_outcome(ledger, peak_slots);
            const std::uint64_t x = *found;
            const std::uint32_t y = f.value(x);

            std::vector<std::uint64_t> inputs = stage >= 2 ? prev.take(y)
                                                           : std::vector<std::uint64_t>{};
            alive[y] = 0;
            --alive_count;
            targets -= preimages[y];
            if (stage >= 2) cur_slots -= prev_width;

            inputs.push_back(x);
            next.insert(y, std::move(inputs));
            cur_slots += new_width;
            peak_slots = std::max(peak_slots, cur_slots);
        }

        if (stats) {
            stats->stage_start_list_size.push_back(stage_start);
            stats->stage_collected.push_back(loops);
            stats->stage_leftover.push_back(alive_count);
        }

        // Leftover entries of L_{i-1} are discarded once L_i is complete.
        if (stage >= 2) cur_slots -= prev.size() * prev_width;
        std::fill(alive.begin(), alive.end(), 0);
        for (std::uint32_t y : next.insertion_order()) alive[y] = 1;
        alive_count = next.size();
        prev = std::move(next);
    }

    AlgorithmOutcome out;
    ClawWitness w;
    w.y = prev.insertion_order().front();
    w.inputs = prev.entries().at(w.y);
    out.result = std::move(w);
    out.queries = ledger.total();
    out.per_stage = ledger.per_stage();
    out.peak_list_size = peak_slots;
    return out;
}

AlgorithmOutcome run_bht(const FunctionTable& f, std::uint64_t list_size, Backend backend,
                         Rng& rng, std::uint64_t query_cap) {
    if (list_size == 0 || list_size > f.domain_size()) {
        throw std::invalid_argument("run_bht: list size must be in [1, |X|]");
    }
    QueryLedger ledger(query_cap, 2);
    const std::uint64_t list_slots = 2 * list_size;  // (x, y) pairs

    ledger.set_stage(0);
    if (!ledger.charge(list_size)) return aborted_outcome(ledger, list_slots);

    std::unordered_map<std::uint32_t, std::uint64_t> by_y;
    by_y.reserve(list_size * 2);
    for (std::uint64_t x = 0; x < list_size; ++x) {
        const std::uint32_t y = f.value(x);
        const auto [it, fresh] = by_y.emplace(y, x);
        if (!fresh) {
            AlgorithmOutcome out;
            out.result = CollisionWitness{{it->second, x}, y};
            out.queries = ledger.total();
            out.per_stage = ledger.per_stage();
            out.peak_list_size = list_slots;
            return out;
        }
    }

    ledger.set_stage(1);
    std::uint64_t targets = 0;
    for (std::uint64_t x = list_size; x < f.domain_size(); ++x) {
        if (by_y.contains(f.value(x))) ++targets;
    }
    SearchProblem problem;
    problem.space_size = f.domain_size();
    problem.target_count = targets;
    problem.is_target = [&f, &by_y, list_size](std::uint64_t x) {
        return x >= list_size && by_y.contains(f.value(x));
    };
    const auto found = run_bbht(problem, ledger, rng, backend);
    if (!found) return aborted_outcome(ledger, list_slots);

    const std::uint32_t y = f.value(*found);
    AlgorithmOutcome out;
    out.result = CollisionWitness{{by_y.at(y), *found}, y};
    out.queries = ledger.total();
    out.per_stage = ledger.per_stage();
    out.peak_list_size = list_slots;
    return out;
}

AlgorithmOutcome run_multi_grover(const FunctionTable& f, unsigned ell, Backend backend, Rng& rng,
                                  std::uint64_t query_cap) {
    if (ell < 2) throw std::invalid_argument("run_multi_grover: need ell >= 2");
    QueryLedger ledger(query_cap, ell);

    ledger.set_stage(0);
    const std::uint64_t x1 = rng.below(f.domain_size());
    if (!ledger.charge(1)) return aborted_outcome(ledger, 0);
    const std::uint32_t y = f.value(x1);

    std::uint64_t preimages = 0;
    for (std::uint32_t v : f.values()) {
        if (v == y) ++preimages;
    }

    std::vector<std::uint64_t> inputs{x1};
    std::unordered_set<std::uint64_t> used{x1};
    while (inputs.size() < ell) {
        ledger.set_stage(inputs.size());
        SearchProblem problem;
        problem.space_size = f.domain_size();
        problem.target_count = preimages > inputs.size() ? preimages - inputs.size() : 0;
        problem.is_target = [&f, &used, y](std::uint64_t x) {
            return f.value(x) == y && !used.contains(x);
        };
        const auto found = run_bbht(problem, ledger, rng, backend);
        if (!found) return aborted_outcome(ledger, inputs.size() + 1);
        inputs.push_back(*found);
        used.insert(*found);
    }

    AlgorithmOutcome out;
    out.result = CollisionWitness{std::move(inputs), y};
    out.queries = ledger.total();
    out.per_stage = ledger.per_stage();
    out.peak_list_size = ell + 1;
    return out;
}

namespace {

struct RecmCollRun {
    const FunctionTable& f;
    const std::vector<std::uint32_t>& preimages;
    const std::vector<std::uint64_t>& t_schedule;  // ceil(t_i), index i-1
    QueryLedger& ledger;
    Rng& rng;
    Backend backend;
    std::uint64_t cur_slots = 0;
    std::uint64_t peak_slots = 0;

    std::optional<std::pair<std::uint32_t, std::vector<std::uint64_t>>> find(unsigned level) {
        if (level == 1) {
            ledger.set_stage(0);
            if (!ledger.charge(1)) return std::nullopt;
            const std::uint64_t x = rng.below(f.domain_size());
            return std::make_pair(f.value(x), std::vector<std::uint64_t>{x});
        }

        const std::uint64_t want = t_schedule[level - 2];
        std::unordered_map<std::uint32_t, std::vector<std::uint64_t>> entries;
        entries.reserve(want * 2);
        const std::uint64_t entry_slots = level;  // (level-1) inputs + y
        while (entries.size() < want) {
            auto sub = find(level - 1);
            if (!sub) return std::nullopt;
            // Duplicate y values would break the multi-target accounting;
            // resample instead of storing them.
            if (entries.contains(sub->first)) continue;
            entries.emplace(sub->first, std::move(sub->second));
            cur_slots += entry_slots;
            peak_slots = std::max(peak_slots, cur_slots);
        }

        std::uint64_t targets = 0;
        for (const auto& [y, xs] : entries) {
            const std::uint64_t have = preimages[y];
            targets += have > xs.size() ? have - xs.size() : 0;
        }
        ledger.set_stage(level - 1);
        const auto hits = [this, &entries](std::uint64_t x) {
            const auto it = entries.find(f.value(x));
            if (it == entries.end()) return false;
            return std::find(it->second.begin(), it->second.end(), x) == it->second.end();
        };
        const auto found =
            run_mtqs_padded(f.domain_size(), targets, hits, ledger, rng, backend);
        cur_slots -= entries.size() * entry_slots;
        if (!found) return std::nullopt;

        const std::uint32_t y = f.value(*found);
        std::vector<std::uint64_t> xs = std::move(entries.at(y));
        xs.push_back(*found);
        return std::make_pair(y, std::move(xs));
    }
};

}  // namespace

AlgorithmOutcome run_recmcoll(const FunctionTable& f, unsigned ell, Backend backend, Rng& rng,
                              std::uint64_t query_cap) {
    if (ell < 2 || ell > 16) throw std::invalid_argument("run_recmcoll: ell must be in [2, 16]");
    QueryLedger ledger(query_cap, ell);

    std::vector<std::uint32_t> preimages(f.range_size(), 0);
    for (std::uint32_t v : f.values()) ++preimages[v];

    const auto t_schedule = recmcoll_t_schedule(ell, f.range_size());
    RecmCollRun run{f, preimages, t_schedule, ledger, rng, backend};
    auto result = run.find(ell);
    if (!result) return aborted_outcome(ledger, run.peak_slots);

    AlgorithmOutcome out;
    out.result = CollisionWitness{std::move(result->second), result->first};
    out.queries = ledger.total();
    out.per_stage = ledger.per_stage();
    out.peak_list_size = run.peak_slots;
    return out;
}

AlgorithmOutcome run_mcollision_via_claw(const FunctionTable& f, const MclawParams& params,
                                         Backend backend, Rng& rng) {
    const std::uint64_t need = params.required_domain();
    if (f.domain_size() < params.ell * need) {
        throw std::invalid_argument("run_mcollision_via_claw: domain smaller than ell * ceil(N/c_N)");
    }
    const auto ranges = partition_domain(f.domain_size(), params.ell);
    std::vector<FunctionTable> parts;
    parts.reserve(params.ell);
    for (const auto& r : ranges) {
        parts.push_back(slice_domain(f, {r.begin, r.begin + need}));
    }

    AlgorithmOutcome inner = run_mclaw(parts, params, backend, rng);
    if (const ClawWitness* w = inner.claw()) {
        CollisionWitness c;
        c.y = w->y;
        c.inputs.reserve(params.ell);
        for (unsigned i = 0; i < params.ell; ++i) {
            c.inputs.push_back(ranges[i].begin + w->inputs[i]);
        }
        inner.result = std::move(c);
    }
    return inner;
}

std::string outcome_record_json(const std::string& algorithm, unsigned ell,
                                std::uint64_t range_size, double c_n, unsigned k,
                                std::uint64_t seed, const AlgorithmOutcome& outcome) {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["ell"] = ell;
    j["N"] = range_size;
    j["c_N"] = c_n;
    j["k"] = k;
    j["seed"] = seed;
    j["queries"] = outcome.queries;
    j["per_stage"] = outcome.per_stage;
    j["aborted"] = outcome.aborted;
    if (const ClawWitness* w = outcome.claw()) {
        j["witness"] = {{"kind", "claw"}, {"inputs", w->inputs}, {"y", w->y}};
    } else if (const CollisionWitness* w = outcome.collision()) {
        j["witness"] = {{"kind", "collision"}, {"inputs", w->inputs}, {"y", w->y}};
    } else {
        j["witness"] = nullptr;
    }
    return j.dump();
}

}  // namespace qclaw
