#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qclaw/bounds.hpp"
#include "qclaw/harness.hpp"
#include "test_support.hpp"

using namespace qclaw;

namespace {

ExperimentConfig small_mclaw_config() {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::mclaw;
    cfg.ell = 2;
    cfg.n_values = {1ull << 12};
    cfg.trials = 10;
    cfg.base_seed = 7;
    return cfg;
}

std::string records_as_csv(const std::vector<TrialRecord>& records) {
    std::stringstream ss;
    write_csv(records, ss);
    return ss.str();
}

TrialRecord synthetic(std::uint64_t n, std::uint64_t queries, bool aborted = false) {
    TrialRecord r;
    r.n = n;
    r.queries = queries;
    r.aborted = aborted;
    r.success = !aborted;
    return r;
}

}  // namespace

TEST_CASE("run_trials is reproducible") {
    const auto cfg = small_mclaw_config();
    const auto first = run_trials(cfg);
    const auto second = run_trials(cfg);
    CHECK(records_as_csv(first) == records_as_csv(second));

    auto serial = cfg;
    serial.threads = 1;
    CHECK(records_as_csv(run_trials(serial)) == records_as_csv(first));
}

TEST_CASE("all non-aborted records carry verified witnesses") {
    for (Algorithm a : {Algorithm::mclaw, Algorithm::bht, Algorithm::multigrover,
                        Algorithm::recmcoll, Algorithm::mcollision}) {
        ExperimentConfig cfg;
        cfg.algorithm = a;
        cfg.ell = 2;
        cfg.n_values = {1ull << 10};
        cfg.trials = 25;
        cfg.base_seed = 11;
        for (const auto& r : run_trials(cfg)) {
            CHECK(r.success == !r.aborted);
            if (r.aborted) CHECK_FALSE(r.success);
        }
    }
}

TEST_CASE("fit recovers exact synthetic slopes") {
    std::vector<TrialRecord> records;
    // Queries exactly on slope 1/3: 2^4, 2^5, 2^6 at N = 2^12, 2^15, 2^18.
    for (int i = 0; i < 3; ++i) {
        for (int rep = 0; rep < 30; ++rep) {
            records.push_back(synthetic(1ull << (12 + 3 * i), 1ull << (4 + i)));
        }
    }
    const auto fit = fit_scaling_exponent(records);
    CHECK(fit.slope == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fit.residual_rms == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit tolerates small multiplicative noise") {
    Rng rng(17);
    std::vector<TrialRecord> records;
    for (int lg = 12; lg <= 24; lg += 3) {
        const double base = std::pow(2.0, (3.0 / 7.0) * lg + 2.0);
        for (int rep = 0; rep < 40; ++rep) {
            const double noise = 1.0 + (rng.uniform01() - 0.5) * 0.02;  // +-1%
            records.push_back(
                synthetic(1ull << lg, static_cast<std::uint64_t>(base * noise)));
        }
    }
    const auto fit = fit_scaling_exponent(records);
    CHECK(std::abs(fit.slope - 3.0 / 7.0) <= 0.01);
}

TEST_CASE("fit rejects insufficient data") {
    std::vector<TrialRecord> records;
    for (int rep = 0; rep < 40; ++rep) {
        records.push_back(synthetic(1 << 12, 100));
        records.push_back(synthetic(1 << 14, 200));
    }
    CHECK_THROWS_AS((void)fit_scaling_exponent(records), std::invalid_argument);

    for (int rep = 0; rep < 10; ++rep) records.push_back(synthetic(1 << 16, 300));
    CHECK_THROWS_AS((void)fit_scaling_exponent(records), std::invalid_argument);  // only 10 clean
}

TEST_CASE("aborted trials stay out of the median") {
    std::vector<TrialRecord> records;
    for (int rep = 0; rep < 30; ++rep) records.push_back(synthetic(64, 10));
    for (int rep = 0; rep < 200; ++rep) records.push_back(synthetic(64, 99999, true));
    CHECK(*median_queries(records, 64) == 10.0);
    CHECK_FALSE(median_queries(records, 128).has_value());

    records.push_back(synthetic(64, 20));
    // 31 values: 30 tens and one twenty -> median still 10.
    CHECK(*median_queries(records, 64) == 10.0);
}

TEST_CASE("csv round-trip reproduces records and medians") {
    auto cfg = small_mclaw_config();
    cfg.trials = 12;
    const auto records = run_trials(cfg);

    std::stringstream ss;
    write_csv(records, ss);
    const auto parsed = read_csv(ss);
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].algorithm == records[i].algorithm);
        CHECK(parsed[i].n == records[i].n);
        CHECK(parsed[i].seed == records[i].seed);
        CHECK(parsed[i].queries == records[i].queries);
        CHECK(parsed[i].aborted == records[i].aborted);
        CHECK(parsed[i].success == records[i].success);
        CHECK(parsed[i].peak_list_size == records[i].peak_list_size);
    }
    CHECK(*median_queries(parsed, cfg.n_values[0]) ==
          *median_queries(records, cfg.n_values[0]));
}

TEST_CASE("empty record list produces a header-only csv and a null fit") {
    std::stringstream ss;
    write_csv({}, ss);
    CHECK(ss.str() == "algorithm,ell,N,c_N,k,seed,queries,aborted,success,peak_list_size\n");

    const auto cfg = small_mclaw_config();
    const auto j = nlohmann::json::parse(summary_json(cfg, {}, nullptr));
    CHECK(j["fit"].is_null());
    CHECK(j["measured_slope"].is_null());
}

TEST_CASE("summary places measured and theoretical exponents side by side") {
    auto cfg = small_mclaw_config();
    cfg.n_values = {1ull << 10, 1ull << 12, 1ull << 14};
    cfg.trials = 35;
    const auto records = run_trials(cfg);
    const auto fit = fit_scaling_exponent(records);
    const auto j = nlohmann::json::parse(summary_json(cfg, records, &fit));
    CHECK(j["theoretical_exponent"]["num"] == 1);
    CHECK(j["theoretical_exponent"]["den"] == 3);
    CHECK(j["measured_slope"].get<double>() == doctest::Approx(fit.slope));
    REQUIRE(j["per_n"].size() == 3);
    for (const auto& row : j["per_n"]) {
        CHECK(row.contains("median_queries"));
        CHECK(row.contains("success_rate"));
        CHECK(row.contains("success_floor"));  // from the epsilon evaluator
    }
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_mclaw_config();
    cfg.n_values = {1ull << 12, 1ull << 12};
    CHECK_THROWS_AS(run_trials(cfg), std::invalid_argument);

    cfg = small_mclaw_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(run_trials(cfg), std::invalid_argument);

    cfg = small_mclaw_config();
    cfg.algorithm = Algorithm::bht;
    cfg.ell = 3;
    CHECK_THROWS_AS(run_trials(cfg), std::invalid_argument);

    // Infeasible statevector size fails before any trial runs.
    cfg = small_mclaw_config();
    cfg.backend = Backend::statevector;
    cfg.n_values = {1ull << 22};
    CHECK_THROWS_AS(run_trials(cfg), std::invalid_argument);
}

TEST_CASE("statevector harness runs at feasible sizes") {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::mclaw;
    cfg.ell = 2;
    cfg.n_values = {64};
    cfg.trials = 4;
    cfg.backend = Backend::statevector;
    cfg.base_seed = 3;
    for (const auto& r : run_trials(cfg)) {
        CHECK(r.success == !r.aborted);
    }
}

TEST_CASE("bht battery reproduces the cube-root exponent") {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::bht;
    cfg.ell = 2;
    for (unsigned lg = 12; lg <= 18; lg += 2) cfg.n_values.push_back(1ull << lg);
    cfg.trials = 200;
    cfg.base_seed = 23;
    const auto records = run_trials(cfg);
    const auto fit = fit_scaling_exponent(records);
    CHECK(std::abs(fit.slope - 1.0 / 3.0) <= 0.05);
    for (const auto& r : records) CHECK(r.success == !r.aborted);
}

TEST_CASE("mclaw median queries grow with N") {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::mclaw;
    cfg.ell = 2;
    cfg.n_values = {1ull << 10, 1ull << 12, 1ull << 14};
    cfg.trials = 100;
    cfg.base_seed = 29;
    const auto records = run_trials(cfg);
    double prev = 0.0;
    for (std::uint64_t n : cfg.n_values) {
        const double med = *median_queries(records, n);
        CHECK(med >= prev);
        prev = med;
    }
}

TEST_CASE("collision-via-claw succeeds as often as the claw finder") {
    // Paired batteries at N = 2^18, 500 trials each.
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::mclaw;
    cfg.ell = 2;
    cfg.n_values = {1ull << 18};
    cfg.trials = 500;
    cfg.base_seed = 31;
    const auto direct = run_trials(cfg);
    cfg.algorithm = Algorithm::mcollision;
    const auto reduced = run_trials(cfg);
    const auto rate = [](const std::vector<TrialRecord>& rs) {
        std::size_t ok = 0;
        for (const auto& r : rs) ok += r.success;
        return static_cast<double>(ok) / static_cast<double>(rs.size());
    };
    CHECK(std::abs(rate(direct) - rate(reduced)) <= 0.05);
}

TEST_CASE("default query caps") {
    CHECK(default_query_cap(Algorithm::mclaw, 2, 512, 1.0, 4) == query_limit(4, 2, 512, 1.0));
    CHECK(default_query_cap(Algorithm::mcollision, 3, 512, 1.0, 2) ==
          query_limit(2, 3, 512, 1.0));
    // bht: k * 169 * ell * N^{1/3} with ell = 2.
    CHECK(default_query_cap(Algorithm::bht, 2, 512, 1.0, 2) == 2 * 169 * 2 * 8);
    // multigrover: exponent 1/2.
    CHECK(default_query_cap(Algorithm::multigrover, 2, 1 << 10, 1.0, 2) == 2 * 169 * 2 * 32);
}

TEST_CASE("emit_report writes the records file and the summary") {
    auto cfg = small_mclaw_config();
    cfg.trials = 5;
    const auto records = run_trials(cfg);
    const auto paths = emit_report(cfg, records, nullptr, "/tmp/qclaw_test_report", "csv");
    REQUIRE(paths.size() == 2);
    std::ifstream csv(paths[0]);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "algorithm,ell,N,c_N,k,seed,queries,aborted,success,peak_list_size");
    std::ifstream summary(paths[1]);
    REQUIRE(summary.good());
    const auto j = nlohmann::json::parse(summary);
    CHECK(j["per_n"].size() == 1);

    const auto jpaths = emit_report(cfg, records, nullptr, "/tmp/qclaw_test_report", "json");
    const auto rows = nlohmann::json::parse(std::ifstream(jpaths[0]));
    CHECK(rows.size() == records.size());
    CHECK_THROWS_AS(emit_report(cfg, records, nullptr, "/tmp/qclaw_test_report", "xml"),
                    std::invalid_argument);
}
