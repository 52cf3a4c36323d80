#include <doctest.h>

#include <set>
#include <sstream>

#include "qclaw/bounds.hpp"
#include "qclaw/function_table.hpp"
#include "test_support.hpp"

using namespace qclaw;

TEST_CASE("sample_random_function basics") {
    const auto only = sample_random_function(1, 1, 42);
    CHECK(only.domain_size() == 1);
    CHECK(only.value(0) == 0);  // only one function exists

    const auto a = sample_random_function(8, 256, 12345);
    const auto b = sample_random_function(8, 256, 12345);
    CHECK(std::vector(a.values().begin(), a.values().end()) ==
          std::vector(b.values().begin(), b.values().end()));

    const auto c = sample_random_function(64, 256, 99);
    const auto d = sample_random_function(64, 256, 100);
    CHECK(std::vector(c.values().begin(), c.values().end()) !=
          std::vector(d.values().begin(), d.values().end()));

    CHECK_THROWS_AS(sample_random_function(0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_random_function(4, 0, 1), std::invalid_argument);
}

TEST_CASE("sampler uniformity by chi-square") {
    // Power-of-two fast path, expected count 1 per cell.
    {
        const std::uint64_t n = 1ull << 20;
        const auto f = sample_random_function(n, n, 20240601);
        std::vector<std::uint32_t> counts(n, 0);
        for (std::uint32_t v : f.values()) ++counts[v];
        double stat = 0.0;
        for (std::uint32_t cnt : counts) {
            const double d = static_cast<double>(cnt) - 1.0;
            stat += d * d;
        }
        CHECK(testsupport::chi_square_pvalue(stat, static_cast<double>(n - 1)) > 0.01);
    }
    // Non-power-of-two range with a comfortable expected count per cell.
    {
        const std::uint64_t range = 1000;
        const std::uint64_t domain = 1ull << 20;
        const auto f = sample_random_function(domain, range, 777);
        std::vector<std::uint64_t> counts(range, 0);
        for (std::uint32_t v : f.values()) ++counts[v];
        const double expect = static_cast<double>(domain) / static_cast<double>(range);
        double stat = 0.0;
        for (std::uint64_t cnt : counts) {
            const double d = static_cast<double>(cnt) - expect;
            stat += d * d / expect;
        }
        CHECK(testsupport::chi_square_pvalue(stat, static_cast<double>(range - 1)) > 0.01);
    }
}

TEST_CASE("image_size") {
    CHECK(image_size(FunctionTable(8, std::vector<std::uint32_t>(8, 3))) == 1);

    std::vector<std::uint32_t> ident(16);
    for (std::uint32_t i = 0; i < 16; ++i) ident[i] = i;
    CHECK(image_size(FunctionTable(16, ident)) == 16);

    // Brute-force equivalence against a plain set.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = sample_random_function(50 + seed * 7, 30, seed);
        std::set<std::uint32_t> dedup(f.values().begin(), f.values().end());
        CHECK(image_size(f) == dedup.size());
    }
}

TEST_CASE("image size lower bound holds empirically") {
    // Threshold from the closed-form bound; violations should be rarer than
    // 2/|Y| plus slack.
    const double threshold = image_size_bound(1024, 1024);
    CHECK(threshold == doctest::Approx(452.42724142305545).epsilon(1e-12));
    int below = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const auto f = sample_random_function(1024, 1024, Rng::derive(5150, t));
        if (static_cast<double>(image_size(f)) < threshold) ++below;
    }
    CHECK(static_cast<double>(below) / 1000.0 <= 2.0 / 1024.0 + 0.01);
}

TEST_CASE("verify_claw") {
    std::vector<std::uint32_t> ident{0, 1, 2, 3};
    const FunctionTable f(4, ident);
    const std::vector<FunctionTable> fs{f, f};
    CHECK(verify_claw(fs, ClawWitness{{2, 2}, 2}));
    CHECK_FALSE(verify_claw(fs, ClawWitness{{2, 3}, 2}));
    CHECK_THROWS_AS((void)verify_claw(fs, ClawWitness{{2, 2, 2}, 2}), std::invalid_argument);
    CHECK_THROWS_AS((void)verify_claw(fs, ClawWitness{{2, 9}, 2}), std::invalid_argument);
}

TEST_CASE("verify_collision") {
    std::vector<std::uint32_t> halves(8);
    for (std::uint32_t x = 0; x < 8; ++x) halves[x] = x / 2;
    const FunctionTable f(4, halves);
    CHECK(verify_collision(f, CollisionWitness{{4, 5}, 2}));
    CHECK_FALSE(verify_collision(f, CollisionWitness{{4, 4}, 2}));  // not distinct
    CHECK_FALSE(verify_collision(f, CollisionWitness{{4, 6}, 2}));

    const FunctionTable constant(7, std::vector<std::uint32_t>(8, 5));
    CHECK(verify_collision(constant, CollisionWitness{{0, 1, 2}, 5}));
    CHECK_FALSE(verify_collision(constant, CollisionWitness{{0, 1, 99}, 5}));  // out of domain
}

TEST_CASE("partition_domain") {
    const auto thirds = partition_domain(12, 3);
    CHECK(thirds == std::vector<IndexRange>{{0, 4}, {4, 8}, {8, 12}});

    const auto uneven = partition_domain(13, 3);
    CHECK(uneven[0].size() == 5);
    CHECK(uneven[1].size() == 4);
    CHECK(uneven[2].size() == 4);

    const auto exact = partition_domain(4 * 32, 4);
    for (const auto& r : exact) CHECK(r.size() == 32);

    CHECK_THROWS_AS(partition_domain(2, 3), std::invalid_argument);

    // Disjoint cover for every small configuration.
    for (std::uint64_t domain = 1; domain <= 100; ++domain) {
        for (unsigned ell = 1; ell <= domain; ++ell) {
            const auto parts = partition_domain(domain, ell);
            REQUIRE(parts.size() == ell);
            std::uint64_t expected_begin = 0;
            for (const auto& r : parts) {
                CHECK(r.begin == expected_begin);  // contiguous, hence disjoint
                CHECK(r.end > r.begin);
                expected_begin = r.end;
            }
            CHECK(expected_begin == domain);
        }
    }
}

TEST_CASE("restrict_domain") {
    const auto f = sample_random_function(8, 16, 3);
    const auto same = restrict_domain(f, 8);
    CHECK(std::vector(same.values().begin(), same.values().end()) ==
          std::vector(f.values().begin(), f.values().end()));

    const auto head = restrict_domain(f, 4);
    CHECK(head.domain_size() == 4);
    for (std::uint64_t x = 0; x < 4; ++x) CHECK(head.value(x) == f.value(x));

    CHECK_THROWS_AS(restrict_domain(f, 9), std::invalid_argument);
}

TEST_CASE("claw of restrictions is a collision of the whole function") {
    // Exhaustive over every function with |X| <= 6, |Y| <= 4, ell in {2,3}.
    for (unsigned ell = 2; ell <= 3; ++ell) {
        for (std::uint64_t domain = ell; domain <= 6; ++domain) {
            for (std::uint64_t range = 1; range <= 4; ++range) {
                std::vector<std::uint32_t> values(domain, 0);
                for (;;) {
                    const FunctionTable f(range, values);
                    const auto ranges = partition_domain(domain, ell);
                    std::vector<FunctionTable> parts;
                    for (const auto& r : ranges) parts.push_back(slice_domain(f, r));

                    // Every claw of the parts must remap to a valid collision.
                    std::vector<std::uint64_t> xs(ell, 0);
                    for (;;) {
                        const std::uint32_t y = parts[0].value(xs[0]);
                        ClawWitness w{xs, y};
                        if (verify_claw(parts, w)) {
                            CollisionWitness c;
                            c.y = y;
                            for (unsigned i = 0; i < ell; ++i) {
                                c.inputs.push_back(ranges[i].begin + xs[i]);
                            }
                            CHECK(verify_collision(f, c));
                        }
                        unsigned pos = 0;
                        while (pos < ell && ++xs[pos] == parts[pos].domain_size()) {
                            xs[pos++] = 0;
                        }
                        if (pos == ell) break;
                    }

                    std::uint64_t carry = 0;
                    while (carry < domain && ++values[carry] == range) values[carry++] = 0;
                    if (carry == domain) break;
                }
            }
        }
    }
}

TEST_CASE("binary and json serialization round-trip") {
    const auto f = sample_random_function(37, 100, 8);

    std::stringstream buf;
    save_function_binary(f, buf);
    // header: little-endian domain then range
    const std::string raw = buf.str();
    REQUIRE(raw.size() == 16 + 4 * 37);
    CHECK(static_cast<unsigned char>(raw[0]) == 37);
    CHECK(static_cast<unsigned char>(raw[8]) == 100);
    const auto back = load_function_binary(buf);
    CHECK(back.range_size() == f.range_size());
    CHECK(std::vector(back.values().begin(), back.values().end()) ==
          std::vector(f.values().begin(), f.values().end()));

    const auto jback = function_from_json(function_to_json(f));
    CHECK(jback.range_size() == f.range_size());
    CHECK(std::vector(jback.values().begin(), jback.values().end()) ==
          std::vector(f.values().begin(), f.values().end()));
}

TEST_CASE("two-to-one sampler") {
    const auto f = sample_two_to_one_function(64, 11);
    REQUIRE(f.domain_size() == 128);
    std::vector<int> counts(64, 0);
    for (std::uint32_t v : f.values()) ++counts[v];
    for (int c : counts) CHECK(c == 2);

    const auto again = sample_two_to_one_function(64, 11);
    CHECK(std::vector(f.values().begin(), f.values().end()) ==
          std::vector(again.values().begin(), again.values().end()));
}

TEST_CASE("function table validation") {
    CHECK_THROWS_AS(FunctionTable(4, {0, 1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(FunctionTable(0, {0}), std::invalid_argument);
    const FunctionTable f(4, {0, 1, 2});
    CHECK_THROWS_AS((void)f(3), std::invalid_argument);
    CHECK(f(2) == 2);
}
