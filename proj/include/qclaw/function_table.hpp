#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qclaw/rng.hpp"

namespace qclaw {

/// An explicitly tabulated function f : [0,|X|) -> [0,|Y|).
///
/// This is the simulated oracle: every algorithm queries it only through the
/// metered search engines, while verifiers and bookkeeping read it for free.
/// Tables are immutable after construction and safe to share across threads.
class FunctionTable {
public:
    FunctionTable() = default;
    FunctionTable(std::uint64_t range_size, std::vector<std::uint32_t> values);

    std::uint64_t domain_size() const { return values_.size(); }
    std::uint64_t range_size() const { return range_size_; }

    // Bounds-checked evaluation; throws std::invalid_argument on bad x.
    std::uint32_t operator()(std::uint64_t x) const;

    // Unchecked evaluation for hot loops.
    std::uint32_t value(std::uint64_t x) const { return values_[x]; }

    std::span<const std::uint32_t> values() const { return values_; }

private:
    std::uint64_t range_size_ = 1;
    std::vector<std::uint32_t> values_;
};

/// One input per function, all mapping to the same y.
struct ClawWitness {
    std::vector<std::uint64_t> inputs;
    std::uint32_t y = 0;
};

/// Pairwise-distinct inputs of a single function mapping to the same y.
struct CollisionWitness {
    std::vector<std::uint64_t> inputs;
    std::uint32_t y = 0;
};

struct IndexRange {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
    std::uint64_t size() const { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

// Each entry drawn independently and uniformly from [0, range_size).
// Deterministic for a fixed seed.
FunctionTable sample_random_function(std::uint64_t domain_size, std::uint64_t range_size,
                                     std::uint64_t seed);

// Uniform random two-to-one function [0,2N) -> [0,N): a random perfect
// pairing of the domain onto the range.
FunctionTable sample_two_to_one_function(std::uint64_t range_size, std::uint64_t seed);

// |Im(f)| = number of distinct values in the table.
std::uint64_t image_size(const FunctionTable& f);

// True iff f_i(inputs[i]) == y for every i. Functions and inputs must have
// equal lengths; out-of-domain inputs are rejected.
bool verify_claw(std::span<const FunctionTable> functions, const ClawWitness& w);

// True iff the inputs are pairwise distinct, in-domain, and all map to y.
bool verify_collision(const FunctionTable& f, const CollisionWitness& w);

// ell disjoint contiguous ranges covering [0, domain_size), sizes differing
// by at most one.
std::vector<IndexRange> partition_domain(std::uint64_t domain_size, unsigned ell);

// Truncates the table to its first new_size entries.
FunctionTable restrict_domain(const FunctionTable& f, std::uint64_t new_size);

// Copy of the slice values[range.begin, range.end) as its own table.
FunctionTable slice_domain(const FunctionTable& f, IndexRange range);

// Flat little-endian serialization: u64 domain_size, u64 range_size, then
// one u32 per value.
void save_function_binary(const FunctionTable& f, std::ostream& out);
FunctionTable load_function_binary(std::istream& in);
void save_function_binary(const FunctionTable& f, const std::string& path);
FunctionTable load_function_binary(const std::string& path);

std::string function_to_json(const FunctionTable& f);
FunctionTable function_from_json(const std::string& text);

}  // namespace qclaw
