#include "qclaw/function_table.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace qclaw {

FunctionTable::FunctionTable(std::uint64_t range_size, std::vector<std::uint32_t> values)
    : range_size_(range_size), values_(std::move(values)) {
    if (range_size_ == 0) throw std::invalid_argument("FunctionTable: range_size must be positive");
    if (values_.empty()) throw std::invalid_argument("FunctionTable: domain must be non-empty");
    for (std::uint32_t v : values_) {
        if (v >= range_size_) throw std::invalid_argument("FunctionTable: value out of range");
    }
}

std::uint32_t FunctionTable::operator()(std::uint64_t x) const {
    if (x >= values_.size()) throw std::invalid_argument("FunctionTable: input out of domain");
    return values_[x];
}

FunctionTable sample_random_function(std::uint64_t domain_size, std::uint64_t range_size,
                                     std::uint64_t seed) {
    if (domain_size == 0 || range_size == 0) {
        throw std::invalid_argument("sample_random_function: zero-sized domain or range");
    }
    if (range_size > std::uint64_t{std::numeric_limits<std::uint32_t>::max()} + 1) {
        throw std::invalid_argument("sample_random_function: range_size exceeds 2^32");
    }
    Rng rng(seed);
    std::vector<std::uint32_t> values(domain_size);
    if ((range_size & (range_size - 1)) == 0) {
        const std::uint64_t mask = range_size - 1;
        for (auto& v : values) v = static_cast<std::uint32_t>(rng.next_u64() & mask);
    } else {
        for (auto& v : values) v = static_cast<std::uint32_t>(rng.below(range_size));
    }
    return FunctionTable(range_size, std::move(values));
}

FunctionTable sample_two_to_one_function(std::uint64_t range_size, std::uint64_t seed) {
    if (range_size == 0) throw std::invalid_argument("sample_two_to_one_function: empty range");
    std::vector<std::uint32_t> values(2 * range_size);
    for (std::uint64_t y = 0; y < range_size; ++y) {
        values[2 * y] = static_cast<std::uint32_t>(y);
        values[2 * y + 1] = static_cast<std::uint32_t>(y);
    }
    Rng rng(seed);
    for (std::uint64_t i = values.size() - 1; i > 0; --i) {
        std::swap(values[i], values[rng.below(i + 1)]);
    }
    return FunctionTable(range_size, std::move(values));
}

std::uint64_t image_size(const FunctionTable& f) {
    // Flag array when the range is small enough, otherwise sort-based count.
    if (f.range_size() <= (1ull << 26)) {
        std::vector<std::uint8_t> seen(f.range_size(), 0);
        std::uint64_t count = 0;
        for (std::uint32_t v : f.values()) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
            }
        }
        return count;
    }
    std::vector<std::uint32_t> sorted(f.values().begin(), f.values().end());
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::uint64_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

bool verify_claw(std::span<const FunctionTable> functions, const ClawWitness& w) {
    if (functions.size() != w.inputs.size()) {
        throw std::invalid_argument("verify_claw: witness arity does not match function count");
    }
    for (std::size_t i = 0; i < functions.size(); ++i) {
        if ((*(functions.begin() + i))(w.inputs[i]) != w.y) return false;
    }
    return true;
}

bool verify_collision(const FunctionTable& f, const CollisionWitness& w) {
    if (w.inputs.empty()) return false;
    for (std::size_t i = 0; i < w.inputs.size(); ++i) {
        if (w.inputs[i] >= f.domain_size()) return false;
        if (f.value(w.inputs[i]) != w.y) return false;
        for (std::size_t j = i + 1; j < w.inputs.size(); ++j) {
            if (w.inputs[i] == w.inputs[j]) return false;
        }
    }
    return true;
}

std::vector<IndexRange> partition_domain(std::uint64_t domain_size, unsigned ell) {
    if (ell == 0 || domain_size < ell) {
        throw std::invalid_argument("partition_domain: domain smaller than part count");
    }
    const std::uint64_t base = domain_size / ell;
    const std::uint64_t extra = domain_size % ell;
    std::vector<IndexRange> ranges;
    ranges.reserve(ell);
    std::uint64_t begin = 0;
    for (unsigned i = 0; i < ell; ++i) {
        const std::uint64_t size = base + (i < extra ? 1 : 0);
        ranges.push_back({begin, begin + size});
        begin += size;
    }
    return ranges;
}

FunctionTable restrict_domain(const FunctionTable& f, std::uint64_t new_size) {
    if (new_size == 0 || new_size > f.domain_size()) {
        throw std::invalid_argument("restrict_domain: bad new domain size");
    }
    std::vector<std::uint32_t> values(f.values().begin(), f.values().begin() + new_size);
    return FunctionTable(f.range_size(), std::move(values));
}

FunctionTable slice_domain(const FunctionTable& f, IndexRange range) {
    if (range.begin >= range.end || range.end > f.domain_size()) {
        throw std::invalid_argument("slice_domain: bad range");
    }
    std::vector<std::uint32_t> values(f.values().begin() + range.begin,
                                      f.values().begin() + range.end);
    return FunctionTable(f.range_size(), std::move(values));
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw std::runtime_error("function table: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
    return v;
}

}  // namespace

void save_function_binary(const FunctionTable& f, std::ostream& out) {
    put_u64(out, f.domain_size());
    put_u64(out, f.range_size());
    for (std::uint32_t v : f.values()) {
        char buf[4];
        for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out.write(buf, 4);
    }
}

FunctionTable load_function_binary(std::istream& in) {
    const std::uint64_t domain = get_u64(in);
    const std::uint64_t range = get_u64(in);
    std::vector<std::uint32_t> values(domain);
    for (auto& v : values) {
        unsigned char buf[4];
        in.read(reinterpret_cast<char*>(buf), 4);
        if (!in) throw std::runtime_error("function table: truncated values");
        v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{buf[i]} << (8 * i);
    }
    return FunctionTable(range, std::move(values));
}

void save_function_binary(const FunctionTable& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_function_binary(f, out);
}

FunctionTable load_function_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_function_binary(in);
}

std::string function_to_json(const FunctionTable& f) {
    nlohmann::json j;
    j["domain_size"] = f.domain_size();
    j["range_size"] = f.range_size();
    j["values"] = std::vector<std::uint32_t>(f.values().begin(), f.values().end());
    return j.dump();
}

FunctionTable function_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    auto values = j.at("values").get<std::vector<std::uint32_t>>();
    if (values.size() != j.at("domain_size").get<std::uint64_t>()) {
        throw std::invalid_argument("function table json: domain_size mismatch");
    }
    return FunctionTable(j.at("range_size").get<std::uint64_t>(), std::move(values));
}

}  // namespace qclaw
