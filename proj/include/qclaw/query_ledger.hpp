#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qclaw {

/// Running oracle-query counter with an optional hard cap.
///
/// charge() saturates at the cap: once total() reaches it the ledger is
/// exhausted and the caller must stop and output bottom. total() never
/// exceeds the cap.
class QueryLedger {
public:
    static constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

    explicit QueryLedger(std::uint64_t cap = kUnbounded, std::size_t stages = 1)
        : cap_(cap), per_stage_(stages ? stages : 1, 0) {
        if (cap_ == 0) throw std::invalid_argument("QueryLedger: cap must be positive");
    }

    void set_stage(std::size_t stage) {
        if (stage >= per_stage_.size()) per_stage_.resize(stage + 1, 0);
        stage_ = stage;
    }

    // Adds `amount` queries to the current stage. Returns false when the cap
    // was reached; the truncated remainder is still recorded so that
    // total() == cap() exactly on exhaustion.
    [[nodiscard]] bool charge(std::uint64_t amount) {
        if (cap_ != kUnbounded && amount >= cap_ - total_) {
            per_stage_[stage_] += cap_ - total_;
            total_ = cap_;
            return false;
        }
        total_ += amount;
        per_stage_[stage_] += amount;
        return true;
    }

    bool exhausted() const { return cap_ != kUnbounded && total_ == cap_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t cap() const { return cap_; }
    const std::vector<std::uint64_t>& per_stage() const { return per_stage_; }

private:
    std::uint64_t total_ = 0;
    std::uint64_t cap_;
    std::size_t stage_ = 0;
    std::vector<std::uint64_t> per_stage_;
};

}  // namespace qclaw
