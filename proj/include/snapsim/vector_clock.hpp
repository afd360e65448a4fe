#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snapsim/errors.hpp"
#include "snapsim/types.hpp"

namespace snapsim {

enum class ClockOrder { Equal, Before, After, Concurrent };

inline const char* clock_order_name(ClockOrder o) {
    switch (o) {
        case ClockOrder::Equal: return "equal";
        case ClockOrder::Before: return "before";
        case ClockOrder::After: return "after";
        case ClockOrder::Concurrent: return "concurrent";
    }
    return "?";
}

// Plain value-semantics vector clock; entry i counts events at process i known
// to be in the causal past.
class VectorClock {
  public:
    VectorClock() = default;
    explicit VectorClock(std::size_t n) : entries_(n, 0) {}
    explicit VectorClock(std::vector<std::uint64_t> entries) : entries_(std::move(entries)) {}

    std::size_t size() const { return entries_.size(); }
    std::uint64_t operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<std::uint64_t>& entries() const { return entries_; }
    bool operator==(const VectorClock&) const = default;

    // Rendered as "[3,0,1]" in traces and diagnostics.
    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(entries_[i]);
        }
        out += ']';
        return out;
    }

  private:
    friend VectorClock tick(const VectorClock&, ProcessId);
    friend VectorClock merge(const VectorClock&, const VectorClock&);

    std::vector<std::uint64_t> entries_;
};

inline VectorClock tick(const VectorClock& vc, ProcessId pid) {
    if (pid >= vc.size())
        throw BadProcessIdError("tick: pid " + std::to_string(pid) + " out of range for clock of size " +
                                std::to_string(vc.size()));
    VectorClock out = vc;
    ++out.entries_[pid];
    return out;
}

inline VectorClock merge(const VectorClock& a, const VectorClock& b) {
    if (a.size() != b.size())
        throw LengthMismatchError("merge: clock sizes differ (" + std::to_string(a.size()) + " vs " +
                                  std::to_string(b.size()) + ")");
    VectorClock out = a;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b.entries_[i] > out.entries_[i]) out.entries_[i] = b.entries_[i];
    return out;
}

inline ClockOrder compare(const VectorClock& a, const VectorClock& b) {
    if (a.size() != b.size())
        throw LengthMismatchError("compare: clock sizes differ (" + std::to_string(a.size()) + " vs " +
                                  std::to_string(b.size()) + ")");
    bool a_below = false; // some entry of a < b
    bool b_below = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) a_below = true;
        if (b[i] < a[i]) b_below = true;
    }
    if (!a_below && !b_below) return ClockOrder::Equal;
    if (a_below && !b_below) return ClockOrder::Before;
    if (b_below && !a_below) return ClockOrder::After;
    return ClockOrder::Concurrent;
}

} // namespace snapsim
