#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

namespace snapsim {

using ProcessId = std::uint32_t;
using MsgId = std::uint64_t;
using EventId = std::uint64_t;

// Simulated time in abstract units. Non-negative and finite everywhere.
using VirtualTime = double;

// Directed channel between two distinct processes.
struct ChannelId {
    ProcessId src = 0;
    ProcessId dst = 0;

    auto operator<=>(const ChannelId&) const = default;
};

// Fixed-point rendering shared by the trace log and the CSV outputs.
inline std::string format_time(VirtualTime t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    return std::string(buf);
}

inline std::string channel_str(ChannelId ch) {
    return std::to_string(ch.src) + "->" + std::to_string(ch.dst);
}

} // namespace snapsim
