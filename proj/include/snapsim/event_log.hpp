#pragma once

#include <cstdint>
#include <vector>

#include "snapsim/messages.hpp"
#include "snapsim/types.hpp"

namespace snapsim {

enum class LogKind : std::uint8_t { Send, Deliver, Record };

struct LogEntry {
    LogKind kind = LogKind::Send;
    VirtualTime time = 0.0;
    ProcessId pid = 0;     // where the event happened
    MsgId msg = 0;         // Send / Deliver
    ChannelId channel{};   // Send / Deliver
    WireKind wire = WireKind::App;
};

// Append-only run history in dispatch order. Positions refine simultaneous
// timestamps: the subsequence at one process is that process's local order,
// which is what the consistency rules compare.
struct EventLog {
    std::vector<LogEntry> entries;

    void send(VirtualTime t, ChannelId ch, MsgId id, WireKind w) {
        entries.push_back({LogKind::Send, t, ch.src, id, ch, w});
    }
    void deliver(VirtualTime t, ChannelId ch, MsgId id, WireKind w) {
        entries.push_back({LogKind::Deliver, t, ch.dst, id, ch, w});
    }
    void record(VirtualTime t, ProcessId pid) {
        entries.push_back({LogKind::Record, t, pid, 0, {}, WireKind::App});
    }

    std::size_t size() const { return entries.size(); }
};

} // namespace snapsim
