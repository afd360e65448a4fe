#pragma once

// Shared test support: independent oracles the suites check simulator output
// against, plus a small random-execution generator for clock/causality tests.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "snapsim/event_log.hpp"
#include "snapsim/rng.hpp"
#include "snapsim/snapshot_types.hpp"
#include "snapsim/vector_clock.hpp"

namespace snapsim::test {

// Brute-force in-transit oracle: a message is in transit at the cut iff its
// send precedes the sender's record and its delivery follows the receiver's
// record, by log position. Lists are in delivery order, matching how channel
// state accumulates.
inline std::map<ChannelId, std::vector<MsgId>> in_transit_by_channel(const EventLog& log) {
    std::map<ProcessId, std::size_t> record_pos;
    for (std::size_t pos = 0; pos < log.entries.size(); ++pos)
        if (log.entries[pos].kind == LogKind::Record) record_pos[log.entries[pos].pid] = pos;

    struct Track {
        std::size_t send_pos = 0;
        std::size_t deliver_pos = 0;
        bool delivered = false;
        ChannelId channel{};
    };
    std::map<MsgId, Track> msgs;
    for (std::size_t pos = 0; pos < log.entries.size(); ++pos) {
        const LogEntry& e = log.entries[pos];
        if (e.wire != WireKind::App) continue;
        if (e.kind == LogKind::Send) {
            msgs[e.msg].send_pos = pos;
            msgs[e.msg].channel = e.channel;
        } else if (e.kind == LogKind::Deliver) {
            msgs[e.msg].deliver_pos = pos;
            msgs[e.msg].delivered = true;
        }
    }

    // Sort by delivery position per channel.
    std::map<ChannelId, std::vector<std::pair<std::size_t, MsgId>>> tmp;
    for (const auto& [id, t] : msgs) {
        if (!t.delivered) continue;
        auto rs = record_pos.find(t.channel.src);
        auto rd = record_pos.find(t.channel.dst);
        if (rs == record_pos.end() || rd == record_pos.end()) continue;
        if (t.send_pos < rs->second && t.deliver_pos > rd->second)
            tmp[t.channel].emplace_back(t.deliver_pos, id);
    }
    std::map<ChannelId, std::vector<MsgId>> out;
    for (auto& [ch, v] : tmp) {
        std::sort(v.begin(), v.end());
        for (auto& [pos, id] : v) out[ch].push_back(id);
    }
    return out;
}

// Non-empty recorded channel states across all processes, flattened for
// comparison against in_transit_by_channel.
inline std::map<ChannelId, std::vector<MsgId>> snapshot_channel_states(const GlobalSnapshot& snap) {
    std::map<ChannelId, std::vector<MsgId>> out;
    for (const LocalSnapshot& local : snap.locals)
        for (const auto& [ch, msgs] : local.channel_states)
            if (!msgs.empty()) out[ch] = msgs;
    return out;
}

// Synthetic execution with per-event vector clocks maintained by the textbook
// discipline (tick on send; merge then tick on deliver). Times are step
// numbers; causality lives in the log positions.
struct GeneratedExecution {
    EventLog log;
    std::vector<std::optional<VectorClock>> event_vc; // per log position
};

inline GeneratedExecution generate_execution(RngStream& rng, std::uint32_t n_procs,
                                             std::uint32_t target_events) {
    GeneratedExecution out;
    std::vector<VectorClock> clocks(n_procs, VectorClock(n_procs));
    struct InFlight {
        MsgId id;
        ChannelId ch;
        VectorClock vc;
    };
    std::vector<InFlight> flying;
    MsgId next_id = 1;
    VirtualTime t = 0.0;

    auto do_send = [&] {
        ProcessId src = rng.uniform_below(n_procs);
        ProcessId dst = (src + 1 + rng.uniform_below(n_procs - 1)) % n_procs;
        clocks[src] = tick(clocks[src], src);
        ChannelId ch{src, dst};
        out.log.send(t, ch, next_id, WireKind::App);
        out.event_vc.push_back(clocks[src]);
        flying.push_back({next_id, ch, clocks[src]});
        ++next_id;
    };
    auto do_deliver = [&] {
        std::size_t i = rng.uniform_below(static_cast<std::uint32_t>(flying.size()));
        InFlight m = flying[i];
        flying.erase(flying.begin() + static_cast<std::ptrdiff_t>(i));
        ProcessId dst = m.ch.dst;
        clocks[dst] = tick(merge(clocks[dst], m.vc), dst);
        out.log.deliver(t, m.ch, m.id, WireKind::App);
        out.event_vc.push_back(clocks[dst]);
    };

    while (out.log.size() < target_events) {
        t += 1.0;
        if (!flying.empty() && rng.uniform_below(2) == 0) do_deliver();
        else do_send();
    }
    while (!flying.empty()) {
        t += 1.0;
        do_deliver();
    }
    return out;
}

} // namespace snapsim::test
