#include "snapsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "snapsim/errors.hpp"

namespace snapsim {

DurationStats duration_stats(const std::vector<RecordingWindow>& windows, std::size_t n_processes) {
    std::vector<const RecordingWindow*> by_pid(n_processes, nullptr);
    for (const auto& w : windows) {
        if (w.pid >= n_processes)
            throw MissingWindowError("window for pid " + std::to_string(w.pid) + " outside 0.." +
                                     std::to_string(n_processes ? n_processes - 1 : 0));
        if (by_pid[w.pid])
            throw MissingWindowError("duplicate window for pid " + std::to_string(w.pid));
        by_pid[w.pid] = &w;
    }

    DurationStats out;
    out.durations.reserve(n_processes);
    for (std::size_t pid = 0; pid < n_processes; ++pid) {
        if (!by_pid[pid]) throw MissingWindowError("no window for pid " + std::to_string(pid));
        out.durations.push_back(by_pid[pid]->duration());
        if (by_pid[pid]->finalized_at_quiescence) ++out.finalized_count;
    }

    if (out.durations.empty()) return out;
    double sum = 0.0;
    out.min = out.durations.front();
    out.max = out.durations.front();
    for (double d : out.durations) {
        sum += d;
        out.min = std::min(out.min, d);
        out.max = std::max(out.max, d);
    }
    out.mean = sum / static_cast<double>(out.durations.size());
    double var = 0.0;
    for (double d : out.durations) var += (d - out.mean) * (d - out.mean);
    out.stddev = std::sqrt(var / static_cast<double>(out.durations.size()));
    return out;
}

namespace {

struct MsgTrack {
    std::size_t send_pos = 0;
    std::size_t deliver_pos = 0;
    bool sent = false;
    bool delivered = false;
    ChannelId channel{};
    WireKind wire = WireKind::App;
};

} // namespace

CutCheck verify_consistent_cut(const GlobalSnapshot& snapshot, const EventLog& log) {
    // Record position per process; message send/deliver positions.
    std::map<ProcessId, std::size_t> record_pos;
    std::map<MsgId, MsgTrack> msgs;
    for (std::size_t pos = 0; pos < log.entries.size(); ++pos) {
        const LogEntry& e = log.entries[pos];
        switch (e.kind) {
            case LogKind::Record:
                if (record_pos.count(e.pid))
                    throw IncompleteLogError("two record entries for pid " + std::to_string(e.pid));
                record_pos[e.pid] = pos;
                break;
            case LogKind::Send: {
                auto& t = msgs[e.msg];
                if (t.sent) throw IncompleteLogError("two send entries for msg " + std::to_string(e.msg));
                t.sent = true;
                t.send_pos = pos;
                t.channel = e.channel;
                t.wire = e.wire;
                break;
            }
            case LogKind::Deliver: {
                auto& t = msgs[e.msg];
                if (t.delivered)
                    throw IncompleteLogError("two deliver entries for msg " + std::to_string(e.msg));
                t.delivered = true;
                t.deliver_pos = pos;
                break;
            }
        }
    }
    for (const auto& [id, t] : msgs) {
        if (!t.sent) throw IncompleteLogError("deliver without send for msg " + std::to_string(id));
        if (!t.delivered) throw IncompleteLogError("send without deliver for msg " + std::to_string(id));
        if (!(t.send_pos < t.deliver_pos))
            throw IncompleteLogError("deliver precedes send for msg " + std::to_string(id));
    }
    for (const auto& local : snapshot.locals) {
        if (!record_pos.count(local.pid))
            throw IncompleteLogError("no record entry for pid " + std::to_string(local.pid));
    }

    std::optional<CutCheck> best;
    auto offer = [&](char rule, MsgId id, std::string detail) {
        if (!best || id < best->msg || (id == best->msg && rule < best->rule))
            best = CutCheck{false, rule, id, std::move(detail)};
    };

    // Rule (a): a message delivered before the receiver recorded must have
    // been sent before the sender recorded (no orphans). Applies to all
    // traffic, control included.
    for (const auto& [id, t] : msgs) {
        std::size_t rs = record_pos.at(t.channel.src);
        std::size_t rd = record_pos.at(t.channel.dst);
        if (t.deliver_pos < rd && t.send_pos > rs)
            offer('a', id,
                  "msg " + std::to_string(id) + " on " + channel_str(t.channel) +
                      " delivered pre-record but sent post-record");
    }

    // Rules (b)/(c) are about recorded channel state, which only covers app
    // traffic. Index the captured ids per destination first.
    std::map<ProcessId, const LocalSnapshot*> locals;
    for (const auto& local : snapshot.locals) locals[local.pid] = &local;

    for (const auto& [id, t] : msgs) {
        if (t.wire != WireKind::App) continue;
        std::size_t rs = record_pos.at(t.channel.src);
        std::size_t rd = record_pos.at(t.channel.dst);
        bool in_transit = t.send_pos < rs && t.deliver_pos > rd;
        if (!in_transit) continue;
        auto it = locals.find(t.channel.dst);
        bool captured = false;
        if (it != locals.end()) {
            auto cs = it->second->channel_states.find(t.channel);
            if (cs != it->second->channel_states.end())
                captured = std::find(cs->second.begin(), cs->second.end(), id) != cs->second.end();
        }
        if (!captured)
            offer('b', id,
                  "in-transit msg " + std::to_string(id) + " on " + channel_str(t.channel) +
                      " missing from recorded channel state");
    }

    for (const auto& local : snapshot.locals) {
        std::size_t rd = record_pos.at(local.pid);
        for (const auto& [ch, ids] : local.channel_states) {
            for (MsgId id : ids) {
                auto it = msgs.find(id);
                if (it == msgs.end()) {
                    offer('c', id, "recorded msg " + std::to_string(id) + " does not exist in the log");
                    continue;
                }
                const MsgTrack& t = it->second;
                std::size_t rs = record_pos.at(ch.src);
                bool in_transit = t.wire == WireKind::App && t.channel == ch && t.send_pos < rs &&
                                  t.deliver_pos > rd;
                if (!in_transit)
                    offer('c', id,
                          "recorded msg " + std::to_string(id) + " on " + channel_str(ch) +
                              " was not in transit at the cut");
            }
        }
    }

    return best ? *best : CutCheck{};
}

HappenedBeforeOracle::HappenedBeforeOracle(const EventLog& log) {
    n_ = log.entries.size();
    words_ = (n_ + 63) / 64;
    reach_.assign(n_ * words_, 0);

    // Successor edges all point forward in the log, so one reverse sweep
    // closes the relation: reach(i) = union over successors s of {s}+reach(s).
    std::vector<std::size_t> next_at_pid; // next entry of the same process
    std::vector<std::size_t> deliver_of;  // matching deliver for a send
    const std::size_t none = static_cast<std::size_t>(-1);
    next_at_pid.assign(n_, none);
    deliver_of.assign(n_, none);

    std::map<ProcessId, std::size_t> last_seen;
    for (std::size_t pos = n_; pos-- > 0;) {
        ProcessId pid = log.entries[pos].pid;
        auto it = last_seen.find(pid);
        if (it != last_seen.end()) next_at_pid[pos] = it->second;
        last_seen[pid] = pos;
    }
    std::map<MsgId, std::size_t> deliver_pos;
    for (std::size_t pos = 0; pos < n_; ++pos) {
        const LogEntry& e = log.entries[pos];
        if (e.kind == LogKind::Deliver) deliver_pos[e.msg] = pos;
    }
    for (std::size_t pos = 0; pos < n_; ++pos) {
        const LogEntry& e = log.entries[pos];
        if (e.kind == LogKind::Send) {
            auto it = deliver_pos.find(e.msg);
            if (it != deliver_pos.end()) deliver_of[pos] = it->second;
        }
    }

    auto absorb = [&](std::size_t into, std::size_t succ) {
        if (succ == none) return;
        std::uint64_t* row = &reach_[into * words_];
        const std::uint64_t* srow = &reach_[succ * words_];
        for (std::size_t w = 0; w < words_; ++w) row[w] |= srow[w];
        row[succ / 64] |= 1ull << (succ % 64);
    };
    for (std::size_t pos = n_; pos-- > 0;) {
        absorb(pos, next_at_pid[pos]);
        absorb(pos, deliver_of[pos]);
    }
}

bool HappenedBeforeOracle::happened_before(std::size_t e1, std::size_t e2) const {
    if (e1 >= n_ || e2 >= n_)
        throw UnknownEventError("event index out of range (log has " + std::to_string(n_) + " entries)");
    return (reach_[e1 * words_ + e2 / 64] >> (e2 % 64)) & 1ull;
}

bool happened_before(const EventLog& log, std::size_t e1, std::size_t e2) {
    return HappenedBeforeOracle(log).happened_before(e1, e2);
}

} // namespace snapsim
