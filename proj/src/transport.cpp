#include "snapsim/transport.hpp"

#include <algorithm>

#include "snapsim/errors.hpp"

namespace snapsim {

namespace {

// Shared core of the BSS test so the router can run it against raw matrix
// columns without building VectorClock temporaries per check.
template <class GetMsg, class GetLocal>
bool bss_core(GetMsg msg_at, GetLocal local_at, std::size_t n, ProcessId sender) {
    if (msg_at(sender) != local_at(sender) + 1) return false;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == sender) continue;
        if (msg_at(k) > local_at(k)) return false;
    }
    return true;
}

} // namespace

bool bss_deliverable(const VectorClock& msg_vc, ProcessId sender, const VectorClock& local_vc) {
    if (msg_vc.size() != local_vc.size())
        throw LengthMismatchError("bss_deliverable: clock sizes differ (" + std::to_string(msg_vc.size()) +
                                  " vs " + std::to_string(local_vc.size()) + ")");
    if (sender >= msg_vc.size())
        throw BadProcessIdError("bss_deliverable: sender " + std::to_string(sender) + " out of range");
    return bss_core([&](std::size_t k) { return msg_vc[k]; }, [&](std::size_t k) { return local_vc[k]; },
                    msg_vc.size(), sender);
}

CausalRouter::CausalRouter(std::uint32_t n)
    : n_(n),
      matrix_(n, std::vector<std::uint32_t>(static_cast<std::size_t>(n) * n, 0)),
      delivered_(n, std::vector<std::uint32_t>(n, 0)),
      pending_(n) {}

std::shared_ptr<const CausalStamp> CausalRouter::stamp(ProcessId src, const std::vector<ProcessId>& dsts) {
    auto& m = matrix_[src];
    for (ProcessId dst : dsts) ++m[static_cast<std::size_t>(src) * n_ + dst];
    auto s = std::make_shared<CausalStamp>();
    s->n = n_;
    s->sent = m;
    return s;
}

bool CausalRouter::deliverable_at(const Envelope& env, ProcessId pid) const {
    const CausalStamp& s = *env.stamp;
    ProcessId sender = env.channel().src;
    // Destination column of the stamp against the receiver's delivery counts.
    return bss_core([&](std::size_t k) -> std::uint64_t { return s.sent[k * n_ + pid]; },
                    [&](std::size_t k) -> std::uint64_t { return delivered_[pid][k]; }, n_, sender);
}

void CausalRouter::buffer_arrival(Envelope env) {
    if (!env.stamp) throw MissingVectorClockError("causal transport: arrival without causal stamp");
    ProcessId pid = env.channel().dst;
    pending_[pid].push_back(std::move(env));
    ++pending_total_;
}

std::optional<Envelope> CausalRouter::next_deliverable(ProcessId pid) {
    auto& q = pending_[pid];
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!deliverable_at(q[i], pid)) continue;
        Envelope env = std::move(q[i]);
        q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
        --pending_total_;
        // Delivery: count the sender's message and absorb the stamp's
        // knowledge so later messages' dependencies resolve.
        ++delivered_[pid][env.channel().src];
        auto& m = matrix_[pid];
        const auto& s = env.stamp->sent;
        for (std::size_t c = 0; c < m.size(); ++c) m[c] = std::max(m[c], s[c]);
        return env;
    }
    return std::nullopt;
}

std::vector<Envelope> CausalRouter::drain(ProcessId pid) {
    std::vector<Envelope> out;
    while (auto env = next_deliverable(pid)) out.push_back(std::move(*env));
    return out;
}

Transport::Transport(std::uint32_t n, Ordering ordering, Scheduler& sched)
    : n_(n),
      ordering_(ordering),
      sched_(sched),
      last_arrival_(static_cast<std::size_t>(n) * n, 0.0),
      ready_(n),
      chan_sent_(static_cast<std::size_t>(n) * n, 0),
      chan_delivered_(static_cast<std::size_t>(n) * n, 0) {
    if (ordering_ == Ordering::Causal) causal_.emplace(n);
}

void Transport::schedule_arrival(Envelope env, VirtualTime latency) {
    ChannelId ch = env.channel();
    VirtualTime at = sched_.now() + latency;
    if (ordering_ == Ordering::Fifo) {
        std::size_t idx = static_cast<std::size_t>(ch.src) * n_ + ch.dst;
        at = std::max(at, last_arrival_[idx]);
        last_arrival_[idx] = at;
    }
    ++sent_;
    ++chan_sent_[static_cast<std::size_t>(ch.src) * n_ + ch.dst];
    Event ev;
    ev.at = at;
    ev.kind = EventKind::MessageArrival;
    ev.target = ch.dst;
    ev.payload = std::move(env);
    sched_.schedule(std::move(ev));
}

void Transport::send(Envelope env, VirtualTime latency) {
    ChannelId ch = env.channel();
    if (ch.src >= n_ || ch.dst >= n_ || ch.src == ch.dst)
        throw BadProcessIdError("send: bad channel " + channel_str(ch));
    if (latency <= 0.0)
        throw InvalidParametersError("send: latency must be > 0, got " + format_time(latency));
    if (causal_) env.stamp = causal_->stamp(ch.src, {ch.dst});
    schedule_arrival(std::move(env), latency);
}

void Transport::send_group(std::vector<std::pair<Envelope, VirtualTime>> copies) {
    if (copies.empty()) return;
    if (causal_) {
        ProcessId src = copies.front().first.channel().src;
        std::vector<ProcessId> dsts;
        dsts.reserve(copies.size());
        for (auto& [env, lat] : copies) {
            ChannelId ch = env.channel();
            if (ch.src != src) throw BadProcessIdError("send_group: mixed sources");
            if (ch.src >= n_ || ch.dst >= n_ || ch.src == ch.dst)
                throw BadProcessIdError("send_group: bad channel " + channel_str(ch));
            if (lat <= 0.0) throw InvalidParametersError("send_group: latency must be > 0");
            dsts.push_back(ch.dst);
        }
        auto stamp = causal_->stamp(src, dsts);
        for (auto& [env, lat] : copies) {
            env.stamp = stamp;
            schedule_arrival(std::move(env), lat);
        }
        return;
    }
    for (auto& [env, lat] : copies) send(std::move(env), lat);
}

void Transport::accept_arrival(Envelope env) {
    ProcessId pid = env.channel().dst;
    if (causal_) {
        causal_->buffer_arrival(std::move(env));
    } else {
        ready_[pid].push_back(std::move(env));
    }
}

std::optional<Envelope> Transport::next_delivery(ProcessId pid) {
    std::optional<Envelope> env;
    if (causal_) {
        env = causal_->next_deliverable(pid);
    } else if (!ready_[pid].empty()) {
        env = std::move(ready_[pid].front());
        ready_[pid].pop_front();
    }
    if (env) {
        ++delivered_;
        ChannelId ch = env->channel();
        ++chan_delivered_[static_cast<std::size_t>(ch.src) * n_ + ch.dst];
    }
    return env;
}

} // namespace snapsim
