#include "snapsim/snapshots.hpp"

#include <algorithm>
#include <cassert>

#include "snapsim/errors.hpp"

namespace snapsim {

SnapshotProcess::SnapshotProcess(ProcessId pid, std::uint32_t n) : pid_(pid), n_(n) {
    window_.pid = pid;
}

void SnapshotProcess::record(VirtualTime now, std::uint64_t sent, std::uint64_t received) {
    if (recorded_)
        throw AlreadyRecordedError("process " + std::to_string(pid_) + " recorded twice");
    recorded_ = true;
    record_time_ = now;
    sent_at_record_ = sent;
    received_at_record_ = received;
    window_.start = now;
    window_.end = now;
    for (ProcessId src = 0; src < n_; ++src)
        if (src != pid_) channel_states_[incoming(src)];
    on_record();
}

LocalSnapshot SnapshotProcess::local_snapshot() const {
    assert(recorded_);
    LocalSnapshot out;
    out.pid = pid_;
    out.record_time = record_time_;
    out.sent_count = sent_at_record_;
    out.received_count = received_at_record_;
    out.channel_states = channel_states_;
    return out;
}

// ---- Chandy-Lamport -----------------------------------------------------------

ChandyLamportProcess::ChandyLamportProcess(ProcessId pid, std::uint32_t n)
    : SnapshotProcess(pid, n), chan_(n, Chan::Idle) {}

void ChandyLamportProcess::on_record() {
    open_ = 0;
    for (ProcessId src = 0; src < n_; ++src) {
        if (src == pid_) continue;
        chan_[src] = Chan::Recording;
        ++open_;
    }
    if (open_ == 0) complete_ = true; // single-process run
}

ProcessActions ChandyLamportProcess::initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) {
    record(now, sent, received);
    markers_queued_ = true;
    return ProcessActions{{ControlOut{ControlKind::Marker, std::nullopt}}};
}

bool ChandyLamportProcess::records_on(const Envelope& env) const {
    return !recorded_ && !env.is_app() && env.control().kind == ControlKind::Marker;
}

ProcessActions ChandyLamportProcess::on_delivered(const Envelope& env, VirtualTime now) {
    ProcessActions actions;
    ProcessId src = env.channel().src;
    if (env.is_app()) {
        if (recorded_ && chan_[src] == Chan::Recording)
            channel_states_[incoming(src)].push_back(env.app().id);
        return actions;
    }
    if (env.control().kind != ControlKind::Marker)
        throw ConsistencyViolationError("chandy-lamport received non-marker control traffic");
    assert(recorded_); // records_on() fired before any first marker
    if (chan_[src] == Chan::Closed)
        throw DuplicateMarkerError("second marker on " + channel_str(incoming(src)));
    chan_[src] = Chan::Closed;
    --open_;
    if (!markers_queued_) {
        markers_queued_ = true;
        actions.control.push_back(ControlOut{ControlKind::Marker, std::nullopt});
    }
    if (open_ == 0) {
        window_.end = now;
        complete_ = true;
    }
    return actions;
}

// ---- Lai-Yang / Mattern --------------------------------------------------------

ColoringProcess::ColoringProcess(ProcessId pid, std::uint32_t n)
    : SnapshotProcess(pid, n), chan_(n) {}

void ColoringProcess::on_record() {
    frozen_ = std::make_shared<const WhiteSentCounts>(white_sent_);
    open_ = n_ - 1;
    if (open_ == 0) complete_ = true;
}

ProcessActions ColoringProcess::initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) {
    record(now, sent, received);
    return {}; // no control plane: the coloring itself spreads the snapshot
}

bool ColoringProcess::records_on(const Envelope& env) const {
    return !recorded_ && env.is_app() && post_record(env.app());
}

void ColoringProcess::on_app_send(AppMessage& msg) {
    if (!recorded_) {
        msg.color = MsgColor::White;
        ++white_sent_[msg.channel];
    } else {
        msg.color = MsgColor::Red;
        msg.white_sent_counts = frozen_;
    }
}

void ColoringProcess::maybe_terminate(ProcessId src, VirtualTime now) {
    Chan& c = chan_[src];
    if (!recorded_ || c.terminated || !c.declared || c.whites_received < *c.declared) return;
    assert(c.whites_received == *c.declared);
    c.terminated = true;
    --open_;
    window_.end = std::max(window_.end, now);
    if (open_ == 0) complete_ = true;
}

ProcessActions ColoringProcess::on_delivered(const Envelope& env, VirtualTime now) {
    if (!env.is_app())
        throw ConsistencyViolationError("coloring algorithms expect app traffic only");
    const AppMessage& m = env.app();
    ProcessId src = m.channel.src;
    Chan& c = chan_[src];
    if (!post_record(m)) {
        // White: in-transit iff we already recorded (sent pre-record by color).
        ++c.whites_received;
        c.last_white = now;
        if (recorded_) {
            assert(!c.terminated && "white beyond the sender's declared count");
            channel_states_[incoming(src)].push_back(m.id);
        }
    } else {
        if (!c.declared) {
            if (!m.white_sent_counts)
                throw MissingVectorClockError("post-record message without white-sent counts");
            auto it = m.white_sent_counts->find(m.channel);
            c.declared = it == m.white_sent_counts->end() ? 0 : it->second;
        }
    }
    maybe_terminate(src, now);
    return {};
}

void ColoringProcess::finalize_at_quiescence(VirtualTime quiescence) {
    assert(recorded_); // the simulation records stragglers first
    if (open_ == 0) return;
    for (ProcessId src = 0; src < n_; ++src) {
        if (src == pid_) continue;
        Chan& c = chan_[src];
        if (c.terminated) continue;
        // No red ever arrived on this channel: close it at the last white, or
        // at the window start if the channel stayed silent.
        VirtualTime close = window_.start;
        if (c.last_white) close = std::max(close, *c.last_white);
        c.terminated = true;
        --open_;
        window_.end = std::max(window_.end, close);
    }
    window_.finalized_at_quiescence = true;
    complete_ = true;
    (void)quiescence;
}

MatternProcess::MatternProcess(ProcessId pid, std::uint32_t n, ProcessId initiator)
    : ColoringProcess(pid, n), initiator_(initiator) {}

bool MatternProcess::post_record(const AppMessage& msg) const {
    if (!msg.vc)
        throw MissingVectorClockError("mattern needs vector clocks on app messages");
    return (*msg.vc)[initiator_] >= threshold_;
}

// ---- Acharya-Badrinath / Alagar-Venkatesan --------------------------------------

AbAvProcess::AbAvProcess(ProcessId pid, std::uint32_t n)
    : SnapshotProcess(pid, n), notice_in_(n, false), open_(n - 1) {
    if (n == 1) complete_ = true;
}

ProcessActions AbAvProcess::initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) {
    record(now, sent, received);
    notice_queued_ = true;
    if (n_ == 1) return {};
    return ProcessActions{{ControlOut{ControlKind::SnapshotRequest, std::nullopt},
                           ControlOut{ControlKind::RecordedNotice, std::nullopt}}};
}

bool AbAvProcess::records_on(const Envelope& env) const {
    return !recorded_ && !env.is_app() && env.control().kind == ControlKind::SnapshotRequest;
}

void AbAvProcess::on_app_send(AppMessage& msg) {
    msg.epoch = recorded_ ? Epoch::PostRecord : Epoch::PreRecord;
}

ProcessActions AbAvProcess::on_delivered(const Envelope& env, VirtualTime now) {
    ProcessActions actions;
    ProcessId src = env.channel().src;
    if (env.is_app()) {
        const AppMessage& m = env.app();
        if (m.epoch == Epoch::PostRecord && !recorded_)
            throw ConsistencyViolationError("post-record message delivered before the snapshot request on " +
                                            channel_str(m.channel) + ": causal delivery broken");
        if (recorded_ && m.epoch == Epoch::PreRecord) {
            if (notice_in_[src])
                throw ConsistencyViolationError("pre-record message after the sender's notice on " +
                                                channel_str(m.channel) + ": causal delivery broken");
            channel_states_[incoming(src)].push_back(m.id);
        }
        return actions;
    }
    switch (env.control().kind) {
        case ControlKind::SnapshotRequest:
            // First request triggered record() via records_on; duplicates are
            // harmless no-ops.
            if (!notice_queued_) {
                notice_queued_ = true;
                actions.control.push_back(ControlOut{ControlKind::RecordedNotice, std::nullopt});
            }
            break;
        case ControlKind::RecordedNotice:
            if (notice_in_[src])
                throw ConsistencyViolationError("duplicate recorded-notice from " + std::to_string(src));
            notice_in_[src] = true;
            --open_;
            window_.end = now;
            if (open_ == 0) complete_ = true;
            break;
        case ControlKind::Marker:
            throw ConsistencyViolationError("ab-av received a chandy-lamport marker");
    }
    return actions;
}

std::unique_ptr<SnapshotProcess> make_snapshot_process(Algorithm algo, ProcessId pid, std::uint32_t n,
                                                       ProcessId initiator) {
    switch (algo) {
        case Algorithm::ChandyLamport: return std::make_unique<ChandyLamportProcess>(pid, n);
        case Algorithm::LaiYang: return std::make_unique<LaiYangProcess>(pid, n);
        case Algorithm::Mattern: return std::make_unique<MatternProcess>(pid, n, initiator);
        case Algorithm::AbAv: return std::make_unique<AbAvProcess>(pid, n);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace snapsim
