#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "snapsim/types.hpp"
#include "snapsim/vector_clock.hpp"

namespace snapsim {

enum class MsgColor : std::uint8_t { White, Red };
enum class Epoch : std::uint8_t { PreRecord, PostRecord };
enum class ControlKind : std::uint8_t { Marker, SnapshotRequest, RecordedNotice };

// Wire-level tag used by the run log and the trace file.
enum class WireKind : std::uint8_t { App, Marker, Request, Notice };

inline const char* wire_name(WireKind w) {
    switch (w) {
        case WireKind::App: return "app";
        case WireKind::Marker: return "marker";
        case WireKind::Request: return "request";
        case WireKind::Notice: return "notice";
    }
    return "?";
}

// Per-outgoing-channel count of white (pre-record) messages, frozen when the
// sender records and piggybacked on all of its post-record traffic.
using WhiteSentCounts = std::map<ChannelId, std::uint64_t>;

struct AppMessage {
    MsgId id = 0;
    ChannelId channel;
    VirtualTime send_time = 0.0;
    MsgColor color = MsgColor::White; // Lai-Yang / Mattern
    Epoch epoch = Epoch::PreRecord;   // Acharya-Badrinath / Alagar-Venkatesan
    std::optional<VectorClock> vc;    // present when the run carries clocks
    std::shared_ptr<const WhiteSentCounts> white_sent_counts; // present on Red
};

struct ControlMessage {
    ControlKind kind = ControlKind::Marker;
    std::uint32_t snapshot_id = 0;
    MsgId id = 0;
    ChannelId channel;
    VirtualTime send_time = 0.0;
    std::optional<VectorClock> vc;
};

// Sent-message matrix snapshot attached to causally ordered traffic.
// sent[src * n + dst] counts src->dst messages in the sender's causal past,
// including the carrying message itself. A broadcast bumps all destination
// counts before the shared snapshot is taken, so its copies order as a single
// multicast event.
struct CausalStamp {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> sent;

    std::uint32_t at(ProcessId src, ProcessId dst) const { return sent[src * n + dst]; }
};

struct Envelope {
    std::variant<AppMessage, ControlMessage> body;
    std::shared_ptr<const CausalStamp> stamp; // causal ordering only

    bool is_app() const { return body.index() == 0; }
    const AppMessage& app() const { return std::get<AppMessage>(body); }
    const ControlMessage& control() const { return std::get<ControlMessage>(body); }

    ChannelId channel() const {
        return is_app() ? app().channel : control().channel;
    }
    MsgId id() const { return is_app() ? app().id : control().id; }
    VirtualTime send_time() const { return is_app() ? app().send_time : control().send_time; }

    const std::optional<VectorClock>& vc() const {
        return is_app() ? app().vc : control().vc;
    }

    WireKind wire() const {
        if (is_app()) return WireKind::App;
        switch (control().kind) {
            case ControlKind::Marker: return WireKind::Marker;
            case ControlKind::SnapshotRequest: return WireKind::Request;
            case ControlKind::RecordedNotice: return WireKind::Notice;
        }
        return WireKind::App;
    }
};

} // namespace snapsim
