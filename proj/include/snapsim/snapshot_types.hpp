#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "snapsim/errors.hpp"
#include "snapsim/types.hpp"

namespace snapsim {

enum class Algorithm : std::uint8_t { ChandyLamport, LaiYang, Mattern, AbAv };
enum class Ordering : std::uint8_t { Fifo, NonFifo, Causal };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::ChandyLamport: return "chandy-lamport";
        case Algorithm::LaiYang: return "lai-yang";
        case Algorithm::Mattern: return "mattern";
        case Algorithm::AbAv: return "ab-av";
    }
    return "?";
}

inline const char* ordering_name(Ordering o) {
    switch (o) {
        case Ordering::Fifo: return "fifo";
        case Ordering::NonFifo: return "non-fifo";
        case Ordering::Causal: return "causal";
    }
    return "?";
}

// Each algorithm is specified against the delivery discipline it assumes.
inline Ordering required_ordering(Algorithm a) {
    switch (a) {
        case Algorithm::ChandyLamport: return Ordering::Fifo;
        case Algorithm::LaiYang: return Ordering::NonFifo;
        case Algorithm::Mattern: return Ordering::NonFifo;
        case Algorithm::AbAv: return Ordering::Causal;
    }
    return Ordering::Fifo;
}

Algorithm parse_algorithm(std::string_view s);   // ConfigError
Ordering parse_ordering(std::string_view s);     // ConfigError

struct LocalSnapshot {
    ProcessId pid = 0;
    VirtualTime record_time = 0.0;
    std::uint64_t sent_count = 0;     // app messages sent before recording
    std::uint64_t received_count = 0; // app messages received before recording
    // In-transit app messages per incoming channel, in delivery order.
    std::map<ChannelId, std::vector<MsgId>> channel_states;
};

struct RecordingWindow {
    ProcessId pid = 0;
    VirtualTime start = 0.0;
    VirtualTime end = 0.0;
    bool finalized_at_quiescence = false;

    VirtualTime duration() const { return end - start; }
};

struct GlobalSnapshot {
    std::uint32_t snapshot_id = 0;
    std::vector<LocalSnapshot> locals; // pid ascending, one per process
};

} // namespace snapsim
