#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>

#include "snapsim/errors.hpp"
#include "snapsim/messages.hpp"
#include "snapsim/types.hpp"

namespace snapsim {

enum class EventKind : std::uint8_t { MessageArrival, TimerFire, SnapshotInitiate };

struct Event {
    VirtualTime at = 0.0;
    EventKind kind = EventKind::TimerFire;
    ProcessId target = 0;
    std::optional<Envelope> payload; // MessageArrival only
    std::uint64_t seq = 0;           // assigned by the scheduler
};

// Deterministic discrete-event loop. Events dispatch in (at, seq) order; seq
// is scheduling order, so simultaneous events run first-scheduled-first and a
// run is a pure function of its inputs.
class Scheduler {
  public:
    using Handler = std::function<void(Event&)>;

    static constexpr std::uint64_t kDefaultEventCap = 10'000'000;

    EventId schedule(Event ev) {
        if (!(ev.at >= now_) || !std::isfinite(ev.at))
            throw SchedulingInPastError("schedule: t=" + format_time(ev.at) + " is before now=" +
                                        format_time(now_));
        ev.seq = next_seq_++;
        EventId id = ev.seq;
        queue_.insert(std::move(ev));
        return id;
    }

    void set_handler(Handler h) { handler_ = std::move(h); }
    void set_event_cap(std::uint64_t cap) { event_cap_ = cap; }

    // Runs the queue dry (handlers may keep scheduling). Returns the timestamp
    // of the last dispatched event, or now() when nothing was pending.
    VirtualTime run_until_quiescent() {
        while (!queue_.empty()) {
            if (dispatched_ >= event_cap_)
                throw EventLimitExceededError("event cap of " + std::to_string(event_cap_) +
                                              " events exceeded at t=" + format_time(now_));
            auto node = queue_.extract(queue_.begin());
            Event& ev = node.value();
            now_ = ev.at;
            ++dispatched_;
            if (handler_) handler_(ev);
        }
        return now_;
    }

    VirtualTime now() const { return now_; }
    bool empty() const { return queue_.empty(); }
    std::uint64_t dispatched_count() const { return dispatched_; }
    std::uint64_t pending_count() const { return queue_.size(); }

  private:
    struct ByTimeSeq {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) return a.at < b.at;
            return a.seq < b.seq;
        }
    };

    std::set<Event, ByTimeSeq> queue_;
    Handler handler_;
    VirtualTime now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t dispatched_ = 0;
    std::uint64_t event_cap_ = kDefaultEventCap;
};

} // namespace snapsim
