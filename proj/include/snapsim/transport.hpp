#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "snapsim/engine.hpp"
#include "snapsim/messages.hpp"
#include "snapsim/snapshot_types.hpp"
#include "snapsim/vector_clock.hpp"

namespace snapsim {

// BSS deliverability at the receiver: msg_vc[k] counts the messages from k to
// this receiver in the message's causal past (the carrying message included
// for k = sender); local_vc[k] counts deliveries from k so far. Deliverable
// when this message is the next one from its sender and everything else it
// depends on is already in.
bool bss_deliverable(const VectorClock& msg_vc, ProcessId sender, const VectorClock& local_vc);

// Causal delivery via sent-message matrices: each process keeps an n*n matrix
// of known src->dst send counts; outgoing messages carry a snapshot of the
// sender's matrix, and the BSS test runs against the snapshot's destination
// column. Delivery merges the snapshot into the receiver's matrix.
class CausalRouter {
  public:
    explicit CausalRouter(std::uint32_t n);

    // Count the send(s) in src's matrix and return the stamp the copies carry.
    // A multi-destination group is bumped first and stamped once (atomic
    // multicast), so no copy orders after its siblings.
    std::shared_ptr<const CausalStamp> stamp(ProcessId src, const std::vector<ProcessId>& dsts);

    void buffer_arrival(Envelope env); // held until deliverable
    // Oldest deliverable arrival at pid, if any; merges its stamp on delivery.
    std::optional<Envelope> next_deliverable(ProcessId pid);
    // Fixpoint drain, rescanning from the front after every delivery.
    std::vector<Envelope> drain(ProcessId pid);

    std::size_t pending_count() const { return pending_total_; }
    std::uint32_t delivered_from(ProcessId at, ProcessId from) const { return delivered_[at][from]; }

  private:
    bool deliverable_at(const Envelope& env, ProcessId pid) const;

    std::uint32_t n_;
    std::vector<std::vector<std::uint32_t>> matrix_;    // per process, n*n row-major
    std::vector<std::vector<std::uint32_t>> delivered_; // per process, per source
    std::vector<std::deque<Envelope>> pending_;         // per process, arrival order
    std::size_t pending_total_ = 0;
};

// Message plane: sends schedule MessageArrival events through the engine and
// deliveries honor the configured ordering. FIFO is realized by clamping each
// channel's arrival times to be non-decreasing; NonFIFO delivers in raw
// arrival order; Causal buffers arrivals behind the BSS test.
class Transport {
  public:
    Transport(std::uint32_t n, Ordering ordering, Scheduler& sched);

    void send(Envelope env, VirtualTime latency);
    // Atomic multicast for causal broadcasts; elsewhere identical to a loop
    // over send().
    void send_group(std::vector<std::pair<Envelope, VirtualTime>> copies);

    // Arrival-event plumbing: the simulation hands the dispatched envelope
    // back in, then pulls deliveries until empty (causal arrivals may unlock
    // several pending messages, or none).
    void accept_arrival(Envelope env);
    std::optional<Envelope> next_delivery(ProcessId pid);

    Ordering ordering() const { return ordering_; }
    std::uint64_t sent_count() const { return sent_; }
    std::uint64_t delivered_count() const { return delivered_; }
    std::uint64_t channel_sent(ChannelId ch) const { return chan_sent_[ch.src * n_ + ch.dst]; }
    std::uint64_t channel_delivered(ChannelId ch) const { return chan_delivered_[ch.src * n_ + ch.dst]; }
    std::size_t causal_pending() const { return causal_ ? causal_->pending_count() : 0; }

  private:
    void schedule_arrival(Envelope env, VirtualTime latency);

    std::uint32_t n_;
    Ordering ordering_;
    Scheduler& sched_;
    std::optional<CausalRouter> causal_;
    std::vector<VirtualTime> last_arrival_;       // FIFO clamp, per channel
    std::vector<std::deque<Envelope>> ready_;     // per process (fifo/non-fifo path)
    std::vector<std::uint64_t> chan_sent_;
    std::vector<std::uint64_t> chan_delivered_;
    std::uint64_t sent_ = 0;
    std::uint64_t delivered_ = 0;
};

} // namespace snapsim
