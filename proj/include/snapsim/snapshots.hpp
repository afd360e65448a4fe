#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "snapsim/messages.hpp"
#include "snapsim/snapshot_types.hpp"

namespace snapsim {

// Control message the simulation should emit on the machine's behalf.
struct ControlOut {
    ControlKind kind = ControlKind::Marker;
    std::optional<ProcessId> to; // nullopt = every other process
};

struct ProcessActions {
    std::vector<ControlOut> control;
};

// Per-process snapshot state machine. The simulation drives it in a fixed
// order for every delivery:
//   1. records_on(env): must this delivery trigger the local record?
//      If yes, record() runs before the delivery counts as processed.
//   2. on_delivered(env): algorithm bookkeeping; returns control traffic.
// Outgoing app messages pass through on_app_send() for tagging, and
// finalize_at_quiescence() closes whatever the protocol leaves open.
class SnapshotProcess {
  public:
    SnapshotProcess(ProcessId pid, std::uint32_t n);
    virtual ~SnapshotProcess() = default;

    virtual ProcessActions initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) = 0;
    virtual bool records_on(const Envelope& env) const = 0;
    virtual void on_app_send(AppMessage&) {}
    virtual ProcessActions on_delivered(const Envelope& env, VirtualTime now) = 0;
    virtual void finalize_at_quiescence(VirtualTime) {}

    // Captures local state: digest counters freeze, the window opens, and all
    // incoming channel states start out empty. AlreadyRecordedError on reuse.
    void record(VirtualTime now, std::uint64_t sent, std::uint64_t received);

    bool recorded() const { return recorded_; }
    bool window_complete() const { return complete_; }
    const RecordingWindow& window() const { return window_; }
    LocalSnapshot local_snapshot() const;
    ProcessId pid() const { return pid_; }

  protected:
    virtual void on_record() {}

    ChannelId incoming(ProcessId src) const { return ChannelId{src, pid_}; }

    ProcessId pid_;
    std::uint32_t n_;
    bool recorded_ = false;
    bool complete_ = false;
    VirtualTime record_time_ = 0.0;
    std::uint64_t sent_at_record_ = 0;
    std::uint64_t received_at_record_ = 0;
    RecordingWindow window_{};
    std::map<ChannelId, std::vector<MsgId>> channel_states_;
};

// Chandy-Lamport over FIFO channels: record on the first marker, then record
// each incoming channel until its marker arrives.
class ChandyLamportProcess final : public SnapshotProcess {
  public:
    ChandyLamportProcess(ProcessId pid, std::uint32_t n);

    ProcessActions initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) override;
    bool records_on(const Envelope& env) const override;
    ProcessActions on_delivered(const Envelope& env, VirtualTime now) override;

  protected:
    void on_record() override;

  private:
    enum class Chan : std::uint8_t { Idle, Recording, Closed };
    std::vector<Chan> chan_; // indexed by source pid
    std::uint32_t open_ = 0; // channels still awaiting their marker
    bool markers_queued_ = false;
};

// Shared white/red machinery of Lai-Yang and Mattern: pre-record traffic is
// white and counted per channel; post-record traffic carries the frozen white
// counts; a channel terminates once the receiver has seen as many whites as
// the sender declared.
class ColoringProcess : public SnapshotProcess {
  public:
    ColoringProcess(ProcessId pid, std::uint32_t n);

    ProcessActions initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) override;
    bool records_on(const Envelope& env) const override;
    void on_app_send(AppMessage& msg) override;
    ProcessActions on_delivered(const Envelope& env, VirtualTime now) override;
    void finalize_at_quiescence(VirtualTime quiescence) override;

  protected:
    // Does this message belong to the post-record epoch?
    virtual bool post_record(const AppMessage& msg) const = 0;
    void on_record() override;

  private:
    void maybe_terminate(ProcessId src, VirtualTime now);

    struct Chan {
        std::uint64_t whites_received = 0;
        std::optional<std::uint64_t> declared; // learned from the first red
        bool terminated = false;
        std::optional<VirtualTime> last_white;
    };
    std::vector<Chan> chan_; // indexed by source pid
    std::uint32_t open_ = 0;
    WhiteSentCounts white_sent_;
    std::shared_ptr<const WhiteSentCounts> frozen_;
};

class LaiYangProcess final : public ColoringProcess {
  public:
    using ColoringProcess::ColoringProcess;

  protected:
    bool post_record(const AppMessage& msg) const override { return msg.color == MsgColor::Red; }
};

// Mattern: identical channel accounting, but the post-record test reads the
// piggybacked vector clock against the initiator's threshold s (installed at
// initiation; until then nothing qualifies).
class MatternProcess final : public ColoringProcess {
  public:
    MatternProcess(ProcessId pid, std::uint32_t n, ProcessId initiator);

    void set_threshold(std::uint64_t s) { threshold_ = s; }

  protected:
    bool post_record(const AppMessage& msg) const override;

  private:
    ProcessId initiator_;
    std::uint64_t threshold_ = std::numeric_limits<std::uint64_t>::max();
};

// Combined Acharya-Badrinath / Alagar-Venkatesan over causal delivery: the
// initiator broadcasts a SnapshotRequest; everyone records on first receipt,
// tags app traffic with its epoch, and broadcasts a RecordedNotice that closes
// the sender's channel at every receiver.
class AbAvProcess final : public SnapshotProcess {
  public:
    AbAvProcess(ProcessId pid, std::uint32_t n);

    ProcessActions initiate(VirtualTime now, std::uint64_t sent, std::uint64_t received) override;
    bool records_on(const Envelope& env) const override;
    void on_app_send(AppMessage& msg) override;
    ProcessActions on_delivered(const Envelope& env, VirtualTime now) override;

  private:
    std::vector<bool> notice_in_; // per source
    std::uint32_t open_ = 0;
    bool notice_queued_ = false;
};

std::unique_ptr<SnapshotProcess> make_snapshot_process(Algorithm algo, ProcessId pid, std::uint32_t n,
                                                       ProcessId initiator);

} // namespace snapsim
