#pragma once

#include <memory>
#include <ostream>
#include <vector>

#include "snapsim/config.hpp"
#include "snapsim/engine.hpp"
#include "snapsim/event_log.hpp"
#include "snapsim/latency.hpp"
#include "snapsim/metrics.hpp"
#include "snapsim/rng.hpp"
#include "snapsim/snapshots.hpp"
#include "snapsim/transport.hpp"

namespace snapsim {

struct RunResult {
    GlobalSnapshot snapshot;
    std::vector<RecordingWindow> windows; // pid ascending
    DurationStats stats;
    EventLog log;
    VirtualTime quiescence_time = 0.0;
    CutCheck consistency; // filled by the harness
};

// One complete simulated run: open-loop workload timers per process, the
// message plane, per-process snapshot machines, and the run log. The whole
// run is a pure function of the config (seed included).
class Simulation {
  public:
    explicit Simulation(const ExperimentConfig& cfg);

    // Optional human-readable trace; lines are emitted as events happen.
    void set_trace(std::ostream* sink) { trace_ = sink; }

    VirtualTime run_to_quiescence();  // EventLimitExceededError
    void finalize_at_quiescence();    // CalledBeforeQuiescenceError
    RunResult collect();

    // run_to_quiescence + finalize + collect
    RunResult run();

    const EventLog& log() const { return log_; }
    Scheduler& scheduler() { return sched_; }

  private:
    void handle_event(Event& ev);
    void handle_app_send(ProcessId p);
    void handle_initiate();
    void handle_arrival(Envelope env);
    void process_delivery(Envelope env);
    void execute_actions(ProcessId p, const ProcessActions& actions);
    void trace_line(const std::string& line);

    ExperimentConfig cfg_;
    std::uint32_t n_;
    bool carries_vc_;

    Scheduler sched_;
    Transport transport_;
    std::vector<std::unique_ptr<SnapshotProcess>> procs_;
    std::vector<VectorClock> clocks_;

    RngStream latency_rng_;
    RngStream control_latency_rng_;
    RngStream interval_rng_;
    RngStream destination_rng_;
    LatencySampler app_latency_;
    LatencySampler control_latency_;

    std::vector<std::uint32_t> remaining_;   // app sends left per process
    std::vector<std::uint64_t> app_sent_;
    std::vector<std::uint64_t> app_received_;
    std::uint32_t first_sends_seen_ = 0;
    bool initiation_scheduled_ = false;
    bool initiated_ = false;
    MsgId next_msg_id_ = 1;

    EventLog log_;
    std::ostream* trace_ = nullptr;
    bool quiescent_ = false;
    VirtualTime quiescence_time_ = 0.0;
    bool finalized_ = false;
};

} // namespace snapsim
