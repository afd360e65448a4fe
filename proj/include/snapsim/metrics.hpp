#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snapsim/event_log.hpp"
#include "snapsim/snapshot_types.hpp"

namespace snapsim {

struct DurationStats {
    std::vector<double> durations; // indexed by pid
    double mean = 0.0;
    double stddev = 0.0; // population
    double min = 0.0;
    double max = 0.0;
    std::uint32_t finalized_count = 0;
};

// Per-process recording durations plus aggregates. Requires exactly one window
// per pid in [0, n_processes); otherwise MissingWindowError.
DurationStats duration_stats(const std::vector<RecordingWindow>& windows, std::size_t n_processes);

struct CutCheck {
    bool ok = true;
    char rule = 0; // 'a' orphan, 'b' missing in-transit, 'c' phantom
    MsgId msg = 0;
    std::string detail;
};

// Checks the snapshot against the run history: no orphan messages (a), every
// in-transit app message captured on its channel (b), nothing captured that
// was not in transit (c). Deterministic: reports the offending message with
// the lowest id (ties broken a < b < c). Throws IncompleteLogError when the
// log lacks a record per process or a delivery for some send.
CutCheck verify_consistent_cut(const GlobalSnapshot& snapshot, const EventLog& log);

// Happened-before over log positions: program order plus send->deliver edges,
// transitively closed. Build once per log, query any pair.
class HappenedBeforeOracle {
  public:
    explicit HappenedBeforeOracle(const EventLog& log);

    bool happened_before(std::size_t e1, std::size_t e2) const; // UnknownEventError

  private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> reach_; // n_ rows of `words_` 64-bit words
};

// One-off convenience wrapper around the oracle.
bool happened_before(const EventLog& log, std::size_t e1, std::size_t e2);

} // namespace snapsim
