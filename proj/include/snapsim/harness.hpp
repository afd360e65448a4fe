#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snapsim/config.hpp"
#include "snapsim/simulation.hpp"

namespace snapsim {

// Runs one configuration end to end and verifies the recorded cut against the
// run history; an inconsistent snapshot throws ConsistencyViolationError with
// the offending rule and message. The trace file, when configured, is written
// as a side effect.
RunResult run_experiment(const ExperimentConfig& cfg);

// Grid sweep over latency models x algorithms x interval models. The four
// algorithm rows of one (latency, interval, replication) cell share a seed so
// they face an identical app workload.
struct SweepSpec {
    std::vector<LatencyModel> latencies;
    std::vector<Algorithm> algorithms;
    std::vector<IntervalModel> intervals;
    ExperimentConfig base;          // scale, seed, initiation; algorithm/models overridden per cell
    std::uint32_t replications = 1;

    static SweepSpec full_grid(ExperimentConfig base, std::uint32_t replications = 1);
};

// Stable workload-cell index shared by all algorithms of a cell; stable under
// subsetting the grid, so a partial sweep reproduces the full sweep's cells.
std::uint64_t cell_seed(const SweepSpec& spec, const LatencyModel& latency, const IntervalModel& interval,
                        std::uint32_t replication);

struct SummaryRow {
    Algorithm algorithm{};
    std::string latency;
    std::string interval;
    std::uint64_t seed = 0;
    double stddev = 0.0;
    double mean = 0.0;
    std::uint32_t finalized_count = 0;
};

struct WindowRow {
    Algorithm algorithm{};
    std::string latency;
    std::string interval;
    std::uint64_t seed = 0;
    ProcessId pid = 0;
    double start = 0.0;
    double end = 0.0;
    bool finalized = false;
};

struct CellFailure {
    Algorithm algorithm{};
    std::string latency;
    std::string interval;
    std::uint64_t seed = 0;
    std::string error;
};

struct SweepResult {
    std::vector<SummaryRow> summary;   // grid order
    std::vector<WindowRow> windows;    // grid order, pid ascending within a run
    std::vector<CellFailure> failures; // failed cells are skipped, not fatal
};

SweepResult run_sweep(const SweepSpec& spec);

// windows.csv and summary.csv under out_dir (created if missing). IoError on
// anything the filesystem refuses.
void emit_csv(const SweepResult& result, const std::filesystem::path& out_dir);

} // namespace snapsim
