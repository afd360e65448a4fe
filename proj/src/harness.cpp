#include "snapsim/harness.hpp"

#include <fstream>

#include "snapsim/errors.hpp"
#include "snapsim/metrics.hpp"

namespace snapsim {

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Simulation sim(cfg);
    std::ofstream trace_out;
    if (cfg.trace_path) {
        if (cfg.trace_path->has_parent_path()) {
            std::error_code ec;
            std::filesystem::create_directories(cfg.trace_path->parent_path(), ec);
            if (ec)
                throw IoError("cannot create trace directory " + cfg.trace_path->parent_path().string() +
                              ": " + ec.message());
        }
        trace_out.open(*cfg.trace_path);
        if (!trace_out) throw IoError("cannot open trace file " + cfg.trace_path->string());
        sim.set_trace(&trace_out);
    }
    RunResult result = sim.run();
    result.consistency = verify_consistent_cut(result.snapshot, result.log);
    if (!result.consistency.ok)
        throw ConsistencyViolationError("inconsistent snapshot (rule " +
                                        std::string(1, result.consistency.rule) + "): " +
                                        result.consistency.detail);
    if (cfg.trace_path && !trace_out.flush())
        throw IoError("failed writing trace file " + cfg.trace_path->string());
    return result;
}

SweepSpec SweepSpec::full_grid(ExperimentConfig base, std::uint32_t replications) {
    SweepSpec spec;
    spec.latencies = {LatencyModel::poisson(), LatencyModel::pareto(), LatencyModel::weibull(),
                      LatencyModel::arima()};
    spec.algorithms = {Algorithm::ChandyLamport, Algorithm::LaiYang, Algorithm::Mattern, Algorithm::AbAv};
    spec.intervals = {IntervalModel::constant(), IntervalModel::poisson_process()};
    spec.base = std::move(base);
    spec.replications = replications;
    return spec;
}

namespace {

// Canonical positions are fixed independently of the sweep's subsets: the
// same (latency, interval, replication) always maps to the same seed.
std::uint64_t latency_pos(const LatencyModel& m) { return m.dist.index(); }
std::uint64_t interval_pos(const IntervalModel& m) { return m.dist.index(); }
constexpr std::uint64_t kWorkloadCells = 8; // 2 intervals x 4 latency families

} // namespace

std::uint64_t cell_seed(const SweepSpec& spec, const LatencyModel& latency, const IntervalModel& interval,
                        std::uint32_t replication) {
    std::uint64_t idx = interval_pos(interval) * 4 + latency_pos(latency);
    return spec.base.seed + idx + static_cast<std::uint64_t>(replication) * kWorkloadCells;
}

SweepResult run_sweep(const SweepSpec& spec) {
    SweepResult out;
    for (const IntervalModel& interval : spec.intervals) {
        for (const LatencyModel& latency : spec.latencies) {
            for (Algorithm algo : spec.algorithms) {
                for (std::uint32_t rep = 0; rep < spec.replications; ++rep) {
                    ExperimentConfig cfg = spec.base;
                    cfg.algorithm = algo;
                    cfg.ordering.reset();
                    cfg.latency = latency;
                    cfg.interval = interval;
                    cfg.seed = cell_seed(spec, latency, interval, rep);
                    cfg.trace_path.reset();
                    try {
                        RunResult r = run_experiment(cfg);
                        out.summary.push_back(SummaryRow{algo, latency.kind_name(), interval.kind_name(),
                                                         cfg.seed, r.stats.stddev, r.stats.mean,
                                                         r.stats.finalized_count});
                        for (const RecordingWindow& w : r.windows)
                            out.windows.push_back(WindowRow{algo, latency.kind_name(), interval.kind_name(),
                                                            cfg.seed, w.pid, w.start, w.end,
                                                            w.finalized_at_quiescence});
                    } catch (const SimError& e) {
                        out.failures.push_back(CellFailure{algo, latency.kind_name(), interval.kind_name(),
                                                           cfg.seed, e.what()});
                    }
                }
            }
        }
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    {
        std::ofstream win(out_dir / "windows.csv");
        if (!win) throw IoError("cannot open " + (out_dir / "windows.csv").string());
        win << "algorithm,latency_model,interval_model,seed,pid,start,end,duration,finalized\n";
        for (const WindowRow& w : result.windows) {
            win << algorithm_name(w.algorithm) << ',' << w.latency << ',' << w.interval << ',' << w.seed
                << ',' << w.pid << ',' << format_time(w.start) << ',' << format_time(w.end) << ','
                << format_time(w.end - w.start) << ',' << (w.finalized ? "true" : "false") << '\n';
        }
        if (!win.flush()) throw IoError("failed writing " + (out_dir / "windows.csv").string());
    }
    {
        std::ofstream sum(out_dir / "summary.csv");
        if (!sum) throw IoError("cannot open " + (out_dir / "summary.csv").string());
        sum << "algorithm,latency_model,interval_model,seed,stddev,mean,finalized_count\n";
        for (const SummaryRow& s : result.summary) {
            sum << algorithm_name(s.algorithm) << ',' << s.latency << ',' << s.interval << ',' << s.seed
                << ',' << format_time(s.stddev) << ',' << format_time(s.mean) << ',' << s.finalized_count
                << '\n';
        }
        if (!sum.flush()) throw IoError("failed writing " + (out_dir / "summary.csv").string());
    }
}

} // namespace snapsim
