// Python bindings: the same operations the CLI exposes, with configs as plain
// dicts (every entry funnels through apply_key, so the accepted keys match the
// config-file format exactly) and results as plain dicts/lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "snapsim/errors.hpp"
#include "snapsim/harness.hpp"
#include "snapsim/metrics.hpp"
#include "snapsim/trace.hpp"
#include "snapsim/vector_clock.hpp"

namespace py = pybind11;
using namespace snapsim;

namespace {

ExperimentConfig config_from_dict(const py::dict& d) {
    ExperimentConfig cfg;
    for (auto item : d) {
        std::string key = py::str(item.first);
        std::string value = py::str(item.second);
        apply_key(cfg, key, value);
    }
    return cfg;
}

py::dict window_to_dict(const RecordingWindow& w) {
    py::dict out;
    out["pid"] = w.pid;
    out["start"] = w.start;
    out["end"] = w.end;
    out["duration"] = w.duration();
    out["finalized"] = w.finalized_at_quiescence;
    return out;
}

py::dict result_to_dict(const RunResult& r) {
    py::dict out;
    out["quiescence_time"] = r.quiescence_time;
    out["consistent"] = r.consistency.ok;
    out["log_size"] = r.log.size();

    py::list windows;
    for (const RecordingWindow& w : r.windows) windows.append(window_to_dict(w));
    out["windows"] = windows;

    py::dict stats;
    stats["mean"] = r.stats.mean;
    stats["stddev"] = r.stats.stddev;
    stats["min"] = r.stats.min;
    stats["max"] = r.stats.max;
    stats["finalized_count"] = r.stats.finalized_count;
    stats["durations"] = r.stats.durations;
    out["stats"] = stats;

    py::list locals_;
    for (const LocalSnapshot& l : r.snapshot.locals) {
        py::dict ls;
        ls["pid"] = l.pid;
        ls["record_time"] = l.record_time;
        ls["sent_count"] = l.sent_count;
        ls["received_count"] = l.received_count;
        py::dict channels;
        for (const auto& [ch, msgs] : l.channel_states)
            channels[py::make_tuple(ch.src, ch.dst)] = msgs;
        ls["channel_states"] = channels;
        locals_.append(ls);
    }
    out["snapshot"] = locals_;
    return out;
}

py::dict run_experiment_py(const py::dict& config) {
    return result_to_dict(run_experiment(config_from_dict(config)));
}

py::dict run_sweep_py(const py::dict& base, std::uint32_t replications,
                      const std::optional<std::string>& out_dir) {
    SweepSpec spec = SweepSpec::full_grid(config_from_dict(base), replications);
    SweepResult res = run_sweep(spec);
    if (out_dir) emit_csv(res, *out_dir);

    py::dict out;
    py::list summary;
    for (const SummaryRow& s : res.summary) {
        py::dict row;
        row["algorithm"] = algorithm_name(s.algorithm);
        row["latency_model"] = s.latency;
        row["interval_model"] = s.interval;
        row["seed"] = s.seed;
        row["stddev"] = s.stddev;
        row["mean"] = s.mean;
        row["finalized_count"] = s.finalized_count;
        summary.append(row);
    }
    out["summary"] = summary;

    py::list windows;
    for (const WindowRow& w : res.windows) {
        py::dict row;
        row["algorithm"] = algorithm_name(w.algorithm);
        row["latency_model"] = w.latency;
        row["interval_model"] = w.interval;
        row["seed"] = w.seed;
        row["pid"] = w.pid;
        row["start"] = w.start;
        row["end"] = w.end;
        row["duration"] = w.end - w.start;
        row["finalized"] = w.finalized;
        windows.append(row);
    }
    out["windows"] = windows;

    py::list failures;
    for (const CellFailure& f : res.failures) {
        py::dict row;
        row["algorithm"] = algorithm_name(f.algorithm);
        row["latency_model"] = f.latency;
        row["interval_model"] = f.interval;
        row["seed"] = f.seed;
        row["error"] = f.error;
        failures.append(row);
    }
    out["failures"] = failures;
    return out;
}

std::vector<double> sample_latency_py(const py::dict& config, int count) {
    ExperimentConfig cfg = config_from_dict(config);
    cfg.latency.validate();
    if (count < 0) throw InvalidParametersError("count must be >= 0");
    LatencySampler sampler(cfg.latency);
    RngStream rng(cfg.seed, "latency");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(sampler.sample(rng));
    return out;
}

py::dict verify_trace_py(const std::string& path) {
    ParsedTrace t = parse_trace_file(path);
    CutCheck c = verify_consistent_cut(t.snapshot, t.log);
    py::dict out;
    out["consistent"] = c.ok;
    out["rule"] = c.rule ? std::string(1, c.rule) : std::string();
    out["msg"] = c.msg;
    out["detail"] = c.detail;
    return out;
}

std::vector<std::uint64_t> vc_tick_py(std::vector<std::uint64_t> clock, ProcessId pid) {
    return tick(VectorClock(std::move(clock)), pid).entries();
}

std::vector<std::uint64_t> vc_merge_py(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    return merge(VectorClock(std::move(a)), VectorClock(std::move(b))).entries();
}

std::string vc_compare_py(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    return clock_order_name(compare(VectorClock(std::move(a)), VectorClock(std::move(b))));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic discrete-event simulator for global-snapshot algorithms";

    auto sim_error = py::register_exception<SimError>(m, "SimError");
    py::register_exception<ConfigError>(m, "ConfigError", sim_error);
    py::register_exception<InvalidParametersError>(m, "InvalidParametersError", sim_error);
    py::register_exception<ConsistencyViolationError>(m, "ConsistencyViolationError", sim_error);
    py::register_exception<EventLimitExceededError>(m, "EventLimitExceededError", sim_error);
    py::register_exception<IoError>(m, "IoError", sim_error);

    m.def("run_experiment", &run_experiment_py, py::arg("config"),
          "Run one experiment described by a config dict (same keys as the config file: hosts, "
          "messages, algorithm, latency, seed, ...). Returns windows, duration statistics, the "
          "recorded snapshot, and the consistency verdict.");
    m.def("run_sweep", &run_sweep_py, py::arg("base"), py::arg("replications") = 1,
          py::arg("out_dir") = py::none(),
          "Run the full latency x algorithm x interval grid on top of the base config. Optionally "
          "writes windows.csv and summary.csv to out_dir.");
    m.def("sample_latency", &sample_latency_py, py::arg("config"), py::arg("count") = 1000,
          "Draw `count` latency samples from the config's latency model and seed.");
    m.def("verify_trace", &verify_trace_py, py::arg("path"),
          "Re-run the consistency check against a trace file written by a previous run.");
    m.def("vc_tick", &vc_tick_py, py::arg("clock"), py::arg("pid"),
          "Advance a vector clock at one process.");
    m.def("vc_merge", &vc_merge_py, py::arg("a"), py::arg("b"),
          "Componentwise maximum of two vector clocks.");
    m.def("vc_compare", &vc_compare_py, py::arg("a"), py::arg("b"),
          "Causal order of two vector clocks: 'before', 'after', 'equal', or 'concurrent'.");
}
