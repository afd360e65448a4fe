#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snapsim/config.hpp"
#include "snapsim/errors.hpp"
#include "snapsim/harness.hpp"
#include "snapsim/metrics.hpp"
#include "snapsim/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1; // failed cell / inconsistent snapshot
constexpr int kExitConfig = 2; // unusable configuration or input

struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::string> algorithm;
    std::optional<std::string> latency;
    std::optional<std::string> interval;
    std::optional<std::uint32_t> hosts;
    std::optional<std::uint32_t> messages;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets; // raw key=value overrides
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "flat key=value config file");
    cmd->add_option("--algorithm", flags.algorithm, "chandy-lamport|lai-yang|mattern|ab-av");
    cmd->add_option("--latency", flags.latency, "poisson|pareto|weibull|arima");
    cmd->add_option("--interval", flags.interval, "constant|poisson-process");
    cmd->add_option("--hosts", flags.hosts, "number of processes");
    cmd->add_option("--messages", flags.messages, "app messages per process");
    cmd->add_option("--seed", flags.seed, "base RNG seed");
    cmd->add_option("--set", flags.sets, "extra key=value override (repeatable)")->take_all();
}

// Config file first, then flags on top, so the command line always wins.
snapsim::ExperimentConfig build_config(const CommonFlags& flags) {
    snapsim::ExperimentConfig cfg;
    if (flags.config) cfg = snapsim::parse_config_file(*flags.config);
    if (flags.algorithm) snapsim::apply_key(cfg, "algorithm", *flags.algorithm);
    if (flags.latency) snapsim::apply_key(cfg, "latency", *flags.latency);
    if (flags.interval) snapsim::apply_key(cfg, "interval", *flags.interval);
    if (flags.hosts) snapsim::apply_key(cfg, "hosts", std::to_string(*flags.hosts));
    if (flags.messages) snapsim::apply_key(cfg, "messages", std::to_string(*flags.messages));
    if (flags.seed) snapsim::apply_key(cfg, "seed", std::to_string(*flags.seed));
    for (const std::string& kv : flags.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw snapsim::ConfigError("--set expects key=value, got '" + kv + "'");
        snapsim::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

int cmd_run(const CommonFlags& flags, const std::string& out_dir, const std::optional<std::string>& trace) {
    snapsim::ExperimentConfig cfg = build_config(flags);
    if (trace) cfg.trace_path = *trace;
    cfg.validate();

    // Reuse the sweep result shape so single runs and sweeps emit identical CSV.
    snapsim::SweepResult result;
    std::uint64_t base_seed = cfg.seed;
    for (std::uint32_t rep = 0; rep < cfg.replications; ++rep) {
        snapsim::ExperimentConfig run_cfg = cfg;
        run_cfg.seed = base_seed + rep;
        if (rep > 0) run_cfg.trace_path.reset(); // trace covers the first replication
        snapsim::RunResult r = snapsim::run_experiment(run_cfg);
        result.summary.push_back({run_cfg.algorithm, run_cfg.latency.kind_name(),
                                  run_cfg.interval.kind_name(), run_cfg.seed, r.stats.stddev, r.stats.mean,
                                  r.stats.finalized_count});
        for (const auto& w : r.windows)
            result.windows.push_back({run_cfg.algorithm, run_cfg.latency.kind_name(),
                                      run_cfg.interval.kind_name(), run_cfg.seed, w.pid, w.start, w.end,
                                      w.finalized_at_quiescence});
        std::printf("run algorithm=%s latency=%s interval=%s seed=%llu: mean=%s stddev=%s quiescence=%s\n",
                    algorithm_name(run_cfg.algorithm), run_cfg.latency.kind_name(),
                    run_cfg.interval.kind_name(), static_cast<unsigned long long>(run_cfg.seed),
                    snapsim::format_time(r.stats.mean).c_str(), snapsim::format_time(r.stats.stddev).c_str(),
                    snapsim::format_time(r.quiescence_time).c_str());
    }
    snapsim::emit_csv(result, out_dir);
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, const std::string& out_dir, std::uint32_t replications) {
    snapsim::ExperimentConfig base = build_config(flags);
    base.validate(); // catches scale/seed issues; per-cell configs re-validate
    snapsim::SweepSpec spec = snapsim::SweepSpec::full_grid(base, replications);
    snapsim::SweepResult result = snapsim::run_sweep(spec);
    snapsim::emit_csv(result, out_dir);
    std::printf("sweep: %zu cells ok, %zu failed; csv under %s\n", result.summary.size(),
                result.failures.size(), out_dir.c_str());
    for (const auto& f : result.failures)
        std::fprintf(stderr, "cell failed: algorithm=%s latency=%s interval=%s seed=%llu: %s\n",
                     algorithm_name(f.algorithm), f.latency.c_str(), f.interval.c_str(),
                     static_cast<unsigned long long>(f.seed), f.error.c_str());
    return result.failures.empty() ? kExitOk : kExitFailure;
}

int cmd_verify(const std::string& trace_path) {
    snapsim::ParsedTrace trace = snapsim::parse_trace_file(trace_path);
    snapsim::CutCheck check = snapsim::verify_consistent_cut(trace.snapshot, trace.log);
    if (check.ok) {
        std::printf("verify %s: consistent (%zu log entries, %zu processes)\n", trace_path.c_str(),
                    trace.log.size(), trace.snapshot.locals.size());
        return kExitOk;
    }
    std::fprintf(stderr, "verify %s: INCONSISTENT rule=%c msg=%llu: %s\n", trace_path.c_str(), check.rule,
                 static_cast<unsigned long long>(check.msg), check.detail.c_str());
    return kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"snapsim: snapshot-recording durations in a simulated message-passing system"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string run_out = "out";
    std::optional<std::string> run_trace;
    CLI::App* run = app.add_subcommand("run", "run one configuration and write CSV results");
    add_common(run, run_flags);
    run->add_option("--out", run_out, "output directory for windows.csv/summary.csv");
    run->add_option("--trace", run_trace, "also write a trace log to this path");

    CommonFlags sweep_flags;
    std::string sweep_out = "out";
    std::uint32_t sweep_reps = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "run the full latency x algorithm x interval grid");
    add_common(sweep, sweep_flags);
    sweep->add_option("--out", sweep_out, "output directory for windows.csv/summary.csv");
    sweep->add_option("--replications", sweep_reps, "replications per cell");

    std::string verify_trace;
    CLI::App* verify = app.add_subcommand("verify", "re-check a trace log for cut consistency");
    verify->add_option("--trace", verify_trace, "trace file to verify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags, run_out, run_trace);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_out, sweep_reps);
        return cmd_verify(verify_trace);
    } catch (const snapsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const snapsim::InvalidParametersError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const snapsim::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitConfig;
    } catch (const snapsim::SimError& e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return kExitFailure;
    }
}
