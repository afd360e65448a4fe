#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "snapsim/latency.hpp"
#include "snapsim/snapshot_types.hpp"

namespace snapsim {

enum class InitiationRule : std::uint8_t { AfterFirstSend, AtTime };

// One complete run description. Defaults mirror the headline experiment:
// 90 hosts, 10 messages each, Poisson(10) latencies, constant send gaps.
struct ExperimentConfig {
    std::uint32_t hosts = 90;
    std::uint32_t messages_per_host = 10;
    Algorithm algorithm = Algorithm::ChandyLamport;
    std::optional<Ordering> ordering; // defaults to the algorithm's own
    LatencyModel latency{};
    IntervalModel interval{};
    ProcessId initiator = 0;
    InitiationRule initiation = InitiationRule::AfterFirstSend;
    VirtualTime initiation_time = 0.0; // AtTime only
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
    std::uint64_t event_cap = 10'000'000;
    std::optional<std::filesystem::path> trace_path;

    Ordering effective_ordering() const { return ordering.value_or(required_ordering(algorithm)); }

    // ConfigError on anything unusable, including an ordering the algorithm
    // is not specified for.
    void validate() const;
};

// Flat key=value config file ('#' comments, blank lines ignored). Unknown keys
// are ConfigErrors, as are malformed values.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Applies one key=value pair; CLI flags funnel through this too, so the file
// and the flags cannot drift apart.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

} // namespace snapsim
