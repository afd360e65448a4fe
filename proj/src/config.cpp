#include "snapsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "snapsim/errors.hpp"

namespace snapsim {

Algorithm parse_algorithm(std::string_view s) {
    if (s == "chandy-lamport" || s == "cl") return Algorithm::ChandyLamport;
    if (s == "lai-yang" || s == "ly") return Algorithm::LaiYang;
    if (s == "mattern") return Algorithm::Mattern;
    if (s == "ab-av" || s == "abav") return Algorithm::AbAv;
    throw ConfigError("unknown algorithm '" + std::string(s) +
                      "' (expected chandy-lamport|lai-yang|mattern|ab-av)");
}

Ordering parse_ordering(std::string_view s) {
    if (s == "fifo") return Ordering::Fifo;
    if (s == "non-fifo" || s == "nonfifo") return Ordering::NonFifo;
    if (s == "causal") return Ordering::Causal;
    throw ConfigError("unknown ordering '" + std::string(s) + "' (expected fifo|non-fifo|causal)");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
        std::uint64_t x = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a non-negative integer");
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

// Latency family selected by name; parameters keep their defaults until the
// dedicated keys override them.
LatencyDist default_dist(const std::string& name, const std::string& key) {
    if (name == "poisson") return PoissonLatency{};
    if (name == "pareto") return ParetoLatency{};
    if (name == "weibull") return WeibullLatency{};
    if (name == "arima") return ArimaLatency{};
    throw ConfigError("config key '" + key + "': unknown latency model '" + name +
                      "' (expected poisson|pareto|weibull|arima)");
}

template <class T>
T& dist_as(ExperimentConfig& cfg, const std::string& key) {
    if (auto* p = std::get_if<T>(&cfg.latency.dist)) return *p;
    throw ConfigError("config key '" + key + "' does not apply to latency model '" +
                      std::string(cfg.latency.kind_name()) + "'");
}

} // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "hosts") {
        cfg.hosts = static_cast<std::uint32_t>(parse_u64(key, value));
    } else if (key == "messages") {
        cfg.messages_per_host = static_cast<std::uint32_t>(parse_u64(key, value));
    } else if (key == "algorithm") {
        cfg.algorithm = parse_algorithm(value);
    } else if (key == "ordering") {
        cfg.ordering = parse_ordering(value);
    } else if (key == "latency") {
        cfg.latency.dist = default_dist(value, key);
    } else if (key == "latency.floor") {
        cfg.latency.floor = parse_double(key, value);
    } else if (key == "poisson.lambda") {
        dist_as<PoissonLatency>(cfg, key).lambda = parse_double(key, value);
    } else if (key == "pareto.xm") {
        dist_as<ParetoLatency>(cfg, key).xm = parse_double(key, value);
    } else if (key == "pareto.alpha") {
        dist_as<ParetoLatency>(cfg, key).alpha = parse_double(key, value);
    } else if (key == "weibull.shape") {
        dist_as<WeibullLatency>(cfg, key).shape = parse_double(key, value);
    } else if (key == "weibull.scale") {
        dist_as<WeibullLatency>(cfg, key).scale = parse_double(key, value);
    } else if (key == "arima.p" || key == "arima.d" || key == "arima.q") {
        auto& a = dist_as<ArimaLatency>(cfg, key);
        int v = static_cast<int>(parse_u64(key, value));
        if (key == "arima.p") a.p = v;
        else if (key == "arima.d") a.d = v;
        else a.q = v;
    } else if (key == "arima.ar") {
        dist_as<ArimaLatency>(cfg, key).ar = parse_double_list(key, value);
    } else if (key == "arima.ma") {
        dist_as<ArimaLatency>(cfg, key).ma = parse_double_list(key, value);
    } else if (key == "arima.mean") {
        dist_as<ArimaLatency>(cfg, key).mean = parse_double(key, value);
    } else if (key == "arima.sd") {
        dist_as<ArimaLatency>(cfg, key).innovation_sd = parse_double(key, value);
    } else if (key == "interval") {
        if (value == "constant") cfg.interval.dist = ConstantInterval{};
        else if (value == "poisson-process") cfg.interval.dist = PoissonProcessInterval{};
        else throw ConfigError("config key 'interval': expected constant|poisson-process, got '" + value + "'");
    } else if (key == "interval.gap") {
        if (auto* c = std::get_if<ConstantInterval>(&cfg.interval.dist)) c->gap = parse_double(key, value);
        else throw ConfigError("config key 'interval.gap' applies to the constant interval model only");
    } else if (key == "interval.rate") {
        if (auto* p = std::get_if<PoissonProcessInterval>(&cfg.interval.dist))
            p->rate = parse_double(key, value);
        else throw ConfigError("config key 'interval.rate' applies to the poisson-process interval model only");
    } else if (key == "initiator") {
        cfg.initiator = static_cast<ProcessId>(parse_u64(key, value));
    } else if (key == "initiation") {
        if (value == "after-first-send") cfg.initiation = InitiationRule::AfterFirstSend;
        else if (value == "at-time") cfg.initiation = InitiationRule::AtTime;
        else throw ConfigError("config key 'initiation': expected after-first-send|at-time, got '" + value + "'");
    } else if (key == "initiation.time") {
        cfg.initiation_time = parse_double(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "replications") {
        cfg.replications = static_cast<std::uint32_t>(parse_u64(key, value));
    } else if (key == "event_cap") {
        cfg.event_cap = parse_u64(key, value);
    } else if (key == "trace") {
        cfg.trace_path = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        apply_key(cfg, key, value);
    }
    return cfg;
}

void ExperimentConfig::validate() const {
    if (hosts == 0) throw ConfigError("hosts must be >= 1");
    if (initiator >= hosts)
        throw ConfigError("initiator " + std::to_string(initiator) + " out of range for " +
                          std::to_string(hosts) + " hosts");
    if (replications == 0) throw ConfigError("replications must be >= 1");
    if (event_cap == 0) throw ConfigError("event_cap must be >= 1");
    if (initiation == InitiationRule::AtTime &&
        (!(initiation_time >= 0.0) || !std::isfinite(initiation_time)))
        throw ConfigError("initiation.time must be finite and >= 0");
    if (effective_ordering() != required_ordering(algorithm))
        throw ConfigError(std::string("algorithm ") + algorithm_name(algorithm) + " requires " +
                          ordering_name(required_ordering(algorithm)) + " ordering, got " +
                          ordering_name(effective_ordering()));
    try {
        latency.validate();
        interval.validate();
    } catch (const InvalidParametersError& e) {
        throw ConfigError(e.what());
    }
}

} // namespace snapsim
