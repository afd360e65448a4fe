#include "snapsim/latency.hpp"

#include <algorithm>
#include <cmath>

#include "snapsim/errors.hpp"

namespace snapsim {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

void LatencyModel::validate() const {
    if (!std::isfinite(floor) || floor < 0.0)
        throw InvalidParametersError("latency: floor must be finite and >= 0");
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PoissonLatency>) {
                if (!finite_positive(m.lambda))
                    throw InvalidParametersError("poisson latency: lambda must be > 0");
            } else if constexpr (std::is_same_v<T, ParetoLatency>) {
                if (!finite_positive(m.xm)) throw InvalidParametersError("pareto latency: xm must be > 0");
                if (!finite_positive(m.alpha))
                    throw InvalidParametersError("pareto latency: alpha must be > 0");
            } else if constexpr (std::is_same_v<T, WeibullLatency>) {
                if (!finite_positive(m.shape))
                    throw InvalidParametersError("weibull latency: shape must be > 0");
                if (!finite_positive(m.scale))
                    throw InvalidParametersError("weibull latency: scale must be > 0");
            } else {
                if (m.p < 0 || m.d < 0 || m.q < 0)
                    throw InvalidParametersError("arima latency: orders must be >= 0");
                if (static_cast<int>(m.ar.size()) != m.p)
                    throw InvalidParametersError("arima latency: need exactly p AR coefficients");
                if (static_cast<int>(m.ma.size()) != m.q)
                    throw InvalidParametersError("arima latency: need exactly q MA coefficients");
                if (!std::isfinite(m.mean)) throw InvalidParametersError("arima latency: mean must be finite");
                if (!std::isfinite(m.innovation_sd) || m.innovation_sd < 0.0)
                    throw InvalidParametersError("arima latency: innovation_sd must be >= 0");
            }
        },
        dist);
}

const char* LatencyModel::kind_name() const {
    switch (dist.index()) {
        case 0: return "poisson";
        case 1: return "pareto";
        case 2: return "weibull";
        default: return "arima";
    }
}

LatencyModel LatencyModel::poisson(double lambda) { return LatencyModel{PoissonLatency{lambda}, 0.1}; }
LatencyModel LatencyModel::pareto(double xm, double alpha) { return LatencyModel{ParetoLatency{xm, alpha}, 0.1}; }
LatencyModel LatencyModel::weibull(double shape, double scale) {
    return LatencyModel{WeibullLatency{shape, scale}, 0.1};
}
LatencyModel LatencyModel::arima(ArimaLatency a) { return LatencyModel{std::move(a), 0.1}; }

ArimaState ArimaState::initial(const ArimaLatency& model) {
    ArimaState st;
    st.core.assign(static_cast<std::size_t>(model.p), 0.0);
    st.innovations.assign(static_cast<std::size_t>(model.q), 0.0);
    st.integrators.assign(static_cast<std::size_t>(model.d), 0.0);
    return st;
}

double pareto_icdf(double xm, double alpha, double u) {
    return xm * std::pow(u, -1.0 / alpha);
}

double weibull_icdf(double shape, double scale, double u) {
    return scale * std::pow(-std::log(u), 1.0 / shape);
}

double exponential_icdf(double rate, double u) {
    return -std::log(u) / rate;
}

double arima_next(ArimaState& state, const ArimaLatency& model, double floor, RngStream& rng) {
    // sd = 0 still consumes its draws, so the stream stays aligned.
    double eps = rng.normal(0.0, model.innovation_sd);
    // ARMA core on centered values; state holds the most recent p of them.
    double w = eps;
    for (int i = 0; i < model.p; ++i)
        w += model.ar[static_cast<std::size_t>(i)] * state.core[state.core.size() - 1 - static_cast<std::size_t>(i)];
    for (int j = 0; j < model.q; ++j)
        w += model.ma[static_cast<std::size_t>(j)] *
             state.innovations[state.innovations.size() - 1 - static_cast<std::size_t>(j)];

    if (model.p > 0) {
        state.core.erase(state.core.begin());
        state.core.push_back(w);
    }
    if (model.q > 0) {
        state.innovations.erase(state.innovations.begin());
        state.innovations.push_back(eps);
    }

    // d-fold integration of the de-centered series.
    double x = model.mean + w;
    for (double& acc : state.integrators) {
        acc += x;
        x = acc;
    }
    return std::max(floor, x);
}

LatencySampler::LatencySampler(LatencyModel model) : model_(std::move(model)) {
    model_.validate();
    if (const auto* a = std::get_if<ArimaLatency>(&model_.dist)) arima_ = ArimaState::initial(*a);
}

VirtualTime LatencySampler::sample(RngStream& rng) {
    double raw = std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PoissonLatency>) {
                return static_cast<double>(rng.poisson(m.lambda));
            } else if constexpr (std::is_same_v<T, ParetoLatency>) {
                return pareto_icdf(m.xm, m.alpha, rng.uniform01());
            } else if constexpr (std::is_same_v<T, WeibullLatency>) {
                return weibull_icdf(m.shape, m.scale, rng.uniform01());
            } else {
                return arima_next(arima_, m, model_.floor, rng);
            }
        },
        model_.dist);
    return std::max(model_.floor, raw);
}

void IntervalModel::validate() const {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantInterval>) {
                if (!finite_positive(m.gap)) throw InvalidParametersError("constant interval: gap must be > 0");
            } else {
                if (!finite_positive(m.rate))
                    throw InvalidParametersError("poisson-process interval: rate must be > 0");
            }
        },
        dist);
}

const char* IntervalModel::kind_name() const {
    return dist.index() == 0 ? "constant" : "poisson-process";
}

IntervalModel IntervalModel::constant(double gap) { return IntervalModel{ConstantInterval{gap}}; }
IntervalModel IntervalModel::poisson_process(double rate) { return IntervalModel{PoissonProcessInterval{rate}}; }

VirtualTime next_send_gap(const IntervalModel& model, RngStream& rng) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantInterval>) {
                return m.gap;
            } else {
                return rng.exponential(m.rate);
            }
        },
        model.dist);
}

} // namespace snapsim
