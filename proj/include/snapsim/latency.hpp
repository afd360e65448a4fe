#pragma once

#include <variant>
#include <vector>

#include "snapsim/rng.hpp"
#include "snapsim/types.hpp"

namespace snapsim {

// ---- message latency models -------------------------------------------------

struct PoissonLatency {
    double lambda = 10.0;
};

struct ParetoLatency {
    double xm = 5.0;    // scale (minimum)
    double alpha = 2.5; // tail index
};

struct WeibullLatency {
    double shape = 1.5;  // k
    double scale = 10.0; // lambda
};

struct ArimaLatency {
    int p = 1;
    int d = 0;
    int q = 1;
    std::vector<double> ar{0.6};
    std::vector<double> ma{0.3};
    double mean = 10.0;
    double innovation_sd = 2.0;
};

using LatencyDist = std::variant<PoissonLatency, ParetoLatency, WeibullLatency, ArimaLatency>;

struct LatencyModel {
    LatencyDist dist{PoissonLatency{}};
    double floor = 0.1; // every sample is clamped up to this

    void validate() const; // InvalidParametersError
    const char* kind_name() const;

    static LatencyModel poisson(double lambda = 10.0);
    static LatencyModel pareto(double xm = 5.0, double alpha = 2.5);
    static LatencyModel weibull(double shape = 1.5, double scale = 10.0);
    static LatencyModel arima(ArimaLatency a = ArimaLatency{});
};

// Rolling state of the ARIMA generator: the last p centered ARMA values, the
// last q innovations, and one running accumulator per level of integration.
struct ArimaState {
    std::vector<double> core;        // most recent at the back
    std::vector<double> innovations; // most recent at the back
    std::vector<double> integrators;

    static ArimaState initial(const ArimaLatency& model);
};

// Inverse-CDF cores, exposed so tests can pin exact values for known u.
double pareto_icdf(double xm, double alpha, double u);
double weibull_icdf(double shape, double scale, double u);
double exponential_icdf(double rate, double u);

// One step of the ARIMA recurrence; advances state and returns the next value
// clamped to the floor.
double arima_next(ArimaState& state, const ArimaLatency& model, double floor, RngStream& rng);

// Stateful sampler facade: owns the ARIMA state when the model needs one.
class LatencySampler {
  public:
    explicit LatencySampler(LatencyModel model);

    VirtualTime sample(RngStream& rng);
    const LatencyModel& model() const { return model_; }

  private:
    LatencyModel model_;
    ArimaState arima_;
};

// ---- send interval models ----------------------------------------------------

struct ConstantInterval {
    double gap = 400.0;
};

struct PoissonProcessInterval {
    double rate = 0.0025; // exponential gaps, mean 1/rate
};

using IntervalDist = std::variant<ConstantInterval, PoissonProcessInterval>;

struct IntervalModel {
    IntervalDist dist{ConstantInterval{}};

    void validate() const; // InvalidParametersError
    const char* kind_name() const;

    static IntervalModel constant(double gap = 400.0);
    static IntervalModel poisson_process(double rate = 0.0025);
};

VirtualTime next_send_gap(const IntervalModel& model, RngStream& rng);

} // namespace snapsim
