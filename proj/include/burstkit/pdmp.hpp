/*
   Copyright 2026 The burstkit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "burstkit/model.hpp"
#include "burstkit/rng.hpp"
#include "burstkit/trajectory.hpp"

namespace burstkit {

/// Relative gap |g1 - g2| / max(g1, g2) below which the confluent form is used.
inline constexpr double kConfluentThreshold = 1e-8;

/// Exact solution of dx1 = -g1 x1, dx2 = -g2 x2 + k2 x1 after time dt.
template <class Scalar>
std::pair<Scalar, Scalar> flow_exact(Scalar x1, Scalar x2, Scalar g1, Scalar g2, Scalar k2, Scalar dt) {
    using std::abs;
    using std::exp;
    using std::expm1;
    using std::max;
    using std::min;
    const Scalar y1 = x1 * exp(-g1 * dt);
    const Scalar gap = abs(g2 - g1);
    const Scalar slow = min(g1, g2);
    Scalar kernel;  // (e^{-g1 dt} - e^{-g2 dt}) / (g2 - g1)
    if (gap < Scalar(kConfluentThreshold) * max(g1, g2)) {
        const Scalar u = gap * dt;
        kernel = dt * exp(-slow * dt) * (Scalar(1) - u / Scalar(2) + u * u / Scalar(6));
    } else {
        kernel = exp(-slow * dt) * (-expm1(-gap * dt)) / gap;
    }
    return {y1, x2 * exp(-g2 * dt) + k2 * x1 * kernel};
}

inline ContinuousState flow_exact(const ContinuousState& s, const FlowParams& p, double dt) {
    const auto [x1, x2] = flow_exact(s.x1, s.x2, p.g1, p.g2, p.k2, dt);
    return {x1, x2};
}

/// PDMP with jumps of x1 at intensity lambda1(x2); thinning against
/// c + K (x2 + k2 x1 window) over lookahead windows (a single global bound
/// when lambda1 is bounded). Lands exactly on t_end.
template <EventSink<ContinuousState> Sink>
void run_pdmp_2d(const ValidatedContinuousSpec& validated, double t_end, RandomStream& rng, Sink& sink) {
    if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
    const ContinuousModelSpec& spec = validated.spec();
    const FlowParams flow{spec.g1, spec.g2, spec.k2};
    const LinearBound bound = spec.lambda1.linear_bound();
    const double window = spec.lookahead.value_or(1.0 / spec.g1);
    ContinuousState state = spec.initial;
    sink.start(state);
    double t = 0.0;
    std::uint64_t steps = 0;
    while (t < t_end && !stop_requested(sink)) {
        double horizon = t_end;
        double majorant = bound.c;
        if (bound.slope > 0.0) {
            horizon = std::min(t + window, t_end);
            majorant += bound.slope * (state.x2 + spec.k2 * state.x1 * (horizon - t));
        }
        const double dt = majorant > 0.0 ? rng.exponential(majorant) : horizon - t;
        if (t + dt >= horizon) {
            state = flow_exact(state, flow, horizon - t);
            t = horizon;
            continue;
        }
        if (++steps > spec.event_cap) throw EventBudgetExceeded(spec.event_cap);
        t += dt;
        state = flow_exact(state, flow, dt);
        if (rng.uniform() * majorant < spec.lambda1.eval_unchecked(state.x2)) {
            const ContinuousState before = state;
            state.x1 += spec.burst.sample(rng);
            sink.record(t, before, state);
        }
    }
    sink.finish(t_end, state);
}

ContinuousTrajectory simulate_pdmp_2d(const ValidatedContinuousSpec& spec, double t_end, std::uint64_t seed);

/// One-dimensional bursting protein model dx2 = -g2 x2 + jumps ~ hbar at lambda1(x2).
struct ReducedPdmpSpec {
    double g2 = 1.0;
    RateFunction lambda1 = RateFunction::constant(1.0);
    BurstDensity hbar = BurstDensity::exponential(1.0);
    double x2_initial = 0.0;
    std::uint64_t event_cap = kDefaultEventCap;
};

/// Limit model of an (unscaled) two-dimensional spec: hbar = rescale_density(h, k2, g1).
ReducedPdmpSpec reduced_pdmp(const ContinuousModelSpec& base);

/// Since x2 only decays between jumps, c + K x2 at the last jump dominates the
/// intensity until the next one.
template <EventSink<ContinuousState> Sink>
void run_pdmp_1d(const ReducedPdmpSpec& spec, double t_end, RandomStream& rng, Sink& sink) {
    if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
    if (!(spec.g2 > 0.0)) throw DomainError("g2 must be > 0");
    if (!(spec.x2_initial >= 0.0)) throw DomainError("initial x2 must be >= 0");
    const LinearBound bound = spec.lambda1.linear_bound();
    ContinuousState state{0.0, spec.x2_initial};
    sink.start(state);
    double t = 0.0;
    std::uint64_t steps = 0;
    while (!stop_requested(sink)) {
        const double majorant = bound.c + bound.slope * state.x2;
        const double dt = majorant > 0.0 ? rng.exponential(majorant) : t_end - t;
        if (t + dt >= t_end) {
            state.x2 *= std::exp(-spec.g2 * (t_end - t));
            t = t_end;
            break;
        }
        if (++steps > spec.event_cap) throw EventBudgetExceeded(spec.event_cap);
        t += dt;
        state.x2 *= std::exp(-spec.g2 * dt);
        if (rng.uniform() * majorant < spec.lambda1.eval_unchecked(state.x2)) {
            const ContinuousState before = state;
            state.x2 += spec.hbar.sample(rng);
            sink.record(t, before, state);
        }
    }
    sink.finish(t, state);
}

ContinuousTrajectory simulate_pdmp_1d(const ReducedPdmpSpec& spec, double t_end, std::uint64_t seed);
ContinuousTrajectory simulate_pdmp_1d(double g2, const RateFunction& lambda1, const BurstDensity& hbar,
                                      double t_end, std::uint64_t seed, double x2_initial = 0.0);

/// Path values at the given non-decreasing times in [0, t_end], following the
/// flow between recorded jumps (right-continuous at jump times).
std::vector<ContinuousState> sample_on_grid(const ContinuousTrajectory& traj, const std::vector<double>& times);

/// Deterministic limit dx2/dt = -g2 x2 + b k2 lambda1(x2) / g1 on a uniform grid.
struct OdePath {
    std::vector<double> times;
    std::vector<double> values;
    /// max relative change between the dt and dt/2 solutions on shared nodes
    double halving_error = 0.0;

    double terminal() const { return values.back(); }
    /// Linear interpolation between nodes.
    double at(double t) const;
};

inline constexpr double kOdeHalvingTolerance = 1e-6;

/// Classical RK4 with step <= dt; throws StepTooLarge when halving the step
/// moves the solution by more than 1e-6 relative.
OdePath integrate_ode_limit(const ContinuousModelSpec& spec, double x2_initial, double t_end, double dt);

/// (b k1 / g1, b k1 k2 / (g1 g2)).
template <class Scalar>
std::pair<Scalar, Scalar> equilibrium_means(Scalar b, Scalar k1, Scalar g1, Scalar g2, Scalar k2) {
    const Scalar x1 = b * k1 / g1;
    return {x1, x1 * k2 / g2};
}

}  // namespace burstkit
