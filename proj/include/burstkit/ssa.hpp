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

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "burstkit/burst.hpp"
#include "burstkit/model.hpp"
#include "burstkit/rng.hpp"
#include "burstkit/trajectory.hpp"

namespace burstkit {

/// Exact direct-method SSA of the scaled chain: reactions
/// lambda1, N gamma1, N lambda2, gamma2 acting by +-1 on (X1, X2).
template <EventSink<DiscreteState> Sink>
void run_full_2d(const ValidatedDiscreteSpec& validated, double t_end, RandomStream& rng, Sink& sink) {
    if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
    const DiscreteModelSpec& spec = validated.spec();
    const double N = static_cast<double>(spec.scale);
    DiscreteState state = spec.initial;
    sink.start(state);
    double t = 0.0;
    std::uint64_t events = 0;
    while (!stop_requested(sink)) {
        const double x1 = static_cast<double>(state.x1);
        const double x2 = static_cast<double>(state.x2);
        const double r1 = spec.lambda1.eval_unchecked(x1, x2);
        const double r2 = N * spec.gamma1.eval_unchecked(x1, x2);
        const double r3 = N * spec.lambda2.eval_unchecked(x1, x2);
        const double r4 = spec.gamma2.eval_unchecked(x1, x2);
        const double total = r1 + r2 + r3 + r4;
        if (!(total > 0.0)) {
            t = t_end;
            break;
        }
        const double dt = rng.exponential(total);
        if (t + dt > t_end) {
            t = t_end;
            break;
        }
        t += dt;
        if (++events > spec.event_cap) throw EventBudgetExceeded(spec.event_cap);
        const double u = rng.uniform() * total;
        const DiscreteState before = state;
        if (u < r1)
            ++state.x1;
        else if (u < r1 + r2)
            --state.x1;
        else if (u < r1 + r2 + r3)
            ++state.x2;
        else
            --state.x2;
        sink.record(t, before, state);
    }
    sink.finish(t, state);
}

/// Limit chain on the X1 = 0 slice: bursts at lambda1(0, X) to the kill level
/// of the auxiliary process started at X; deaths X -> X - 1 at gamma2(0, X).
/// Zero-size bursts are recorded as events.
template <EventSink<DiscreteState> Sink>
void run_reduced_1d(const ValidatedDiscreteSpec& validated, double t_end, RandomStream& rng, Sink& sink) {
    if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
    const DiscreteModelSpec& spec = validated.spec();
    const auto aux = AuxiliaryProcessSpec::from_model(spec);
    DiscreteState state{0, spec.initial.x2};
    sink.start(state);
    double t = 0.0;
    std::uint64_t events = 0;
    while (!stop_requested(sink)) {
        const double x = static_cast<double>(state.x2);
        const double burst = spec.lambda1.eval_unchecked(0.0, x);
        const double death = spec.gamma2.eval_unchecked(0.0, x);
        const double total = burst + death;
        if (!(total > 0.0)) {
            t = t_end;
            break;
        }
        const double dt = rng.exponential(total);
        if (t + dt > t_end) {
            t = t_end;
            break;
        }
        t += dt;
        if (++events > spec.event_cap) throw EventBudgetExceeded(spec.event_cap);
        const DiscreteState before = state;
        if (rng.uniform() * total < burst)
            state.x2 = sample_burst_discrete(state.x2, aux, rng);
        else
            --state.x2;
        sink.record(t, before, state);
    }
    sink.finish(t, state);
}

DiscreteTrajectory simulate_full_2d(const ValidatedDiscreteSpec& spec, double t_end, std::uint64_t seed);
DiscreteTrajectory simulate_reduced_1d(const ValidatedDiscreteSpec& spec, double t_end, std::uint64_t seed);

/// Fraction of [0, t_end] spent with X1 >= 1, exact from the event times.
double occupation_fraction(const DiscreteTrajectory& traj, double t_end);

/// One visit of X1 away from 0.
struct ExcursionRecord {
    double start = 0.0;
    double end = 0.0;
    std::int64_t delta_x2 = 0;
};

/// Collects completed excursions; stops the engine once `target` are seen.
struct ExcursionCollector {
    std::size_t target = 0;  ///< 0 means unlimited
    std::vector<ExcursionRecord> records;

    void start(const DiscreteState& s);
    void record(double t, const DiscreteState& before, const DiscreteState& after);
    void finish(double, const DiscreteState&) {}
    bool stop_requested() const { return target != 0 && records.size() >= target; }

private:
    bool open_ = false;
    double opened_at_ = 0.0;
    std::int64_t x2_at_open_ = 0;
};

std::vector<ExcursionRecord> excursions(const DiscreteTrajectory& traj);

// ---------------------------------------------------------------------------
// truncated stationary solver

/// Full chain on {0..K}^2, state index x1 * (K + 1) + x2.
struct FullChainGenerator {
    DiscreteModelSpec spec;
};

struct GeometricBurstLaw {
    double k2 = 1.0;
    double g1 = 1.0;
};

/// Limit chain on {0..K}. Burst rows use the closed-form geometric law when
/// given, otherwise the resolvent kernel of the auxiliary process.
struct ReducedChainGenerator {
    DiscreteModelSpec spec;
    std::optional<GeometricBurstLaw> geometric;
};

/// Plain birth-death chain on {0..K}.
struct BirthDeathGenerator {
    RateFunction birth;
    RateFunction death;
};

using TruncatedGenerator = std::variant<FullChainGenerator, ReducedChainGenerator, BirthDeathGenerator>;

struct StationaryDistribution {
    Eigen::VectorXd pi;
    int K = 0;
    bool two_dimensional = false;
    /// Mass on states touching the truncation boundary.
    double boundary_mass = 0.0;

    double at(int x1, int x2) const { return pi(x1 * (K + 1) + x2); }
    Eigen::VectorXd marginal_x1() const;
    Eigen::VectorXd marginal_x2() const;
};

/// Solves pi Q = 0, sum pi = 1 on the truncated space (outflow past K lands on
/// K). Throws SingularSystem for a non-unique solution and TruncationTooSmall
/// when the boundary mass exceeds `max_boundary_mass`.
StationaryDistribution stationary_solve_truncated(const TruncatedGenerator& generator, int K,
                                                  double max_boundary_mass = 1e-3);

}  // namespace burstkit
