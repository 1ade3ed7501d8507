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

#include "burstkit/pdmp.hpp"

#include <algorithm>
#include <cmath>

#include "burstkit/burst.hpp"

namespace burstkit {

ContinuousTrajectory simulate_pdmp_2d(const ValidatedContinuousSpec& spec, double t_end, std::uint64_t seed) {
    RandomStream rng(seed);
    ContinuousTrajectory traj;
    traj.flow = {spec->g1, spec->g2, spec->k2};
    run_pdmp_2d(spec, t_end, rng, traj);
    return traj;
}

ReducedPdmpSpec reduced_pdmp(const ContinuousModelSpec& base) {
    ReducedPdmpSpec out;
    out.g2 = base.g2;
    out.lambda1 = base.lambda1;
    out.hbar = rescale_density(base.burst, base.k2, base.g1);
    out.x2_initial = base.initial.x2;
    out.event_cap = base.event_cap;
    return out;
}

ContinuousTrajectory simulate_pdmp_1d(const ReducedPdmpSpec& spec, double t_end, std::uint64_t seed) {
    RandomStream rng(seed);
    ContinuousTrajectory traj;
    // x1 stays 0, so only g2 matters to the flow
    traj.flow = {1.0, spec.g2, 0.0};
    run_pdmp_1d(spec, t_end, rng, traj);
    return traj;
}

ContinuousTrajectory simulate_pdmp_1d(double g2, const RateFunction& lambda1, const BurstDensity& hbar,
                                      double t_end, std::uint64_t seed, double x2_initial) {
    ReducedPdmpSpec spec;
    spec.g2 = g2;
    spec.lambda1 = lambda1;
    spec.hbar = hbar;
    spec.x2_initial = x2_initial;
    return simulate_pdmp_1d(spec, t_end, seed);
}

std::vector<ContinuousState> sample_on_grid(const ContinuousTrajectory& traj, const std::vector<double>& times) {
    std::vector<ContinuousState> out;
    out.reserve(times.size());
    std::size_t next = 0;
    double anchor_time = 0.0;
    ContinuousState anchor = traj.initial;
    for (double t : times) {
        if (t < anchor_time) throw DomainError("grid times must be non-decreasing");
        while (next < traj.events.size() && traj.events[next].time <= t) {
            anchor_time = traj.events[next].time;
            anchor = traj.events[next].after;
            ++next;
        }
        out.push_back(flow_exact(anchor, traj.flow, t - anchor_time));
    }
    return out;
}

double OdePath::at(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * values[i - 1] + w * values[i];
}

namespace {

std::vector<double> rk4(const ContinuousModelSpec& spec, double x0, double t_end, long steps) {
    const double b = spec.burst.mean();
    const double gain = b * spec.k2 / spec.g1;
    auto rhs = [&](double x) { return -spec.g2 * x + gain * spec.lambda1.eval_unchecked(std::max(x, 0.0)); };
    const double h = t_end / static_cast<double>(steps);
    std::vector<double> values(static_cast<std::size_t>(steps) + 1);
    double x = x0;
    values[0] = x;
    for (long i = 1; i <= steps; ++i) {
        const double k1 = rhs(x);
        const double k2 = rhs(x + 0.5 * h * k1);
        const double k3 = rhs(x + 0.5 * h * k2);
        const double k4 = rhs(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        values[static_cast<std::size_t>(i)] = x;
    }
    return values;
}

}  // namespace

OdePath integrate_ode_limit(const ContinuousModelSpec& spec, double x2_initial, double t_end, double dt) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
    if (!(x2_initial >= 0.0)) throw DomainError("initial x2 must be >= 0");
    const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
    OdePath path;
    path.values = rk4(spec, x2_initial, t_end, steps);
    const auto fine = rk4(spec, x2_initial, t_end, 2 * steps);
    path.times.resize(path.values.size());
    for (long i = 0; i <= steps; ++i) {
        const auto k = static_cast<std::size_t>(i);
        path.times[k] = t_end * static_cast<double>(i) / static_cast<double>(steps);
        const double ref = fine[2 * k];
        path.halving_error =
            std::max(path.halving_error, std::abs(path.values[k] - ref) / std::max(std::abs(ref), 1e-12));
    }
    if (path.halving_error > kOdeHalvingTolerance) throw StepTooLarge(dt, path.halving_error);
    return path;
}

}  // namespace burstkit
