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

#include "doctest.h"

#include <cmath>
#include <vector>

#include "burstkit/ssa.hpp"
#include "burstkit/stats.hpp"

using namespace burstkit;

namespace {

// Fraction of [0, t_end] spent at each level of the selected coordinate.
template <class Get>
Eigen::VectorXd occupation_histogram(const DiscreteTrajectory& traj, int K, Get coordinate) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(K + 1);
    double t = 0.0;
    DiscreteState s = traj.initial;
    for (const auto& e : traj.events) {
        h(std::min<std::int64_t>(coordinate(s), K)) += e.time - t;
        t = e.time;
        s = e.after;
    }
    h(std::min<std::int64_t>(coordinate(s), K)) += traj.t_end - t;
    return h / traj.t_end;
}

EmpiricalDistribution geometric_law(double k2, double g1, int zmax) {
    std::vector<double> z, w;
    for (int i = 0; i <= zmax; ++i) {
        z.push_back(i);
        w.push_back(geometric_burst_pmf(k2, g1, i));
    }
    return EmpiricalDistribution::weighted(z, w);
}

}  // namespace

TEST_CASE("absorbing and pure-death full chains") {
    const auto still = validate_spec(mrna_protein_chain(1.0, 1.0, 1.0, RateFunction::constant(0.0)));
    const auto traj = simulate_full_2d(still, 10.0, 1);
    CHECK(traj.events.empty());
    CHECK(traj.terminal.x1 == 0);
    CHECK(traj.terminal.x2 == 0);
    CHECK(traj.t_end == 10.0);

    const auto dying = validate_spec(mrna_protein_chain(0.7, 1.0, 0.0, RateFunction::constant(0.0), 1, {5, 0}));
    const auto path = simulate_full_2d(dying, 100.0, 2);
    CHECK(path.events.size() == 5);
    for (const auto& e : path.events) {
        CHECK(e.after.x1 == e.before.x1 - 1);
        CHECK(e.after.x2 == 0);
    }
    CHECK(path.terminal.x1 == 0);
}

TEST_CASE("pure-death reduced chain") {
    const auto spec = validate_spec(mrna_protein_chain(1.0, 0.5, 1.0, RateFunction::constant(0.0), 1, {0, 3}));
    const auto traj = simulate_reduced_1d(spec, 1000.0, 4);
    REQUIRE(traj.events.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(traj.events[i].after.x2 == 2 - static_cast<std::int64_t>(i));
}

TEST_CASE("runs are deterministic in the seed") {
    const auto spec = validate_spec(mrna_protein_chain(1.0, 1.0, 1.0, RateFunction::hill(0.5, 2.0, 2), 10));
    const auto a = simulate_full_2d(spec, 20.0, 77);
    const auto b = simulate_full_2d(spec, 20.0, 77);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        REQUIRE(a.events[i].time == b.events[i].time);
        REQUIRE(a.events[i].after.x1 == b.events[i].after.x1);
        REQUIRE(a.events[i].after.x2 == b.events[i].after.x2);
    }
    const auto c = simulate_reduced_1d(spec, 20.0, 78);
    const auto d = simulate_reduced_1d(spec, 20.0, 78);
    REQUIRE(c.events.size() == d.events.size());
    for (std::size_t i = 0; i < c.events.size(); ++i) REQUIRE(c.events[i].after.x2 == d.events[i].after.x2);
    CHECK(simulate_full_2d(spec, 20.0, 79).events.size() != a.events.size());
}

TEST_CASE("counts never go negative") {
    const auto spec = validate_spec(mrna_protein_chain(2.0, 1.0, 3.0, RateFunction::hill(0.2, 1.0, 1), 5));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto& e : simulate_full_2d(spec, 10.0, seed).events) REQUIRE((e.after.x1 >= 0 && e.after.x2 >= 0));
        for (const auto& e : simulate_reduced_1d(spec, 10.0, seed).events) REQUIRE(e.after.x2 >= 0);
    }
}

TEST_CASE("SSA holding times are exponential in the summed rate") {
    // R(state) * holding time is Exp(1) given the state
    auto chain = mrna_protein_chain(1.0, 1.0, 2.0, RateFunction::constant(3.0), 2);
    const auto spec = validate_spec(chain);
    const auto traj = simulate_full_2d(spec, 1e6, 5);
    std::vector<double> scaled;
    double t = 0.0;
    for (const auto& e : traj.events) {
        const double x1 = static_cast<double>(e.before.x1), x2 = static_cast<double>(e.before.x2);
        const double R = chain.lambda1(x1, x2) + 2.0 * chain.gamma1(x1, x2) + 2.0 * chain.lambda2(x1, x2) +
                         chain.gamma2(x1, x2);
        scaled.push_back(R * (e.time - t));
        t = e.time;
        if (scaled.size() == 10000) break;
    }
    REQUIRE(scaled.size() == 10000);
    const auto ks = ks_test(scaled, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("event cap") {
    auto chain = mrna_protein_chain(1.0, 1.0, 1.0, RateFunction::constant(5.0));
    chain.event_cap = 10;
    const auto spec = validate_spec(chain);
    CHECK_THROWS_AS(simulate_full_2d(spec, 1e4, 1), EventBudgetExceeded);
    CHECK_THROWS_AS(simulate_reduced_1d(spec, 1e4, 1), EventBudgetExceeded);
}

TEST_CASE("occupation fraction") {
    DiscreteTrajectory flat;
    flat.start({0, 4});
    flat.finish(3.0, {0, 4});
    CHECK(occupation_fraction(flat, 3.0) == 0.0);

    DiscreteTrajectory half;
    half.start({1, 0});
    half.record(2.0, {1, 0}, {0, 0});
    half.finish(4.0, {0, 0});
    CHECK(occupation_fraction(half, 4.0) == 0.5);

    DiscreteTrajectory twice;
    twice.start({0, 0});
    twice.record(1.0, {0, 0}, {1, 0});
    twice.record(1.5, {1, 0}, {2, 0});
    twice.record(2.0, {2, 0}, {0, 0});
    twice.record(3.0, {0, 0}, {1, 0});
    twice.finish(4.0, {1, 0});
    CHECK(occupation_fraction(twice, 4.0) == 0.5);
}

TEST_CASE("excursions") {
    DiscreteTrajectory traj;
    traj.start({0, 2});
    traj.record(1.0, {0, 2}, {1, 2});
    traj.record(1.5, {1, 2}, {1, 3});
    traj.record(1.7, {1, 3}, {1, 4});
    traj.record(2.0, {1, 4}, {0, 4});
    traj.record(3.0, {0, 4}, {0, 3});
    traj.record(4.0, {0, 3}, {1, 3});
    traj.finish(5.0, {1, 3});
    const auto ex = excursions(traj);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].start == 1.0);
    CHECK(ex[0].end == 2.0);
    CHECK(ex[0].delta_x2 == 2);
}

TEST_CASE("reduced chain bursts are geometric") {
    const double k2 = 1.5, g1 = 1.0;
    const auto spec = validate_spec(mrna_protein_chain(g1, 0.2, k2, RateFunction::constant(1.0)));
    const auto traj = simulate_reduced_1d(spec, 1e6, 8);
    std::vector<double> bursts;
    for (const auto& e : traj.events) {
        if (e.after.x2 >= e.before.x2) bursts.push_back(static_cast<double>(e.after.x2 - e.before.x2));
        if (bursts.size() == 10000) break;
    }
    REQUIRE(bursts.size() == 10000);
    const double ks = ks_distance(EmpiricalDistribution::from_samples(bursts), geometric_law(k2, g1, 200));
    CHECK(ks < 0.02);
}

TEST_CASE("stationary solver: closed-form chains") {
    const auto death = stationary_solve_truncated(
        BirthDeathGenerator{RateFunction::constant(0.0), RateFunction::linear(0.0, 1.0)}, 20);
    CHECK(death.pi(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(death.pi.tail(20).cwiseAbs().maxCoeff() < 1e-12);

    const double lambda = 3.0, mu = 1.5;
    const auto bd = stationary_solve_truncated(
        BirthDeathGenerator{RateFunction::constant(lambda), RateFunction::linear(0.0, mu)}, 40);
    Eigen::VectorXd poisson(41);
    for (int k = 0; k <= 40; ++k) poisson(k) = std::exp(k * std::log(lambda / mu) - lambda / mu - std::lgamma(k + 1.0));
    poisson /= poisson.sum();
    CHECK((bd.pi - poisson).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(bd.boundary_mass < 1e-12);

    CHECK_THROWS_AS(stationary_solve_truncated(
                        BirthDeathGenerator{RateFunction::constant(0.0), RateFunction::constant(0.0)}, 5),
                    SingularSystem);
    CHECK_THROWS_AS(stationary_solve_truncated(
                        BirthDeathGenerator{RateFunction::constant(10.0), RateFunction::linear(0.0, 1.0)}, 8),
                    TruncationTooSmall);
}

TEST_CASE("stationary solver: full chain has a Poisson mRNA marginal") {
    const double k1 = 1.0, g1 = 1.0;
    const std::int64_t N = 2;
    const auto chain = mrna_protein_chain(g1, 1.0, 1.0, RateFunction::constant(k1), N);
    const auto st = stationary_solve_truncated(FullChainGenerator{chain}, 30);
    const Eigen::VectorXd m = st.marginal_x1();
    const double rate = k1 / (static_cast<double>(N) * g1);
    for (int k = 0; k <= 8; ++k)
        CHECK(m(k) == doctest::Approx(std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0))).epsilon(1e-8));
    // protein mean k1 k2 / (g1 g2)
    const Eigen::VectorXd m2 = st.marginal_x2();
    CHECK(m2.dot(Eigen::VectorXd::LinSpaced(31, 0, 30)) == doctest::Approx(1.0).epsilon(1e-6));

    const auto traj = simulate_full_2d(validate_spec(chain), 5e4, 21);
    const Eigen::VectorXd emp = occupation_histogram(traj, 30, [](const DiscreteState& s) { return s.x1; });
    CHECK(total_variation(emp, m) < 0.02);
}

TEST_CASE("reduced chain matches the truncated stationary oracle") {
    const auto chain = mrna_protein_chain(1.0, 1.0, 1.0, RateFunction::constant(1.0));
    const auto closed = stationary_solve_truncated(ReducedChainGenerator{chain, GeometricBurstLaw{1.0, 1.0}}, 60);
    const auto kernel = stationary_solve_truncated(ReducedChainGenerator{chain, std::nullopt}, 60);
    CHECK((closed.pi - kernel.pi).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(closed.pi.sum() == doctest::Approx(1.0).epsilon(1e-14));

    Trajectory<DiscreteState, ConstantFlow> traj;
    RandomStream rng(606);
    struct Capped {
        Trajectory<DiscreteState, ConstantFlow>& traj;
        void start(const DiscreteState& s) { traj.start(s); }
        void record(double t, const DiscreteState& b, const DiscreteState& a) { traj.record(t, b, a); }
        void finish(double t, const DiscreteState& s) { traj.finish(t, s); }
        bool stop_requested() const { return traj.events.size() >= 1'000'000; }
    } sink{traj};
    run_reduced_1d(validate_spec(chain), 1e9, rng, sink);
    REQUIRE(traj.events.size() == 1'000'000);
    const Eigen::VectorXd emp = occupation_histogram(traj, 60, [](const DiscreteState& s) { return s.x2; });
    CHECK(total_variation(emp, closed.pi) < 0.02);
}
