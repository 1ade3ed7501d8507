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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "burstkit/errors.hpp"
#include "burstkit/rng.hpp"
#include "burstkit/stats.hpp"

using namespace burstkit;

namespace {

EmpiricalDistribution of(std::vector<double> v) { return EmpiricalDistribution::from_samples(v); }

std::vector<double> random_samples(RandomStream& rng, int n, double scale) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = scale * (rng.uniform() - 0.3);
    return v;
}

}  // namespace

TEST_CASE("wasserstein1 examples") {
    CHECK(wasserstein1(of({1, 2, 3}), of({3, 2, 1})) == 0.0);
    CHECK(wasserstein1(EmpiricalDistribution::point_mass(0), EmpiricalDistribution::point_mass(1)) == 1.0);
    CHECK(wasserstein1(of({0, 1}), of({0, 2})) == doctest::Approx(0.5).epsilon(1e-15));
    // unequal sizes: {0} vs {0, 1}: CDF gap 1/2 on [0, 1)
    CHECK(wasserstein1(of({0}), of({0, 1})) == doctest::Approx(0.5));
}

TEST_CASE("ks_distance examples") {
    CHECK(ks_distance(of({1, 2, 3}), of({1, 2, 3})) == 0.0);
    CHECK(ks_distance(of({0, 1}), of({5, 6})) == 1.0);
    CHECK(ks_distance(of({0, 1}), of({0, 2})) == doctest::Approx(0.5));
}

TEST_CASE("weighted empirical distributions") {
    const std::vector<double> values{2.0, 0.0, 1.0};
    const std::vector<double> weights{1.0, 2.0, 1.0};
    const auto w = EmpiricalDistribution::weighted(values, weights);
    CHECK(w.is_weighted());
    CHECK(w.mean() == doctest::Approx(0.75));
    CHECK(w.cdf(0.0) == doctest::Approx(0.5));
    CHECK(w.cdf(1.5) == doctest::Approx(0.75));
    CHECK(w.quantile(0.5) == 0.0);
    CHECK(w.quantile(0.6) == 1.0);
    // same measure as the multiset {0, 0, 1, 2}
    CHECK(wasserstein1(w, of({0, 0, 1, 2})) == doctest::Approx(0.0).scale(1.0));
    CHECK(ks_distance(w, of({0, 0, 1, 2})) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("metric axioms, domination and permutation invariance") {
    RandomStream rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto xa = random_samples(rng, 1 + trial % 7, 2.0);
        const auto xb = random_samples(rng, 1 + trial % 5, 3.0);
        const auto xc = random_samples(rng, 2 + trial % 3, 1.0);
        const auto a = of(xa), b = of(xb), c = of(xc);
        REQUIRE(wasserstein1(a, b) == wasserstein1(b, a));
        REQUIRE(ks_distance(a, b) == ks_distance(b, a));
        REQUIRE(wasserstein1(a, b) <= wasserstein1(a, c) + wasserstein1(c, b) + 1e-12);
        REQUIRE(ks_distance(a, b) <= ks_distance(a, c) + ks_distance(c, b) + 1e-12);
        REQUIRE(wasserstein1(a, a) == 0.0);
        REQUIRE(ks_distance(a, a) == 0.0);

        const double lo = std::min(a.min(), b.min());
        const double hi = std::max(a.max(), b.max());
        REQUIRE(wasserstein1(a, b) <= (hi - lo) * ks_distance(a, b) + 1e-12);

        auto shuffled = xa;
        std::reverse(shuffled.begin(), shuffled.end());
        std::rotate(shuffled.begin(), shuffled.begin() + static_cast<long>(shuffled.size() / 2), shuffled.end());
        const auto p = of(shuffled);
        REQUIRE(wasserstein1(p, b) == wasserstein1(a, b));
        REQUIRE(ks_distance(p, b) == ks_distance(a, b));
        REQUIRE(p.mean() == doctest::Approx(a.mean()).epsilon(1e-14));
    }
}

TEST_CASE("moments with jackknife errors") {
    const std::vector<double> constant(50, 4.25);
    const auto m = moments(constant, 1);
    CHECK(m.value == 4.25);
    CHECK(m.se == 0.0);
    CHECK(moments(constant, 2).value == 0.0);

    const std::vector<double> two{0.0, 2.0};
    const auto t = moments(two, 1);
    CHECK(t.value == doctest::Approx(1.0));
    CHECK(t.se == doctest::Approx(1.0));
    CHECK(moments(two, 2).value == doctest::Approx(2.0));

    RandomStream rng(77);
    std::vector<double> draws(100000);
    for (auto& x : draws) x = rng.exponential(1.0 / 3.0);
    const auto e = moments(draws, 1);
    CHECK(std::abs(e.value - 3.0) < 3.0 * e.se);
    CHECK(e.se == doctest::Approx(3.0 / std::sqrt(1e5)).epsilon(0.05));
    const auto v = moments(draws, 2);
    CHECK(std::abs(v.value - 9.0) < 3.0 * v.se);

    CHECK_THROWS_AS(moments(std::vector<double>{1.0}, 1), DomainError);
    CHECK_THROWS_AS(moments(two, 3), DomainError);
}

TEST_CASE("total variation") {
    Eigen::VectorXd p(3), q(2);
    p << 0.5, 0.25, 0.25;
    q << 0.5, 0.5;
    CHECK(total_variation(p, q) == doctest::Approx(0.25));
    CHECK(total_variation(p, p) == 0.0);
}

TEST_CASE("special functions") {
    // Q(1, x) = e^{-x}; Q(1/2, x) = erfc(sqrt x)
    for (double x : {0.1, 1.0, 3.0, 20.0}) {
        CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        CHECK(gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
    }
    CHECK(kolmogorov_survival(0.0) == 1.0);
    // tabulated critical value of the Kolmogorov distribution at the 5% level
    CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("goodness-of-fit tests on known laws") {
    RandomStream rng(123);
    std::vector<double> u(5000);
    for (auto& x : u) x = rng.uniform();
    const auto good = ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(good.p_value > 0.01);
    const auto bad = ks_test(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); });
    CHECK(bad.p_value < 1e-6);

    std::vector<std::int64_t> counts(6, 0);
    for (int i = 0; i < 60000; ++i) ++counts[static_cast<std::size_t>(6.0 * rng.uniform())];
    Eigen::VectorXd fair = Eigen::VectorXd::Constant(6, 1.0 / 6.0);
    const auto chi = chi_square_test(counts, fair);
    CHECK(chi.dof == 5);
    CHECK(chi.p_value > 0.01);
    Eigen::VectorXd loaded = fair;
    loaded(0) += 0.02;
    loaded(5) -= 0.02;
    CHECK(chi_square_test(counts, loaded).p_value < 1e-6);
}

TEST_CASE("convergence_table verdicts") {
    auto sweep = [](std::vector<double> d) {
        std::vector<ScalePoint> pts;
        std::int64_t n = 1;
        for (double x : d) {
            pts.push_back({n, x, 0.0, 100});
            n *= 10;
        }
        return pts;
    };
    const auto good = convergence_table(sweep({1.0, 0.3, 0.1}), 0.15);
    CHECK(good.monotone_decrease == true);
    CHECK(good.final_below_threshold == true);
    CHECK(good.passed());

    const auto rising = convergence_table(sweep({0.1, 0.4, 0.9}), 0.15);
    CHECK(rising.monotone_decrease == false);
    CHECK_FALSE(rising.passed());

    // noise within two pooled standard errors is tolerated
    auto noisy = sweep({1.0, 0.10, 0.12});
    for (auto& p : noisy) p.se = 0.01;
    CHECK(convergence_table(noisy, 0.15).monotone_decrease == true);
    noisy[2].distance = 0.2;
    CHECK(convergence_table(noisy, 0.15).monotone_decrease == false);

    const auto short_sweep = convergence_table(sweep({0.5}), 0.1);
    CHECK_FALSE(short_sweep.monotone_decrease.has_value());
    CHECK_FALSE(short_sweep.final_below_threshold.has_value());
    CHECK(to_json(short_sweep)["verdict"]["monotone_decrease"] == "not-applicable");

    auto unordered = sweep({1.0, 0.3, 0.1});
    std::swap(unordered[0].n, unordered[1].n);
    CHECK_THROWS_AS(convergence_table(unordered, 0.1), DomainError);
    auto negative = sweep({1.0, -0.3, 0.1});
    CHECK_THROWS_AS(convergence_table(negative, 0.1), DomainError);

    std::ostringstream csv;
    write_csv(csv, good);
    CHECK(csv.str().rfind("n,distance,se,M\n1,", 0) == 0);
}
