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
#include <ostream>

#include <Eigen/Dense>

#include "burstkit/model.hpp"
#include "burstkit/rng.hpp"

namespace burstkit {

/// Auxiliary pure-birth process Y with killing, read on the X1 = 1 slice:
/// Y -> Y + 1 at lambda2(1, Y), killed at gamma1(1, Y).
class AuxiliaryProcessSpec {
public:
    /// Slice of a discrete model; throws HypothesisViolation without a
    /// positive kill-rate lower bound.
    static AuxiliaryProcessSpec from_model(const DiscreteModelSpec& spec);
    static AuxiliaryProcessSpec from_rates(RateFunction up_rate, RateFunction kill_rate);

    double up_rate(std::int64_t y) const noexcept {
        return up_.eval_unchecked(1.0, static_cast<double>(y));
    }
    double kill_rate(std::int64_t y) const noexcept {
        return kill_.eval_unchecked(1.0, static_cast<double>(y));
    }
    double kill_lower() const noexcept { return kill_lower_; }

private:
    AuxiliaryProcessSpec(BivariateRate up, BivariateRate kill);

    BivariateRate up_;
    BivariateRate kill_;
    double kill_lower_ = 0.0;
};

inline constexpr std::int64_t kBurstStepCap = 1'000'000;

/// Level of Y when it is killed, started from `start` (>= start). Runs the
/// embedded jump chain; the holding times do not affect the law.
std::int64_t sample_burst_discrete(std::int64_t start, const AuxiliaryProcessSpec& aux, RandomStream& rng);

/// P(increment = z) = (g1 / (g1 + k2)) (k2 / (k2 + g1))^z.
template <class Scalar>
Scalar geometric_burst_pmf(Scalar k2, Scalar g1, std::int64_t z) {
    using std::pow;
    if (!(g1 > Scalar(0))) throw DomainError("geometric burst law needs g1 > 0");
    if (!(k2 >= Scalar(0))) throw DomainError("geometric burst law needs k2 >= 0");
    if (z < 0) return Scalar(0);
    const Scalar p = k2 / (k2 + g1);
    return (g1 / (g1 + k2)) * pow(p, static_cast<Scalar>(z));
}

/// P(increment <= z), closed form 1 - p^(z+1).
double geometric_burst_cdf(double k2, double g1, std::int64_t z);

/// Kill-level kernel on {0..K}: row x is the law of the kill level of Y started
/// at x. Mass escaping past K is lumped on K. Solves the resolvent of the killed
/// generator, (kill - A) G = I, so the row equals gamma1(1, y) G(x, y).
Eigen::MatrixXd burst_kernel(const AuxiliaryProcessSpec& aux, int K);

/// Increment law started from `start`, with K grown until the lumped tail mass
/// is below `tail_tol`. Entry z is P(increment = z).
Eigen::VectorXd burst_increment_pmf(const AuxiliaryProcessSpec& aux, std::int64_t start, double tail_tol = 1e-6);

/// h_bar(x) = (g1 / k2) h(g1 x / k2): the protein burst law induced by mRNA bursts h.
BurstDensity rescale_density(const BurstDensity& h, double k2, double g1);

/// CSV table (z, probability) of the geometric burst law for z in {0..zmax}.
void write_geometric_pmf_csv(std::ostream& os, double k2, double g1, std::int64_t zmax);

}  // namespace burstkit
