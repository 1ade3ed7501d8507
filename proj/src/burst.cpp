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

#include "burstkit/burst.hpp"

#include <cmath>

namespace burstkit {

AuxiliaryProcessSpec::AuxiliaryProcessSpec(BivariateRate up, BivariateRate kill)
    : up_(std::move(up)), kill_(std::move(kill)) {
    const double lower =
        kill_.zero_on_zero == Argument::X2 ? 0.0 : kill_.on_x1(1.0) * kill_.on_x2.inf_from(0.0);
    if (!(lower > 0.0)) throw HypothesisViolation({{"kill_rate ≥ γ̲ > 0", {1.0, 0.0}}});
    kill_lower_ = lower;
}

AuxiliaryProcessSpec AuxiliaryProcessSpec::from_model(const DiscreteModelSpec& spec) {
    return AuxiliaryProcessSpec(spec.lambda2, spec.gamma1);
}

AuxiliaryProcessSpec AuxiliaryProcessSpec::from_rates(RateFunction up_rate, RateFunction kill_rate) {
    return AuxiliaryProcessSpec(BivariateRate::of_x2(std::move(up_rate)), BivariateRate::of_x2(std::move(kill_rate)));
}

std::int64_t sample_burst_discrete(std::int64_t start, const AuxiliaryProcessSpec& aux, RandomStream& rng) {
    std::int64_t y = start;
    for (std::int64_t step = 0; step < kBurstStepCap; ++step) {
        const double up = aux.up_rate(y);
        if (up == 0.0) return y;
        const double kill = aux.kill_rate(y);
        if (rng.uniform() * (up + kill) >= up) return y;
        ++y;
    }
    throw BurstCapExceeded(static_cast<std::uint64_t>(start), static_cast<std::uint64_t>(kBurstStepCap));
}

double geometric_burst_cdf(double k2, double g1, std::int64_t z) {
    if (!(g1 > 0.0)) throw DomainError("geometric burst law needs g1 > 0");
    if (z < 0) return 0.0;
    const double p = k2 / (k2 + g1);
    return -std::expm1(static_cast<double>(z + 1) * std::log(p));
}

Eigen::MatrixXd burst_kernel(const AuxiliaryProcessSpec& aux, int K) {
    if (K < 1) throw DomainError("burst kernel needs K >= 1");
    const Eigen::Index size = K + 1;
    // M = diag(kill + up) - superdiag(up): the killed generator, negated.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd kill(size);
    for (Eigen::Index y = 0; y < size; ++y) {
        kill(y) = aux.kill_rate(y);
        const double up = aux.up_rate(y);
        M(y, y) = kill(y) + (y < K ? up : 0.0);
        if (y < K) M(y, y + 1) = -up;
    }
    Eigen::MatrixXd kernel = M.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd(kill.asDiagonal()));
    // the boundary level absorbs everything that would climb past K
    for (Eigen::Index x = 0; x < size; ++x) kernel(x, K) = 1.0 - kernel.row(x).head(K).sum();
    return kernel;
}

Eigen::VectorXd burst_increment_pmf(const AuxiliaryProcessSpec& aux, std::int64_t start, double tail_tol) {
    for (int width = 32;; width *= 2) {
        const int K = static_cast<int>(start) + width;
        const Eigen::MatrixXd kernel = burst_kernel(aux, K);
        if (kernel(start, K) < tail_tol || width >= (1 << 20)) {
            return kernel.row(start).segment(start, width + 1).transpose();
        }
    }
}

BurstDensity rescale_density(const BurstDensity& h, double k2, double g1) {
    if (!(k2 > 0.0) || !(g1 > 0.0)) throw DomainError("density rescaling needs k2, g1 > 0");
    if (k2 == g1) return h;
    return h.stretched(k2 / g1);
}

void write_geometric_pmf_csv(std::ostream& os, double k2, double g1, std::int64_t zmax) {
    os << "z,probability\n";
    os.precision(17);
    for (std::int64_t z = 0; z <= zmax; ++z) os << z << ',' << geometric_burst_pmf(k2, g1, z) << '\n';
}

}  // namespace burstkit
