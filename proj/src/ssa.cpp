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

#include "burstkit/ssa.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>

namespace burstkit {

DiscreteTrajectory simulate_full_2d(const ValidatedDiscreteSpec& spec, double t_end, std::uint64_t seed) {
    RandomStream rng(seed);
    DiscreteTrajectory traj;
    run_full_2d(spec, t_end, rng, traj);
    return traj;
}

DiscreteTrajectory simulate_reduced_1d(const ValidatedDiscreteSpec& spec, double t_end, std::uint64_t seed) {
    RandomStream rng(seed);
    DiscreteTrajectory traj;
    run_reduced_1d(spec, t_end, rng, traj);
    return traj;
}

double occupation_fraction(const DiscreteTrajectory& traj, double t_end) {
    if (!(t_end > 0.0)) throw DomainError("t_end must be > 0");
    double occupied = 0.0;
    double last = 0.0;
    bool busy = traj.initial.x1 >= 1;
    for (const auto& e : traj.events) {
        if (e.time >= t_end) break;
        if (busy) occupied += e.time - last;
        last = e.time;
        busy = e.after.x1 >= 1;
    }
    if (busy) occupied += t_end - last;
    return occupied / t_end;
}

void ExcursionCollector::start(const DiscreteState& s) {
    open_ = false;
    records.clear();
    // a path starting inside an excursion has no observed start
    (void)s;
}

void ExcursionCollector::record(double t, const DiscreteState& before, const DiscreteState& after) {
    if (!open_ && before.x1 == 0 && after.x1 >= 1) {
        open_ = true;
        opened_at_ = t;
        x2_at_open_ = after.x2;
    } else if (open_ && after.x1 == 0) {
        open_ = false;
        records.push_back({opened_at_, t, after.x2 - x2_at_open_});
    }
}

std::vector<ExcursionRecord> excursions(const DiscreteTrajectory& traj) {
    ExcursionCollector collector;
    collector.start(traj.initial);
    for (const auto& e : traj.events) collector.record(e.time, e.before, e.after);
    return std::move(collector.records);
}

// ---------------------------------------------------------------------------

Eigen::VectorXd StationaryDistribution::marginal_x1() const {
    if (!two_dimensional) return Eigen::VectorXd::Unit(K + 1, 0);
    return pi.reshaped(K + 1, K + 1).colwise().sum().transpose();
}

Eigen::VectorXd StationaryDistribution::marginal_x2() const {
    if (!two_dimensional) return pi;
    return pi.reshaped(K + 1, K + 1).rowwise().sum();
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Transitions {
    Triplets entries;
    Eigen::VectorXd exit;

    explicit Transitions(Eigen::Index n) : exit(Eigen::VectorXd::Zero(n)) {}

    void add(Eigen::Index from, Eigen::Index to, double rate) {
        if (from == to || rate == 0.0) return;
        entries.emplace_back(from, to, rate);
        exit(from) += rate;
    }
};

Transitions full_chain(const DiscreteModelSpec& spec, int K) {
    const Eigen::Index side = K + 1;
    Transitions tr(side * side);
    const double N = static_cast<double>(spec.scale);
    auto index = [side](int x1, int x2) { return static_cast<Eigen::Index>(x1) * side + x2; };
    for (int x1 = 0; x1 <= K; ++x1)
        for (int x2 = 0; x2 <= K; ++x2) {
            const auto here = index(x1, x2);
            tr.add(here, index(std::min(x1 + 1, K), x2), spec.lambda1(x1, x2));
            if (x1 > 0) tr.add(here, index(x1 - 1, x2), N * spec.gamma1(x1, x2));
            tr.add(here, index(x1, std::min(x2 + 1, K)), N * spec.lambda2(x1, x2));
            if (x2 > 0) tr.add(here, index(x1, x2 - 1), spec.gamma2(x1, x2));
        }
    return tr;
}

Transitions reduced_chain(const ReducedChainGenerator& gen, int K) {
    Transitions tr(K + 1);
    const auto& spec = gen.spec;
    Eigen::MatrixXd kernel;
    if (!gen.geometric) kernel = burst_kernel(AuxiliaryProcessSpec::from_model(spec), K);
    for (int x = 0; x <= K; ++x) {
        const double burst = spec.lambda1(0.0, x);
        if (burst > 0.0) {
            for (int y = x + 1; y <= K; ++y) {
                double p;
                if (gen.geometric) {
                    const auto& g = *gen.geometric;
                    p = y < K ? geometric_burst_pmf(g.k2, g.g1, y - x)
                              : 1.0 - geometric_burst_cdf(g.k2, g.g1, K - 1 - x);
                } else {
                    p = kernel(x, y);
                }
                tr.add(x, y, burst * p);
            }
        }
        if (x > 0) tr.add(x, x - 1, spec.gamma2(0.0, x));
    }
    return tr;
}

Transitions birth_death(const BirthDeathGenerator& gen, int K) {
    Transitions tr(K + 1);
    for (int x = 0; x <= K; ++x) {
        if (x < K) tr.add(x, x + 1, gen.birth(x));
        if (x > 0) tr.add(x, x - 1, gen.death(x));
    }
    return tr;
}

}  // namespace

StationaryDistribution stationary_solve_truncated(const TruncatedGenerator& generator, int K,
                                                  double max_boundary_mass) {
    if (K < 1) throw DomainError("truncation bound K must be >= 1");
    StationaryDistribution out;
    out.K = K;
    Transitions tr = std::visit(
        [&](const auto& gen) {
            using G = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<G, FullChainGenerator>) {
                out.two_dimensional = true;
                return full_chain(gen.spec, K);
            } else if constexpr (std::is_same_v<G, ReducedChainGenerator>) {
                return reduced_chain(gen, K);
            } else {
                return birth_death(gen, K);
            }
        },
        generator);

    const Eigen::Index n = tr.exit.size();
    const Eigen::Index last = n - 1;
    // Q^T pi = 0 with the last balance equation replaced by sum(pi) = 1
    Triplets system;
    system.reserve(tr.entries.size() + 2 * static_cast<std::size_t>(n));
    for (const auto& e : tr.entries)
        if (e.col() != last) system.emplace_back(e.col(), e.row(), e.value());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i != last) system.emplace_back(i, i, -tr.exit(i));
        system.emplace_back(last, i, 1.0);
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(system.begin(), system.end());
    A.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SingularSystem("truncated generator has no unique stationary law");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(last) = 1.0;
    Eigen::VectorXd pi = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !pi.allFinite() || pi.minCoeff() < -1e-8)
        throw SingularSystem("truncated generator has no unique stationary law");
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    out.pi = std::move(pi);

    if (out.two_dimensional) {
        const Eigen::Index side = K + 1;
        const auto grid = out.pi.reshaped(side, side);
        out.boundary_mass = grid.row(K).sum() + grid.col(K).sum() - grid(K, K);
    } else {
        out.boundary_mass = out.pi(K);
    }
    if (out.boundary_mass > max_boundary_mass) throw TruncationTooSmall(out.boundary_mass, K);
    return out;
}

}  // namespace burstkit
