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
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace burstkit {

/// Finite sample set with optional non-negative weights, stored sorted.
class EmpiricalDistribution {
public:
    EmpiricalDistribution() = default;
    static EmpiricalDistribution from_samples(std::span<const double> samples);
    static EmpiricalDistribution from_samples(const Eigen::VectorXd& samples);
    /// Weights are normalised to sum to 1; zero-weight atoms are kept.
    static EmpiricalDistribution weighted(std::span<const double> values, std::span<const double> weights);
    static EmpiricalDistribution point_mass(double x);

    Eigen::Index size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.size() == 0; }
    bool is_weighted() const noexcept { return weighted_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    double mean() const;
    /// Weighted population variance; the unbiased sample variance when unweighted.
    double variance() const;
    /// Standard error of the mean (uses the effective sample size when weighted).
    double mean_se() const;
    double cdf(double x) const;
    /// Lower quantile: smallest value with cdf >= p.
    double quantile(double p) const;
    double min() const { return values_(0); }
    double max() const { return values_(values_.size() - 1); }

private:
    Eigen::VectorXd values_;
    Eigen::VectorXd weights_;
    bool weighted_ = false;
};

/// Area between the two CDFs.
double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
/// Sup-norm distance between the two CDFs.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
/// sqrt(var_a / n_a + var_b / n_b): Monte Carlo scale of a two-ensemble comparison.
double pooled_se(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// order 1: mean; order 2: unbiased variance. Jackknife standard errors.
Estimate moments(std::span<const double> samples, int order);

/// 0.5 * sum |p - q| over the common support (shorter vector zero-padded).
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_survival(double lambda);

struct TestResult {
    double statistic = 0.0;
    double p_value = 0.0;
    int dof = 0;
};

/// One-sample KS against a continuous CDF (Stephens' small-sample correction).
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Pearson chi-square of integer counts (index = category) against `probs`;
/// the tail beyond probs.size() - 1 is folded into the last category and
/// categories are pooled from the right until every expected count is >= 5.
TestResult chi_square_test(const std::vector<std::int64_t>& counts, const Eigen::VectorXd& probs);

/// Regularised upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// ---------------------------------------------------------------------------

struct ScalePoint {
    std::int64_t n = 0;
    double distance = 0.0;
    double se = 0.0;
    std::int64_t samples = 0;
};

/// Distances versus scale index with verdicts. A flag is empty (not
/// applicable) for sweeps shorter than three points.
struct ConvergenceReport {
    std::vector<ScalePoint> points;
    double threshold = 0.0;
    std::optional<bool> monotone_decrease;
    std::optional<bool> final_below_threshold;

    bool passed() const { return monotone_decrease.value_or(true) && final_below_threshold.value_or(true); }
};

inline constexpr double kMonotoneSlackSe = 2.0;

/// Monotone decrease allows each step to rise by 2 pooled standard errors.
ConvergenceReport convergence_table(std::vector<ScalePoint> points, double threshold);

nlohmann::json to_json(const ConvergenceReport& report);
/// Columns: n, distance, se, M.
void write_csv(std::ostream& os, const ConvergenceReport& report);

}  // namespace burstkit
