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
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "burstkit/errors.hpp"

namespace burstkit {

class RandomStream;

/// Witnesses (c, K) of a linear growth bound rate(x) <= c + K x on x >= 0.
struct LinearBound {
    double c = 0.0;
    double slope = 0.0;
};

enum class RateKind { Constant, Linear, Hill, Custom };

/// Scalar rate law of one non-negative argument.
///
/// Constant(c), Linear(a, b) = a + b x, Hill(L, D, alpha) = (1 + x^a) / (L + D x^a),
/// or a user supplied callable carrying its own bound witnesses. Values are
/// immutable once built.
class RateFunction {
public:
    static RateFunction constant(double c);
    static RateFunction linear(double a, double b);
    static RateFunction hill(double L, double D, int alpha);
    /// `sup` is the global supremum on [0, inf) when the law is bounded.
    static RateFunction custom(std::string name, std::function<double(double)> fn,
                               LinearBound bound, std::optional<double> sup = std::nullopt);

    /// Throws DomainError for negative or NaN input.
    double operator()(double x) const;
    /// Evaluation without the domain check, for hot loops over validated states.
    double eval_unchecked(double x) const noexcept;

    RateKind kind() const noexcept { return kind_; }
    const std::vector<double>& params() const noexcept { return params_; }
    const std::string& name() const noexcept { return name_; }

    LinearBound linear_bound() const noexcept { return bound_; }
    std::optional<double> sup() const noexcept { return sup_; }
    bool bounded() const noexcept { return sup_.has_value(); }
    bool is_zero() const noexcept;
    /// Infimum over [x_min, inf); analytic for the built-in kinds, probed for Custom.
    double inf_from(double x_min) const;

    bool operator==(const RateFunction& other) const;

private:
    RateFunction() = default;

    RateKind kind_ = RateKind::Constant;
    std::vector<double> params_;
    std::string name_;
    std::shared_ptr<const std::function<double(double)>> custom_;
    LinearBound bound_;
    std::optional<double> sup_;
};

/// Rate scaled by a positive factor; Custom laws are wrapped.
RateFunction scaled(const RateFunction& rate, double factor);

/// Evaluate a rate law at a non-negative state (throws DomainError otherwise).
inline double eval_rate(const RateFunction& rate, double x) { return rate(x); }

enum class Argument { X1, X2 };

/// Separable two-argument rate f(X1) * g(X2), optionally forced to zero when
/// one argument is zero.
struct BivariateRate {
    RateFunction on_x1 = RateFunction::constant(1.0);
    RateFunction on_x2 = RateFunction::constant(1.0);
    std::optional<Argument> zero_on_zero;

    static BivariateRate of_x1(RateFunction r) { return {std::move(r), RateFunction::constant(1.0), {}}; }
    static BivariateRate of_x2(RateFunction r) { return {RateFunction::constant(1.0), std::move(r), {}}; }
    static BivariateRate product(RateFunction r1, RateFunction r2) {
        return {std::move(r1), std::move(r2), {}};
    }
    BivariateRate vanishing_at_zero(Argument a) const {
        BivariateRate out = *this;
        out.zero_on_zero = a;
        return out;
    }

    double operator()(double x1, double x2) const;
    double eval_unchecked(double x1, double x2) const noexcept {
        if (zero_on_zero) {
            const double arg = *zero_on_zero == Argument::X1 ? x1 : x2;
            if (arg == 0.0) return 0.0;
        }
        return on_x1.eval_unchecked(x1) * on_x2.eval_unchecked(x2);
    }

    /// Bound in terms of X1 + X2; nullopt when both factors grow.
    std::optional<LinearBound> linear_bound() const;
    std::optional<double> sup() const;

    bool operator==(const BivariateRate&) const = default;
};

double eval_rate(const BivariateRate& rate, double x1, double x2);

enum class DensityKind { Exponential, Tabulated };

/// Burst size law on [0, inf): exponential with mean b, or a piecewise-constant
/// histogram density over `edges` with bin masses `weights` (normalised).
class BurstDensity {
public:
    static BurstDensity exponential(double mean);
    static BurstDensity tabulated(std::vector<double> edges, std::vector<double> weights);

    DensityKind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    const std::vector<double>& edges() const noexcept { return edges_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double pdf(double z) const;
    double cdf(double z) const;
    /// Strictly positive draw.
    double sample(RandomStream& rng) const;
    /// Law of factor * Z for Z with this law, i.e. z -> (1/factor) h(z / factor).
    BurstDensity stretched(double factor) const;

    bool operator==(const BurstDensity&) const = default;

private:
    BurstDensity() = default;

    DensityKind kind_ = DensityKind::Exponential;
    double mean_ = 1.0;
    std::vector<double> edges_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

struct DiscreteState {
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    bool operator==(const DiscreteState&) const = default;
};

struct ContinuousState {
    double x1 = 0.0;
    double x2 = 0.0;
    bool operator==(const ContinuousState&) const = default;
};

inline constexpr std::uint64_t kDefaultEventCap = 100'000'000;

/// Two-species birth-death chain; `scale` multiplies gamma1 and lambda2.
struct DiscreteModelSpec {
    BivariateRate lambda1;
    BivariateRate gamma1;
    BivariateRate lambda2;
    BivariateRate gamma2;
    std::int64_t scale = 1;
    DiscreteState initial;
    std::uint64_t event_cap = kDefaultEventCap;
};

/// Standard mRNA-protein chain: gamma_i = g_i X_i, lambda2 = k2 X1, lambda1 = lambda1(X2).
DiscreteModelSpec mrna_protein_chain(double g1, double g2, double k2, RateFunction lambda1,
                                     std::int64_t scale = 1, DiscreteState initial = {});

enum class Scaling { None, S1, S2, S3 };

std::string to_string(Scaling s);
Scaling scaling_from_string(const std::string& s);

/// Bursting mRNA / linear protein PDMP.
struct ContinuousModelSpec {
    double g1 = 1.0;
    double g2 = 1.0;
    double k2 = 1.0;
    RateFunction lambda1 = RateFunction::constant(1.0);
    BurstDensity burst = BurstDensity::exponential(1.0);
    Scaling scaling = Scaling::None;
    std::int64_t n = 1;
    ContinuousState initial;
    /// Thinning window; defaults to 1 / g1 of the simulated parameters.
    std::optional<double> lookahead;
    std::uint64_t event_cap = kDefaultEventCap;
};

/// Scaled copy of `spec`. The result is tagged with (scaling, n); the input
/// is left untouched.
ContinuousModelSpec apply_scaling(const ContinuousModelSpec& spec, Scaling scaling, std::int64_t n);

/// Derived constants recorded during validation.
struct DiscreteBounds {
    double gamma1_lower = 0.0;  ///< inf of gamma1 over X1 >= 1
    LinearBound lambda1_bound;
    LinearBound lambda2_bound;
    std::optional<double> lambda1_sup;
    std::optional<double> lambda2_sup;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

template <class Spec>
class Validated;

using ValidatedDiscreteSpec = Validated<DiscreteModelSpec>;
using ValidatedContinuousSpec = Validated<ContinuousModelSpec>;

ValidatedDiscreteSpec validate_spec(const DiscreteModelSpec& spec, int grid);
ValidatedContinuousSpec validate_spec(const ContinuousModelSpec& spec);

/// A model specification that passed every hypothesis check. Only
/// validate_spec can produce one.
template <class Spec>
class Validated {
public:
    const Spec& spec() const noexcept { return spec_; }
    const Spec* operator->() const noexcept { return &spec_; }

private:
    friend ValidatedDiscreteSpec validate_spec(const DiscreteModelSpec&, int);
    friend ValidatedContinuousSpec validate_spec(const ContinuousModelSpec&);
    explicit Validated(Spec spec) : spec_(std::move(spec)) {}
    Spec spec_;
};

inline constexpr int kDefaultProbeGrid = 200;

/// Probes the hypotheses on {0..grid}^2 plus analytic checks; deterministic.
ValidationReport check_hypotheses(const DiscreteModelSpec& spec, int grid = kDefaultProbeGrid);
ValidationReport check_hypotheses(const ContinuousModelSpec& spec);

/// Throws HypothesisViolation listing every failed check.
inline ValidatedDiscreteSpec validate_spec(const DiscreteModelSpec& spec) {
    return validate_spec(spec, kDefaultProbeGrid);
}

DiscreteBounds discrete_bounds(const DiscreteModelSpec& spec);

/// Max of |rate(x) - (c + K x)|^+ over x in {0, step, ..., x_max}; 0 means the witness holds.
double bound_excess(const RateFunction& rate, double step = 0.5, double x_max = 1000.0);

}  // namespace burstkit
