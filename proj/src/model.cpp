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

#include "burstkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "burstkit/rng.hpp"

namespace burstkit {

// ---------------------------------------------------------------------------
// errors

std::string describe(const Violation& v) {
    std::ostringstream os;
    os << v.name;
    if (!v.witness.empty()) {
        os << " at (";
        for (std::size_t i = 0; i < v.witness.size(); ++i) os << (i ? ", " : "") << v.witness[i];
        os << ')';
    }
    return os.str();
}

namespace {

std::string join_violations(const std::vector<Violation>& vs) {
    std::string out = "hypothesis violated: ";
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "; " : "") + describe(vs[i]);
    return out;
}

}  // namespace

HypothesisViolation::HypothesisViolation(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

SchemaError::SchemaError(std::string field_path, const std::string& detail)
    : std::runtime_error("schema error at '" + field_path + "'" + (detail.empty() ? "" : ": " + detail)),
      field_(std::move(field_path)) {}

EventBudgetExceeded::EventBudgetExceeded(std::uint64_t limit)
    : std::runtime_error("event budget of " + std::to_string(limit) + " exceeded"), limit_(limit) {}

BurstCapExceeded::BurstCapExceeded(std::uint64_t start, std::uint64_t cap)
    : std::runtime_error("burst from " + std::to_string(start) + " not killed within " +
                         std::to_string(cap) + " steps") {}

TruncationTooSmall::TruncationTooSmall(double boundary_mass, int bound)
    : std::runtime_error("truncation at K=" + std::to_string(bound) + " leaves boundary mass " +
                         std::to_string(boundary_mass)),
      mass_(boundary_mass) {}

StepTooLarge::StepTooLarge(double dt, double relative_change)
    : std::runtime_error("step " + std::to_string(dt) + " too large: halving changed output by " +
                         std::to_string(relative_change)) {}

// ---------------------------------------------------------------------------
// RateFunction

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw DomainError(what);
}

}  // namespace

RateFunction RateFunction::constant(double c) {
    require(std::isfinite(c) && c >= 0.0, "constant rate must be finite and >= 0");
    RateFunction r;
    r.kind_ = RateKind::Constant;
    r.params_ = {c};
    r.bound_ = {c, 0.0};
    r.sup_ = c;
    return r;
}

RateFunction RateFunction::linear(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b >= 0.0,
            "linear rate a + b x needs finite a, b >= 0");
    if (b == 0.0) {
        RateFunction r = constant(a);
        r.kind_ = RateKind::Linear;
        r.params_ = {a, 0.0};
        return r;
    }
    RateFunction r;
    r.kind_ = RateKind::Linear;
    r.params_ = {a, b};
    r.bound_ = {a, b};
    return r;
}

RateFunction RateFunction::hill(double L, double D, int alpha) {
    require(std::isfinite(L) && std::isfinite(D) && L > 0.0 && D > 0.0, "Hill rate needs L, D > 0");
    require(alpha >= 1, "Hill exponent must be a positive integer");
    RateFunction r;
    r.kind_ = RateKind::Hill;
    r.params_ = {L, D, static_cast<double>(alpha)};
    const double sup = std::max(1.0 / L, 1.0 / D);
    r.bound_ = {sup, 0.0};
    r.sup_ = sup;
    return r;
}

RateFunction RateFunction::custom(std::string name, std::function<double(double)> fn, LinearBound bound,
                                  std::optional<double> sup) {
    require(static_cast<bool>(fn), "custom rate needs a callable");
    require(bound.c >= 0.0 && bound.slope >= 0.0, "custom rate bound witnesses must be >= 0");
    RateFunction r;
    r.kind_ = RateKind::Custom;
    r.name_ = std::move(name);
    r.custom_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
    r.bound_ = bound;
    r.sup_ = sup;
    return r;
}

double RateFunction::eval_unchecked(double x) const noexcept {
    switch (kind_) {
        case RateKind::Constant:
            return params_[0];
        case RateKind::Linear:
            return params_[0] + params_[1] * x;
        case RateKind::Hill: {
            const double L = params_[0];
            const double D = params_[1];
            const double u = std::pow(x, params_[2]);
            const double value = std::isinf(u) ? 1.0 / D : (1.0 + u) / (L + D * u);
            // keep rounding inside the exact range [min, max] of the endpoints
            return std::clamp(value, std::min(1.0 / L, 1.0 / D), std::max(1.0 / L, 1.0 / D));
        }
        case RateKind::Custom:
            return (*custom_)(x);
    }
    return 0.0;
}

double RateFunction::operator()(double x) const {
    if (!(x >= 0.0)) throw DomainError("rate evaluated at negative or NaN argument");
    return eval_unchecked(x);
}

bool RateFunction::is_zero() const noexcept {
    switch (kind_) {
        case RateKind::Constant:
            return params_[0] == 0.0;
        case RateKind::Linear:
            return params_[0] == 0.0 && params_[1] == 0.0;
        default:
            return false;
    }
}

double RateFunction::inf_from(double x_min) const {
    switch (kind_) {
        case RateKind::Constant:
            return params_[0];
        case RateKind::Linear:
            return params_[0] + params_[1] * x_min;
        case RateKind::Hill:
            // monotone in x^alpha; decreasing when L < D, so the infimum is the limit 1/D
            return params_[0] >= params_[1] ? eval_unchecked(x_min) : 1.0 / params_[1];
        case RateKind::Custom: {
            double lo = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 2000; ++i) lo = std::min(lo, eval_unchecked(x_min + 0.5 * i));
            return lo;
        }
    }
    return 0.0;
}

bool RateFunction::operator==(const RateFunction& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == RateKind::Custom) return custom_ == other.custom_;
    return params_ == other.params_;
}

RateFunction scaled(const RateFunction& rate, double factor) {
    require(std::isfinite(factor) && factor > 0.0, "rate scale factor must be > 0");
    const auto& p = rate.params();
    switch (rate.kind()) {
        case RateKind::Constant:
            return RateFunction::constant(p[0] * factor);
        case RateKind::Linear:
            return RateFunction::linear(p[0] * factor, p[1] * factor);
        case RateKind::Hill:
            return RateFunction::hill(p[0] / factor, p[1] / factor, static_cast<int>(p[2]));
        case RateKind::Custom: {
            const auto b = rate.linear_bound();
            std::optional<double> sup;
            if (rate.sup()) sup = *rate.sup() * factor;
            return RateFunction::custom(
                rate.name(), [rate, factor](double x) { return factor * rate.eval_unchecked(x); },
                {b.c * factor, b.slope * factor}, sup);
        }
    }
    return rate;
}

// ---------------------------------------------------------------------------
// BivariateRate

double BivariateRate::operator()(double x1, double x2) const {
    if (!(x1 >= 0.0) || !(x2 >= 0.0)) throw DomainError("rate evaluated at negative state");
    return eval_unchecked(x1, x2);
}

double eval_rate(const BivariateRate& rate, double x1, double x2) { return rate(x1, x2); }

std::optional<LinearBound> BivariateRate::linear_bound() const {
    if (on_x1.is_zero() || on_x2.is_zero()) return LinearBound{0.0, 0.0};
    const auto b1 = on_x1.linear_bound();
    const auto b2 = on_x2.linear_bound();
    if (b1.slope > 0.0 && b2.slope > 0.0) return std::nullopt;
    return LinearBound{b1.c * b2.c, std::max(b1.slope * b2.c, b1.c * b2.slope)};
}

std::optional<double> BivariateRate::sup() const {
    if (on_x1.is_zero() || on_x2.is_zero()) return 0.0;
    if (on_x1.sup() && on_x2.sup()) return *on_x1.sup() * *on_x2.sup();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// BurstDensity

BurstDensity BurstDensity::exponential(double mean) {
    require(std::isfinite(mean) && mean > 0.0, "exponential burst mean must be finite and > 0");
    BurstDensity d;
    d.kind_ = DensityKind::Exponential;
    d.mean_ = mean;
    return d;
}

BurstDensity BurstDensity::tabulated(std::vector<double> edges, std::vector<double> weights) {
    require(edges.size() >= 2 && weights.size() + 1 == edges.size(),
            "tabulated density needs edges.size() == weights.size() + 1 >= 2");
    require(edges.front() >= 0.0, "tabulated density support must be non-negative");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        require(std::isfinite(edges[i + 1]) && edges[i + 1] > edges[i], "edges must be strictly increasing");
    double total = 0.0;
    for (double w : weights) {
        require(std::isfinite(w) && w >= 0.0, "bin weights must be finite and >= 0");
        total += w;
    }
    require(total > 0.0, "bin weights must not all be zero");

    BurstDensity d;
    d.kind_ = DensityKind::Tabulated;
    d.edges_ = std::move(edges);
    d.weights_ = std::move(weights);
    for (double& w : d.weights_) w /= total;
    d.cumulative_.resize(d.weights_.size());
    std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cumulative_.begin());
    d.cumulative_.back() = 1.0;
    d.mean_ = 0.0;
    for (std::size_t i = 0; i < d.weights_.size(); ++i)
        d.mean_ += d.weights_[i] * 0.5 * (d.edges_[i] + d.edges_[i + 1]);
    return d;
}

double BurstDensity::pdf(double z) const {
    if (kind_ == DensityKind::Exponential) return z < 0.0 ? 0.0 : std::exp(-z / mean_) / mean_;
    if (z < edges_.front() || z >= edges_.back()) return 0.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), z);
    const auto i = static_cast<std::size_t>(it - edges_.begin()) - 1;
    return weights_[i] / (edges_[i + 1] - edges_[i]);
}

double BurstDensity::cdf(double z) const {
    if (kind_ == DensityKind::Exponential) return z <= 0.0 ? 0.0 : -std::expm1(-z / mean_);
    if (z <= edges_.front()) return 0.0;
    if (z >= edges_.back()) return 1.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), z);
    const auto i = static_cast<std::size_t>(it - edges_.begin()) - 1;
    const double below = i == 0 ? 0.0 : cumulative_[i - 1];
    return below + weights_[i] * (z - edges_[i]) / (edges_[i + 1] - edges_[i]);
}

double BurstDensity::sample(RandomStream& rng) const {
    if (kind_ == DensityKind::Exponential) return -mean_ * std::log(rng.uniform_open());
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    const auto i = static_cast<std::size_t>(it - cumulative_.begin());
    // (lo, hi]: strictly positive even when the first edge is 0
    return edges_[i] + (1.0 - rng.uniform()) * (edges_[i + 1] - edges_[i]);
}

BurstDensity BurstDensity::stretched(double factor) const {
    require(std::isfinite(factor) && factor > 0.0, "density stretch factor must be > 0");
    if (kind_ == DensityKind::Exponential) return exponential(mean_ * factor);
    BurstDensity d = *this;
    for (double& e : d.edges_) e *= factor;
    d.mean_ = mean_ * factor;
    return d;
}

// ---------------------------------------------------------------------------
// model specs

DiscreteModelSpec mrna_protein_chain(double g1, double g2, double k2, RateFunction lambda1, std::int64_t scale,
                                     DiscreteState initial) {
    DiscreteModelSpec spec;
    spec.lambda1 = BivariateRate::of_x2(std::move(lambda1));
    spec.gamma1 = BivariateRate::of_x1(RateFunction::linear(0.0, g1));
    spec.lambda2 = BivariateRate::of_x1(RateFunction::linear(0.0, k2));
    spec.gamma2 = BivariateRate::of_x2(RateFunction::linear(0.0, g2));
    spec.scale = scale;
    spec.initial = initial;
    return spec;
}

std::string to_string(Scaling s) {
    switch (s) {
        case Scaling::None:
            return "none";
        case Scaling::S1:
            return "S1";
        case Scaling::S2:
            return "S2";
        case Scaling::S3:
            return "S3";
    }
    return "none";
}

Scaling scaling_from_string(const std::string& s) {
    if (s == "none") return Scaling::None;
    if (s == "S1") return Scaling::S1;
    if (s == "S2") return Scaling::S2;
    if (s == "S3") return Scaling::S3;
    throw DomainError("unknown scaling '" + s + "'");
}

ContinuousModelSpec apply_scaling(const ContinuousModelSpec& spec, Scaling scaling, std::int64_t n) {
    if (n < 1) throw DomainError("scale index n must be >= 1");
    ContinuousModelSpec out = spec;
    out.scaling = scaling;
    out.n = n;
    if (n == 1 || scaling == Scaling::None) return out;
    const double f = static_cast<double>(n);
    out.g1 = spec.g1 * f;
    switch (scaling) {
        case Scaling::S1:
            out.lambda1 = scaled(spec.lambda1, f);
            break;
        case Scaling::S2:
            out.burst = spec.burst.stretched(f);
            break;
        case Scaling::S3:
            out.k2 = spec.k2 * f;
            break;
        case Scaling::None:
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// validation

DiscreteBounds discrete_bounds(const DiscreteModelSpec& spec) {
    DiscreteBounds b;
    double lower2 = spec.gamma1.on_x2.inf_from(0.0);
    if (spec.gamma1.zero_on_zero == Argument::X2) lower2 = 0.0;
    b.gamma1_lower = spec.gamma1.on_x1.inf_from(1.0) * lower2;
    if (auto lb = spec.lambda1.linear_bound()) b.lambda1_bound = *lb;
    if (auto lb = spec.lambda2.linear_bound()) b.lambda2_bound = *lb;
    b.lambda1_sup = spec.lambda1.sup();
    b.lambda2_sup = spec.lambda2.sup();
    return b;
}

namespace {

struct NamedRate {
    const char* name;
    const BivariateRate* rate;
};

}  // namespace

ValidationReport check_hypotheses(const DiscreteModelSpec& spec, int grid) {
    ValidationReport report;
    auto fail = [&](std::string name, std::vector<double> witness) {
        report.violations.push_back({std::move(name), std::move(witness)});
    };
    if (grid < 1) grid = 1;
    const double G = grid;

    if (spec.scale < 1) fail("scale N ≥ 1", {static_cast<double>(spec.scale)});
    if (spec.initial.x1 < 0 || spec.initial.x2 < 0)
        fail("initial state ≥ 0", {static_cast<double>(spec.initial.x1), static_cast<double>(spec.initial.x2)});

    const NamedRate rates[] = {{"lambda1", &spec.lambda1},
                               {"gamma1", &spec.gamma1},
                               {"lambda2", &spec.lambda2},
                               {"gamma2", &spec.gamma2}};
    for (const auto& [name, rate] : rates) {
        bool done = false;
        for (double x1 = 0; x1 <= G && !done; ++x1)
            for (double x2 = 0; x2 <= G && !done; ++x2) {
                const double v = rate->eval_unchecked(x1, x2);
                if (!(v >= 0.0) || !std::isfinite(v)) {
                    fail(std::string(name) + " non-negative", {x1, x2});
                    done = true;
                }
            }
    }

    auto zero_line = [&](const BivariateRate& rate, bool vary_x2, const char* name) {
        for (double v = 0; v <= G; ++v) {
            const double x1 = vary_x2 ? 0.0 : v;
            const double x2 = vary_x2 ? v : 0.0;
            if (rate.eval_unchecked(x1, x2) != 0.0) {
                fail(name, {x1, x2});
                return;
            }
        }
    };
    zero_line(spec.gamma2, false, "gamma2(X1,0)=0");
    zero_line(spec.gamma1, true, "gamma1(0,X2)=0");
    zero_line(spec.lambda2, true, "lambda2(0,X2)=0");

    const DiscreteBounds bounds = discrete_bounds(spec);
    {
        double lo = std::numeric_limits<double>::infinity();
        std::vector<double> at{1.0, 0.0};
        for (double x1 = 1; x1 <= G; ++x1)
            for (double x2 = 0; x2 <= G; ++x2) {
                const double v = spec.gamma1.eval_unchecked(x1, x2);
                if (v < lo) {
                    lo = v;
                    at = {x1, x2};
                }
            }
        if (!(bounds.gamma1_lower > 0.0) || lo < bounds.gamma1_lower * (1.0 - 1e-12))
            fail("inf gamma1 ≥ γ̲ > 0", at);
    }

    auto linear_check = [&](const BivariateRate& rate, const char* name) {
        const auto lb = rate.linear_bound();
        if (!lb) {
            fail(std::string(name) + " linearly bounded by X1+X2", {});
            return;
        }
        for (double x1 = 0; x1 <= G; ++x1)
            for (double x2 = 0; x2 <= G; ++x2) {
                const double cap = lb->c + lb->slope * (x1 + x2);
                if (rate.eval_unchecked(x1, x2) > cap * (1.0 + 1e-12) + 1e-300) {
                    fail(std::string(name) + " linearly bounded by X1+X2", {x1, x2});
                    return;
                }
            }
    };
    linear_check(spec.lambda1, "lambda1");
    linear_check(spec.lambda2, "lambda2");

    if (!bounds.lambda1_sup && !bounds.lambda2_sup) fail("lambda1 or lambda2 bounded", {});

    return report;
}

double bound_excess(const RateFunction& rate, double step, double x_max) {
    const auto b = rate.linear_bound();
    double worst = 0.0;
    const auto steps = static_cast<long>(std::floor(x_max / step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double x = step * static_cast<double>(i);
        worst = std::max(worst, rate.eval_unchecked(x) - (b.c + b.slope * x));
    }
    return worst;
}

ValidationReport check_hypotheses(const ContinuousModelSpec& spec) {
    ValidationReport report;
    auto fail = [&](std::string name, std::vector<double> witness) {
        report.violations.push_back({std::move(name), std::move(witness)});
    };
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " > 0", {v});
    };
    positive(spec.g1, "g1");
    positive(spec.g2, "g2");
    positive(spec.k2, "k2");
    if (spec.n < 1) fail("n ≥ 1", {static_cast<double>(spec.n)});
    if (!(spec.initial.x1 >= 0.0) || !(spec.initial.x2 >= 0.0))
        fail("initial state ≥ 0", {spec.initial.x1, spec.initial.x2});
    if (spec.lookahead && !(*spec.lookahead > 0.0)) fail("lookahead > 0", {*spec.lookahead});

    for (int i = 0; i <= 2000; ++i) {
        const double x = 0.5 * i;
        const double v = spec.lambda1.eval_unchecked(x);
        if (!(v >= 0.0) || !std::isfinite(v)) {
            fail("lambda1 non-negative", {x});
            break;
        }
    }
    if (bound_excess(spec.lambda1) > 0.0) fail("lambda1 ≤ c + K x", {});
    if (!(spec.burst.mean() > 0.0) || !std::isfinite(spec.burst.mean())) fail("burst mean finite and > 0", {});
    return report;
}

ValidatedDiscreteSpec validate_spec(const DiscreteModelSpec& spec, int grid) {
    auto report = check_hypotheses(spec, grid);
    if (!report.ok()) throw HypothesisViolation(std::move(report.violations));
    return ValidatedDiscreteSpec(spec);
}

ValidatedContinuousSpec validate_spec(const ContinuousModelSpec& spec) {
    auto report = check_hypotheses(spec);
    if (!report.ok()) throw HypothesisViolation(std::move(report.violations));
    return ValidatedContinuousSpec(spec);
}

}  // namespace burstkit
