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

#include "burstkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "burstkit/errors.hpp"

namespace burstkit {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("empirical distribution needs at least one sample");
    EmpiricalDistribution d;
    d.values_ = Eigen::Map<const Eigen::VectorXd>(samples.data(), static_cast<Eigen::Index>(samples.size()));
    if (!d.values_.allFinite()) throw DomainError("samples must be finite");
    std::sort(d.values_.begin(), d.values_.end());
    d.weights_ = Eigen::VectorXd::Constant(d.values_.size(), 1.0 / static_cast<double>(d.values_.size()));
    return d;
}

EmpiricalDistribution EmpiricalDistribution::from_samples(const Eigen::VectorXd& samples) {
    return from_samples(std::span<const double>(samples.data(), static_cast<std::size_t>(samples.size())));
}

EmpiricalDistribution EmpiricalDistribution::weighted(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size())
        throw DomainError("weighted distribution needs matching, non-empty values and weights");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    EmpiricalDistribution d;
    d.weighted_ = true;
    d.values_.resize(static_cast<Eigen::Index>(values.size()));
    d.weights_.resize(static_cast<Eigen::Index>(values.size()));
    double total = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double v = values[order[k]];
        const double w = weights[order[k]];
        if (!std::isfinite(v) || !std::isfinite(w) || w < 0.0) throw DomainError("weights must be finite and >= 0");
        d.values_(static_cast<Eigen::Index>(k)) = v;
        d.weights_(static_cast<Eigen::Index>(k)) = w;
        total += w;
    }
    if (!(total > 0.0)) throw DomainError("weights must not all be zero");
    d.weights_ /= total;
    return d;
}

EmpiricalDistribution EmpiricalDistribution::point_mass(double x) {
    const double v[] = {x};
    return from_samples(v);
}

double EmpiricalDistribution::mean() const { return values_.dot(weights_); }

double EmpiricalDistribution::variance() const {
    const double m = mean();
    const double pop = weights_.dot((values_.array() - m).square().matrix());
    if (weighted_ || values_.size() < 2) return pop;
    const double n = static_cast<double>(values_.size());
    return pop * n / (n - 1.0);
}

double EmpiricalDistribution::mean_se() const {
    const double n_eff = weighted_ ? 1.0 / weights_.squaredNorm() : static_cast<double>(values_.size());
    return std::sqrt(variance() / n_eff);
}

double EmpiricalDistribution::cdf(double x) const {
    const auto end = std::upper_bound(values_.begin(), values_.end(), x);
    const auto k = static_cast<Eigen::Index>(end - values_.begin());
    return k == 0 ? 0.0 : std::min(1.0, weights_.head(k).sum());
}

double EmpiricalDistribution::quantile(double p) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        acc += weights_(i);
        if (acc >= p * (1.0 - 1e-12)) return values_(i);
    }
    return max();
}

namespace {

/// Walks the merged support, calling visit(x, next_x, F(x), G(x)).
template <class Visit>
void merged_walk(const EmpiricalDistribution& a, const EmpiricalDistribution& b, Visit&& visit) {
    const auto& va = a.values();
    const auto& vb = b.values();
    const auto& wa = a.weights();
    const auto& wb = b.weights();
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    double F = 0.0;
    double G = 0.0;
    while (i < va.size() || j < vb.size()) {
        double x;
        if (j >= vb.size() || (i < va.size() && va(i) <= vb(j)))
            x = va(i);
        else
            x = vb(j);
        while (i < va.size() && va(i) == x) F += wa(i++);
        while (j < vb.size() && vb(j) == x) G += wb(j++);
        double next = x;
        if (i < va.size() && j < vb.size())
            next = std::min(va(i), vb(j));
        else if (i < va.size())
            next = va(i);
        else if (j < vb.size())
            next = vb(j);
        visit(x, next, std::min(F, 1.0), std::min(G, 1.0));
    }
}

}  // namespace

double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.empty() || b.empty()) throw DomainError("wasserstein1 needs non-empty distributions");
    double area = 0.0;
    merged_walk(a, b, [&](double x, double next, double F, double G) { area += std::abs(F - G) * (next - x); });
    return area;
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.empty() || b.empty()) throw DomainError("ks_distance needs non-empty distributions");
    double d = 0.0;
    merged_walk(a, b, [&](double, double, double F, double G) { d = std::max(d, std::abs(F - G)); });
    return d;
}

double pooled_se(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return std::hypot(a.mean_se(), b.mean_se());
}

Estimate moments(std::span<const double> samples, int order) {
    if (order != 1 && order != 2) throw DomainError("moments supports order 1 or 2");
    const auto n = samples.size();
    if (n < 2) throw DomainError("moments needs at least two samples");
    const double nd = static_cast<double>(n);
    const double center = std::accumulate(samples.begin(), samples.end(), 0.0) / nd;
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : samples) {
        const double d = x - center;
        s1 += d;
        s2 += d * d;
    }
    auto variance_of = [](double sum, double sumsq, double count) {
        return (sumsq - sum * sum / count) / (count - 1.0);
    };

    Estimate out;
    out.value = order == 1 ? center + s1 / nd : variance_of(s1, s2, nd);
    if (order == 2 && n < 3) {
        out.se = std::numeric_limits<double>::infinity();
        return out;
    }
    // leave-one-out replicates
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = samples[i] - center;
        loo[i] = order == 1 ? (s1 - d) / (nd - 1.0) : variance_of(s1 - d, s2 - d * d, nd - 1.0);
    }
    const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / nd;
    double ss = 0.0;
    for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    out.se = std::sqrt((nd - 1.0) / nd * ss);
    return out;
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    const Eigen::Index n = std::max(p.size(), q.size());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = i < p.size() ? p(i) : 0.0;
        const double b = i < q.size() ? q(i) : 0.0;
        sum += std::abs(a - b);
    }
    return 0.5 * sum;
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Jacobi theta form, accurate for small arguments
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double sum = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double m = 2.0 * k - 1.0;
            sum += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_test needs samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    const double rn = std::sqrt(n);
    return {d, kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d), 0};
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("gamma_q needs a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        // series for P(a, x)
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return std::clamp(1.0 - sum * std::exp(log_prefactor), 0.0, 1.0);
    }
    // Lentz continued fraction for Q(a, x)
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::clamp(std::exp(log_prefactor) * h, 0.0, 1.0);
}

TestResult chi_square_test(const std::vector<std::int64_t>& counts, const Eigen::VectorXd& probs) {
    if (probs.size() < 2) throw DomainError("chi-square test needs at least two categories");
    const auto cats = static_cast<std::size_t>(probs.size());
    std::vector<double> observed(cats, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        observed[std::min(i, cats - 1)] += static_cast<double>(counts[i]);
        total += static_cast<double>(counts[i]);
    }
    std::vector<double> expected(cats);
    for (std::size_t i = 0; i < cats; ++i) expected[i] = total * probs(static_cast<Eigen::Index>(i));
    while (expected.size() > 2 && expected.back() < 5.0) {
        const double e = expected.back();
        const double o = observed.back();
        expected.pop_back();
        observed.pop_back();
        expected.back() += e;
        observed.back() += o;
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    const int dof = static_cast<int>(expected.size()) - 1;
    return {stat, gamma_q(0.5 * dof, 0.5 * stat), dof};
}

// ---------------------------------------------------------------------------

ConvergenceReport convergence_table(std::vector<ScalePoint> points, double threshold) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].distance >= 0.0)) throw DomainError("distances must be >= 0");
        if (i > 0 && points[i].n <= points[i - 1].n) throw DomainError("scale indices must strictly increase");
    }
    ConvergenceReport report;
    report.threshold = threshold;
    report.points = std::move(points);
    const auto& p = report.points;
    if (p.size() < 3) return report;
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double slack = kMonotoneSlackSe * std::hypot(p[i].se, p[i + 1].se);
        if (p[i + 1].distance > p[i].distance + slack) monotone = false;
    }
    report.monotone_decrease = monotone;
    report.final_below_threshold = p.back().distance < threshold;
    return report;
}

nlohmann::json to_json(const ConvergenceReport& report) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points)
        points.push_back({{"n", p.n}, {"distance", p.distance}, {"se", p.se}, {"M", p.samples}});
    auto flag = [](const std::optional<bool>& f) -> nlohmann::json {
        if (!f) return "not-applicable";
        return *f;
    };
    return {{"points", points},
            {"threshold", report.threshold},
            {"verdict",
             {{"monotone_decrease", flag(report.monotone_decrease)},
              {"final_below_threshold", flag(report.final_below_threshold)},
              {"passed", report.passed()}}}};
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "n,distance,se,M\n";
    os.precision(17);
    for (const auto& p : report.points) os << p.n << ',' << p.distance << ',' << p.se << ',' << p.samples << '\n';
}

}  // namespace burstkit
