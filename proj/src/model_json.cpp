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

#include "burstkit/model_json.hpp"

#include <algorithm>
#include <initializer_list>

namespace burstkit {

namespace {

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void expect_object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw SchemaError(child(path, key), "unknown field");
    }
}

const Json& field(const Json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(child(path, key), "missing required field");
    return *it;
}

double number(const Json& j, const std::string& path, const char* key) {
    const Json& v = field(j, path, key);
    if (!v.is_number()) throw SchemaError(child(path, key), "expected a number");
    return v.get<double>();
}

std::int64_t integer(const Json& j, const std::string& path, const char* key) {
    const Json& v = field(j, path, key);
    if (!v.is_number_integer()) throw SchemaError(child(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::string text(const Json& j, const std::string& path, const char* key) {
    const Json& v = field(j, path, key);
    if (!v.is_string()) throw SchemaError(child(path, key), "expected a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& path, const char* key) {
    const Json& v = field(j, path, key);
    if (!v.is_array()) throw SchemaError(child(path, key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw SchemaError(child(path, key) + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

template <class F>
auto guarded(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const DomainError& e) {
        throw SchemaError(path, e.what());
    }
}

}  // namespace

RateFunction rate_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    const std::string kind = text(j, path, "kind");
    return guarded(path, [&] {
        if (kind == "constant") {
            expect_object(j, path, {"kind", "c"});
            return RateFunction::constant(number(j, path, "c"));
        }
        if (kind == "linear") {
            expect_object(j, path, {"kind", "a", "b"});
            return RateFunction::linear(number(j, path, "a"), number(j, path, "b"));
        }
        if (kind == "hill") {
            expect_object(j, path, {"kind", "L", "D", "alpha"});
            return RateFunction::hill(number(j, path, "L"), number(j, path, "D"),
                                      static_cast<int>(integer(j, path, "alpha")));
        }
        throw SchemaError(child(path, "kind"), "unknown rate kind '" + kind + "'");
    });
}

BivariateRate bivariate_from_json(const Json& j, const std::string& path) {
    expect_object(j, path, {"x1", "x2", "zero_on_zero"});
    BivariateRate r;
    if (j.contains("x1")) r.on_x1 = rate_from_json(j["x1"], child(path, "x1"));
    if (j.contains("x2")) r.on_x2 = rate_from_json(j["x2"], child(path, "x2"));
    if (j.contains("zero_on_zero")) {
        const std::string arg = text(j, path, "zero_on_zero");
        if (arg == "x1")
            r.zero_on_zero = Argument::X1;
        else if (arg == "x2")
            r.zero_on_zero = Argument::X2;
        else
            throw SchemaError(child(path, "zero_on_zero"), "expected \"x1\" or \"x2\"");
    }
    return r;
}

BurstDensity density_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    const std::string kind = text(j, path, "kind");
    return guarded(path, [&] {
        if (kind == "exponential") {
            expect_object(j, path, {"kind", "mean"});
            return BurstDensity::exponential(number(j, path, "mean"));
        }
        if (kind == "tabulated") {
            expect_object(j, path, {"kind", "edges", "weights"});
            return BurstDensity::tabulated(numbers(j, path, "edges"), numbers(j, path, "weights"));
        }
        throw SchemaError(child(path, "kind"), "unknown density kind '" + kind + "'");
    });
}

DiscreteModelSpec discrete_spec_from_json(const Json& j, const std::string& path) {
    expect_object(j, path, {"lambda1", "gamma1", "lambda2", "gamma2", "N", "initial", "event_cap"});
    DiscreteModelSpec s;
    s.lambda1 = bivariate_from_json(field(j, path, "lambda1"), child(path, "lambda1"));
    s.gamma1 = bivariate_from_json(field(j, path, "gamma1"), child(path, "gamma1"));
    s.lambda2 = bivariate_from_json(field(j, path, "lambda2"), child(path, "lambda2"));
    s.gamma2 = bivariate_from_json(field(j, path, "gamma2"), child(path, "gamma2"));
    if (j.contains("N")) s.scale = integer(j, path, "N");
    if (j.contains("initial")) {
        const Json& init = j["initial"];
        if (!init.is_array() || init.size() != 2 || !init[0].is_number_integer() || !init[1].is_number_integer())
            throw SchemaError(child(path, "initial"), "expected [X1, X2] integers");
        s.initial = {init[0].get<std::int64_t>(), init[1].get<std::int64_t>()};
    }
    if (j.contains("event_cap")) s.event_cap = static_cast<std::uint64_t>(integer(j, path, "event_cap"));
    return s;
}

ContinuousModelSpec continuous_spec_from_json(const Json& j, const std::string& path) {
    expect_object(j, path,
                  {"g1", "g2", "k2", "lambda1", "burst", "scaling", "n", "initial", "lookahead", "event_cap"});
    ContinuousModelSpec s;
    s.g1 = number(j, path, "g1");
    s.g2 = number(j, path, "g2");
    s.k2 = number(j, path, "k2");
    s.lambda1 = rate_from_json(field(j, path, "lambda1"), child(path, "lambda1"));
    s.burst = density_from_json(field(j, path, "burst"), child(path, "burst"));
    if (j.contains("scaling")) {
        try {
            s.scaling = scaling_from_string(text(j, path, "scaling"));
        } catch (const DomainError& e) {
            throw SchemaError(child(path, "scaling"), e.what());
        }
    }
    if (j.contains("n")) s.n = integer(j, path, "n");
    if (j.contains("initial")) {
        const auto init = numbers(j, path, "initial");
        if (init.size() != 2) throw SchemaError(child(path, "initial"), "expected [x1, x2]");
        s.initial = {init[0], init[1]};
    }
    if (j.contains("lookahead")) s.lookahead = number(j, path, "lookahead");
    if (j.contains("event_cap")) s.event_cap = static_cast<std::uint64_t>(integer(j, path, "event_cap"));
    return s;
}

Json to_json(const RateFunction& rate) {
    const auto& p = rate.params();
    switch (rate.kind()) {
        case RateKind::Constant:
            return {{"kind", "constant"}, {"c", p[0]}};
        case RateKind::Linear:
            return {{"kind", "linear"}, {"a", p[0]}, {"b", p[1]}};
        case RateKind::Hill:
            return {{"kind", "hill"}, {"L", p[0]}, {"D", p[1]}, {"alpha", static_cast<int>(p[2])}};
        case RateKind::Custom:
            break;
    }
    throw SchemaError("kind", "custom rate '" + rate.name() + "' has no serial form");
}

Json to_json(const BivariateRate& rate) {
    Json j = Json::object();
    const auto one = RateFunction::constant(1.0);
    if (!(rate.on_x1 == one)) j["x1"] = to_json(rate.on_x1);
    if (!(rate.on_x2 == one)) j["x2"] = to_json(rate.on_x2);
    if (rate.zero_on_zero) j["zero_on_zero"] = *rate.zero_on_zero == Argument::X1 ? "x1" : "x2";
    return j;
}

Json to_json(const BurstDensity& density) {
    if (density.kind() == DensityKind::Exponential) return {{"kind", "exponential"}, {"mean", density.mean()}};
    return {{"kind", "tabulated"}, {"edges", density.edges()}, {"weights", density.weights()}};
}

Json to_json(const DiscreteModelSpec& spec) {
    Json j = {{"lambda1", to_json(spec.lambda1)},
              {"gamma1", to_json(spec.gamma1)},
              {"lambda2", to_json(spec.lambda2)},
              {"gamma2", to_json(spec.gamma2)},
              {"N", spec.scale},
              {"initial", {spec.initial.x1, spec.initial.x2}}};
    if (spec.event_cap != kDefaultEventCap) j["event_cap"] = spec.event_cap;
    return j;
}

Json to_json(const ContinuousModelSpec& spec) {
    Json j = {{"g1", spec.g1},
              {"g2", spec.g2},
              {"k2", spec.k2},
              {"lambda1", to_json(spec.lambda1)},
              {"burst", to_json(spec.burst)},
              {"scaling", to_string(spec.scaling)},
              {"n", spec.n},
              {"initial", {spec.initial.x1, spec.initial.x2}}};
    if (spec.lookahead) j["lookahead"] = *spec.lookahead;
    if (spec.event_cap != kDefaultEventCap) j["event_cap"] = spec.event_cap;
    return j;
}

ModelSpec model_document_from_json(const Json& j) {
    expect_object(j, "", {"schema", "model", "spec"});
    const std::string schema = text(j, "", "schema");
    if (schema != kSchemaVersion) throw SchemaError("schema", "unsupported schema '" + schema + "'");
    const std::string model = text(j, "", "model");
    if (model == "discrete") return discrete_spec_from_json(field(j, "", "spec"), "spec");
    if (model == "continuous") return continuous_spec_from_json(field(j, "", "spec"), "spec");
    throw SchemaError("model", "expected \"discrete\" or \"continuous\"");
}

Json model_document(const ModelSpec& spec) {
    return std::visit(
        [](const auto& s) -> Json {
            using T = std::decay_t<decltype(s)>;
            const char* model = std::is_same_v<T, DiscreteModelSpec> ? "discrete" : "continuous";
            return {{"schema", kSchemaVersion}, {"model", model}, {"spec", to_json(s)}};
        },
        spec);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t spec_hash(const ModelSpec& spec) { return fnv1a(model_document(spec).dump()); }

}  // namespace burstkit
