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

#include "burstkit/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "burstkit/pdmp.hpp"
#include "burstkit/ssa.hpp"

namespace burstkit {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::DiscreteFull:
            return "discrete-full";
        case ModelKind::DiscreteReduced:
            return "discrete-reduced";
        case ModelKind::Pdmp2d:
            return "pdmp-2d";
        case ModelKind::Pdmp1d:
            return "pdmp-1d";
        case ModelKind::OdeLimit:
            return "ode-limit";
    }
    return "pdmp-2d";
}

ModelKind model_kind_from_string(const std::string& s) {
    for (auto k : {ModelKind::DiscreteFull, ModelKind::DiscreteReduced, ModelKind::Pdmp2d, ModelKind::Pdmp1d,
                   ModelKind::OdeLimit})
        if (to_string(k) == s) return k;
    throw SchemaError("model", "unknown model kind '" + s + "'");
}

namespace {

bool is_discrete(ModelKind k) { return k == ModelKind::DiscreteFull || k == ModelKind::DiscreteReduced; }

const Json& required(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(key, "missing required field");
    return *it;
}

double positive_number(const Json& j, const char* key) {
    const Json& v = required(j, key);
    if (!v.is_number()) throw SchemaError(key, "expected a number");
    const double x = v.get<double>();
    if (!(x > 0.0)) throw SchemaError(key, "must be > 0");
    return x;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("", "config must be a JSON object");
    static const char* const allowed[] = {"schema",    "model",      "spec",     "sweep",    "ensemble_size",
                                          "t_end",     "seed",       "output_dir", "distance", "threshold",
                                          "ode_dt"};
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw SchemaError(key, "unknown field");
    }
    const Json& schema = required(j, "schema");
    if (!schema.is_string() || schema.get<std::string>() != kSchemaVersion)
        throw SchemaError("schema", std::string("expected \"") + kSchemaVersion + "\"");

    ExperimentConfig c;
    const Json& model = required(j, "model");
    if (!model.is_string()) throw SchemaError("model", "expected a string");
    c.model = model_kind_from_string(model.get<std::string>());

    const Json& spec = required(j, "spec");
    if (is_discrete(c.model))
        c.spec = discrete_spec_from_json(spec, "spec");
    else
        c.spec = continuous_spec_from_json(spec, "spec");

    const Json& sweep = required(j, "sweep");
    if (!sweep.is_array() || sweep.empty()) throw SchemaError("sweep", "expected a non-empty array");
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const std::string path = "sweep[" + std::to_string(i) + "]";
        if (!sweep[i].is_number_integer()) throw SchemaError(path, "expected an integer");
        const auto n = sweep[i].get<std::int64_t>();
        if (n < 1) throw SchemaError(path, "scale indices must be >= 1");
        if (!c.sweep.empty() && n <= c.sweep.back()) throw SchemaError(path, "sweep must strictly increase");
        c.sweep.push_back(n);
    }

    const Json& m = required(j, "ensemble_size");
    if (!m.is_number_integer() || m.get<std::int64_t>() < 1) throw SchemaError("ensemble_size", "must be an integer >= 1");
    c.ensemble_size = m.get<std::int64_t>();
    c.t_end = positive_number(j, "t_end");

    const Json& seed = required(j, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
        throw SchemaError("seed", "expected a non-negative integer");
    c.seed = seed.get<std::uint64_t>();

    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw SchemaError("output_dir", "expected a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("distance")) {
        const Json& d = j["distance"];
        const std::string kind = d.is_string() ? d.get<std::string>() : "";
        if (kind == "w1")
            c.distance = DistanceKind::Wasserstein1;
        else if (kind == "ks")
            c.distance = DistanceKind::Kolmogorov;
        else
            throw SchemaError("distance", "expected \"w1\" or \"ks\"");
    }
    if (j.contains("threshold")) c.threshold = positive_number(j, "threshold");
    if (j.contains("ode_dt")) c.ode_dt = positive_number(j, "ode_dt");

    std::visit([](const auto& s) { (void)validate_spec(s); }, c.spec);
    c.config_hash = fnv1a(to_json(c).dump());
    return c;
}

Json to_json(const ExperimentConfig& c) {
    Json spec = std::visit([](const auto& s) { return to_json(s); }, c.spec);
    return {{"schema", kSchemaVersion},
            {"model", to_string(c.model)},
            {"spec", spec},
            {"sweep", c.sweep},
            {"ensemble_size", c.ensemble_size},
            {"t_end", c.t_end},
            {"seed", c.seed},
            {"output_dir", c.output_dir.string()},
            {"distance", c.distance == DistanceKind::Wasserstein1 ? "w1" : "ks"},
            {"threshold", c.threshold},
            {"ode_dt", c.ode_dt}};
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot open config '" + path.string() + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    ExperimentConfig c = config_from_json(j);
    if (const char* env = std::getenv("BURSTKIT_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') throw SchemaError("BURSTKIT_SEED", "expected a non-negative integer");
        c.seed = v;
        c.config_hash = fnv1a(to_json(c).dump());
    }
    return c;
}

// ---------------------------------------------------------------------------

namespace {

/// Runs job(r) for r in [0, count) on `workers` threads; the first failure wins.
template <class Job>
void parallel_for(std::int64_t count, unsigned workers, Job&& job) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::int64_t>(count, 1))));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto drain = [&] {
        for (;;) {
            const std::int64_t r = next.fetch_add(1);
            if (r >= count) return;
            try {
                job(r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    if (workers == 1) {
        drain();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
    }
    if (failure) std::rethrow_exception(failure);
}

using Clock = std::chrono::steady_clock;

template <class Run>
EnsembleResult run_ensemble(std::int64_t count, unsigned workers, Run&& run) {
    EnsembleResult result;
    result.terminal.assign(static_cast<std::size_t>(count), 0.0);
    std::vector<std::uint64_t> events(static_cast<std::size_t>(count), 0);
    const auto t0 = Clock::now();
    parallel_for(count, workers, [&](std::int64_t r) {
        const auto [x2, ev] = run(r);
        result.terminal[static_cast<std::size_t>(r)] = x2;
        events[static_cast<std::size_t>(r)] = ev;
    });
    result.telemetry.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    for (auto e : events) result.telemetry.events += e;
    return result;
}

EnsembleResult discrete_ensemble(const ExperimentConfig& config, DiscreteModelSpec spec, bool reduced,
                                 std::uint64_t stream, unsigned workers) {
    const auto validated = validate_spec(spec);
    return run_ensemble(config.ensemble_size, workers, [&](std::int64_t r) {
        RandomStream rng(config.seed, stream, static_cast<std::uint64_t>(r));
        TerminalSink<DiscreteState> sink;
        if (reduced)
            run_reduced_1d(validated, config.t_end, rng, sink);
        else
            run_full_2d(validated, config.t_end, rng, sink);
        return std::pair{static_cast<double>(sink.terminal.x2), sink.events};
    });
}

EnsembleResult reduced_pdmp_ensemble(const ExperimentConfig& config, const ContinuousModelSpec& base,
                                     std::uint64_t stream, unsigned workers) {
    const ReducedPdmpSpec reduced = reduced_pdmp(base);
    return run_ensemble(config.ensemble_size, workers, [&](std::int64_t r) {
        RandomStream rng(config.seed, stream, static_cast<std::uint64_t>(r));
        TerminalSink<ContinuousState> sink;
        run_pdmp_1d(reduced, config.t_end, rng, sink);
        return std::pair{sink.terminal.x2, sink.events};
    });
}

EnsembleResult ode_point(const ExperimentConfig& config, const ContinuousModelSpec& base, std::int64_t copies) {
    const auto t0 = Clock::now();
    const double value = integrate_ode_limit(base, base.initial.x2, config.t_end, config.ode_dt).terminal();
    EnsembleResult result;
    result.terminal.assign(static_cast<std::size_t>(copies), value);
    result.telemetry.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

}  // namespace

EnsembleResult ensemble_terminal_samples(const ExperimentConfig& config, std::int64_t n, unsigned workers) {
    if (n < 1) throw DomainError("scale index must be >= 1");
    const auto stream = static_cast<std::uint64_t>(n);
    switch (config.model) {
        case ModelKind::DiscreteFull: {
            auto spec = std::get<DiscreteModelSpec>(config.spec);
            spec.scale = n;
            return discrete_ensemble(config, spec, false, stream, workers);
        }
        case ModelKind::DiscreteReduced:
            return discrete_ensemble(config, std::get<DiscreteModelSpec>(config.spec), true, stream, workers);
        case ModelKind::Pdmp2d: {
            const auto& base = std::get<ContinuousModelSpec>(config.spec);
            const auto validated = validate_spec(apply_scaling(base, base.scaling, n));
            return run_ensemble(config.ensemble_size, workers, [&](std::int64_t r) {
                RandomStream rng(config.seed, stream, static_cast<std::uint64_t>(r));
                TerminalSink<ContinuousState> sink;
                run_pdmp_2d(validated, config.t_end, rng, sink);
                return std::pair{sink.terminal.x2, sink.events};
            });
        }
        case ModelKind::Pdmp1d:
            return reduced_pdmp_ensemble(config, std::get<ContinuousModelSpec>(config.spec), stream, workers);
        case ModelKind::OdeLimit:
            return ode_point(config, std::get<ContinuousModelSpec>(config.spec), config.ensemble_size);
    }
    return {};
}

EnsembleResult reference_samples(const ExperimentConfig& config, unsigned workers) {
    switch (config.model) {
        case ModelKind::DiscreteFull:
            return discrete_ensemble(config, std::get<DiscreteModelSpec>(config.spec), true, 0, workers);
        case ModelKind::Pdmp2d: {
            const auto& base = std::get<ContinuousModelSpec>(config.spec);
            if (base.scaling == Scaling::S1) return ode_point(config, base, 1);
            return reduced_pdmp_ensemble(config, base, 0, workers);
        }
        default:
            return {};
    }
}

namespace {

void write_samples(const std::filesystem::path& file, const std::vector<double>& samples) {
    std::ofstream os(file);
    os.precision(17);
    os << "replicate,x2\n";
    for (std::size_t r = 0; r < samples.size(); ++r) os << r << ',' << samples[r] << '\n';
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << v;
    return os.str();
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, unsigned workers) {
    namespace fs = std::filesystem;
    ExperimentOutcome outcome;
    outcome.output_dir = config.output_dir;

    // compute everything before touching the output directory
    const EnsembleResult reference = reference_samples(config, workers);
    outcome.has_reference = !reference.terminal.empty();
    std::vector<EnsembleResult> ensembles;
    std::vector<ScalePoint> points;
    for (std::int64_t n : config.sweep) {
        ensembles.push_back(ensemble_terminal_samples(config, n, workers));
        if (!outcome.has_reference) continue;
        const auto sample = ensembles.back().distribution();
        const auto ref = reference.distribution();
        const double d =
            config.distance == DistanceKind::Wasserstein1 ? wasserstein1(sample, ref) : ks_distance(sample, ref);
        points.push_back({n, d, pooled_se(sample, ref), config.ensemble_size});
    }
    outcome.report = convergence_table(points, config.threshold);

    fs::create_directories(config.output_dir);
    Json report = to_json(outcome.report);
    report["schema"] = kSchemaVersion;
    report["model"] = to_string(config.model);
    report["distance"] = config.distance == DistanceKind::Wasserstein1 ? "w1" : "ks";
    report["reference"] = !outcome.has_reference ? "none"
                          : (config.model == ModelKind::DiscreteFull) ? "discrete-reduced"
                          : (std::get<ContinuousModelSpec>(config.spec).scaling == Scaling::S1) ? "ode-limit"
                                                                                                 : "pdmp-1d";
    Json events = Json::object();
    for (std::size_t i = 0; i < config.sweep.size(); ++i)
        events[std::to_string(config.sweep[i])] = ensembles[i].telemetry.events;
    report["events"] = events;
    std::ofstream(config.output_dir / "report.json") << report.dump(2) << '\n';

    {
        std::ofstream csv(config.output_dir / "distances.csv");
        write_csv(csv, outcome.report);
    }
    for (std::size_t i = 0; i < config.sweep.size(); ++i)
        write_samples(config.output_dir / ("samples_" + std::to_string(config.sweep[i]) + ".csv"),
                      ensembles[i].terminal);
    if (outcome.has_reference) write_samples(config.output_dir / "samples_reference.csv", reference.terminal);

    Json wall = Json::object();
    for (std::size_t i = 0; i < config.sweep.size(); ++i)
        wall[std::to_string(config.sweep[i])] = ensembles[i].telemetry.wall_seconds;
    Json manifest = {{"schema", kSchemaVersion},
                     {"version", BURSTKIT_VERSION},
                     {"config_hash", hex(config.config_hash)},
                     {"config", to_json(config)},
                     {"master_seed", config.seed},
                     {"streams", "(seed, n, replicate); reference ensemble on n = 0"},
                     {"workers", workers},
                     {"wall_seconds", wall},
                     {"reference_wall_seconds", reference.telemetry.wall_seconds},
                     {"timestamp", utc_timestamp()}};
    std::ofstream(config.output_dir / "manifest.json") << manifest.dump(2) << '\n';
    return outcome;
}

}  // namespace burstkit
