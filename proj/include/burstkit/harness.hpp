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
#include <filesystem>
#include <string>
#include <vector>

#include "burstkit/model_json.hpp"
#include "burstkit/stats.hpp"

namespace burstkit {

enum class ModelKind { DiscreteFull, DiscreteReduced, Pdmp2d, Pdmp1d, OdeLimit };
enum class DistanceKind { Wasserstein1, Kolmogorov };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// Declarative experiment: a model, a sweep of scale indices and an ensemble
/// size per index. The spec holds unscaled parameters; the sweep index is the
/// chain scale N (discrete-full) or the scaling index n (pdmp-2d).
struct ExperimentConfig {
    ModelKind model = ModelKind::Pdmp2d;
    ModelSpec spec;
    std::vector<std::int64_t> sweep;
    std::int64_t ensemble_size = 1;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "burstkit_out";
    DistanceKind distance = DistanceKind::Wasserstein1;
    double threshold = 0.1;
    /// RK4 step for the deterministic reference
    double ode_dt = 1e-3;
    /// FNV-1a of the canonical config document
    std::uint64_t config_hash = 0;
};

/// Strict reader of the versioned config document; model hypotheses are
/// re-validated. Throws SchemaError / HypothesisViolation.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& config);

/// Reads `path`; the BURSTKIT_SEED environment variable, when set, replaces the seed.
ExperimentConfig parse_config(const std::filesystem::path& path);

struct EnsembleTelemetry {
    double wall_seconds = 0.0;
    std::uint64_t events = 0;
};

struct EnsembleResult {
    /// Terminal x2 (X2 for discrete models), indexed by replicate.
    std::vector<double> terminal;
    EnsembleTelemetry telemetry;

    EmpiricalDistribution distribution() const { return EmpiricalDistribution::from_samples(terminal); }
};

/// Replicate r at scale n runs on stream (seed, n, r); the result does not
/// depend on `workers`. Any engine error aborts the whole ensemble.
EnsembleResult ensemble_terminal_samples(const ExperimentConfig& config, std::int64_t n, unsigned workers = 1);

/// Reference ensemble of the limit model (stream index 0), or a single
/// deterministic point for the S1 / ODE case. Empty for limit-model configs.
EnsembleResult reference_samples(const ExperimentConfig& config, unsigned workers = 1);

struct ExperimentOutcome {
    ConvergenceReport report;
    bool has_reference = false;
    std::filesystem::path output_dir;

    int exit_code() const { return report.passed() ? 0 : 1; }
};

/// Runs the sweep and writes report.json, distances.csv, manifest.json and
/// samples_<n>.csv (plus samples_reference.csv) into the output directory.
ExperimentOutcome run_experiment(const ExperimentConfig& config, unsigned workers = 1);

}  // namespace burstkit
