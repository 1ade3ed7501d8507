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

// burstkit command line: run / validate experiment configs, print burst tables.

#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "burstkit/burst.hpp"
#include "burstkit/harness.hpp"

namespace {

constexpr int kExitVerdictFailed = 1;
constexpr int kExitError = 2;

int report_failure(const std::string& kind, const std::exception& e, const burstkit::Json& extra = {}) {
    burstkit::Json failure = {{"error", kind}, {"message", e.what()}};
    if (extra.is_object()) failure.update(extra);
    std::cerr << failure.dump(2) << '\n';
    return kExitError;
}

template <class Body>
int guarded(Body&& body) {
    using namespace burstkit;
    try {
        return body();
    } catch (const SchemaError& e) {
        return report_failure("SchemaError", e, {{"field", e.field()}});
    } catch (const HypothesisViolation& e) {
        Json list = Json::array();
        for (const auto& v : e.violations()) list.push_back({{"name", v.name}, {"witness", v.witness}});
        return report_failure("HypothesisViolation", e, {{"violations", list}});
    } catch (const EventBudgetExceeded& e) {
        return report_failure("EventBudgetExceeded", e, {{"limit", e.limit()}});
    } catch (const std::exception& e) {
        return report_failure("Error", e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"burstkit: bursting gene-expression simulators and reduction checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());

    auto* run = app.add_subcommand("run", "Run a scaling sweep and write the report files");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory (overrides the config)");

    auto* validate = app.add_subcommand("validate", "Check a config and its model hypotheses");
    validate->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

    double k2 = 0.0;
    double g1 = 0.0;
    std::int64_t zmax = 0;
    auto* pmf = app.add_subcommand("pmf", "Print the geometric burst size table as CSV");
    pmf->add_option("--k2", k2, "Production rate of the second species")->required();
    pmf->add_option("--g1", g1, "Degradation rate of the first species")->required();
    pmf->add_option("--zmax", zmax, "Largest burst size listed")->required()->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        return guarded([&] {
            auto config = burstkit::parse_config(config_path);
            if (!out_dir.empty()) config.output_dir = out_dir;
            const auto outcome = burstkit::run_experiment(config, workers);
            std::cout << burstkit::to_json(outcome.report).dump(2) << '\n';
            return outcome.report.passed() ? 0 : kExitVerdictFailed;
        });
    }
    if (*validate) {
        return guarded([&] {
            const auto config = burstkit::parse_config(config_path);
            std::cout << "valid: " << burstkit::to_string(config.model) << ", sweep of " << config.sweep.size()
                      << " scale point(s)\n";
            return 0;
        });
    }
    return guarded([&] {
        burstkit::write_geometric_pmf_csv(std::cout, k2, g1, zmax);
        return 0;
    });
}
