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
#include <stdexcept>
#include <string>
#include <vector>

namespace burstkit {

/// One failed model hypothesis together with the probe point that exposed it.
struct Violation {
    std::string name;
    std::vector<double> witness;
};

std::string describe(const Violation& v);

class HypothesisViolation : public std::runtime_error {
public:
    explicit HypothesisViolation(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }
    const Violation& first() const { return violations_.front(); }

private:
    std::vector<Violation> violations_;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(std::string field_path, const std::string& detail = {});
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class EventBudgetExceeded : public std::runtime_error {
public:
    explicit EventBudgetExceeded(std::uint64_t limit);
    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t limit_;
};

class BurstCapExceeded : public std::runtime_error {
public:
    BurstCapExceeded(std::uint64_t start, std::uint64_t cap);
};

class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationTooSmall : public std::runtime_error {
public:
    TruncationTooSmall(double boundary_mass, int bound);
    double boundary_mass() const noexcept { return mass_; }

private:
    double mass_;
};

class StepTooLarge : public std::runtime_error {
public:
    StepTooLarge(double dt, double relative_change);
};

}  // namespace burstkit
