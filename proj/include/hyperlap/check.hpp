#pragma once

// Property suites behind `verify` and the fixed worked examples behind
// `reproduce`.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperlap/evolution.hpp"

namespace hyperlap::check {

struct PropertyResult {
    std::string name;
    int checks = 0;
    int violations = 0;
    double worst = 0.0;         // largest excess over the allowed bound
    std::string first_failure;  // empty when there are no violations
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;

    bool ok() const;
};

std::vector<std::string_view> property_names();

/// Runs every property suite on instances drawn from `seed`. Suites are spread
/// over `threads` workers (0 picks the hardware count); each draws from its
/// own generator, so the report does not depend on scheduling.
VerifyReport verify(std::uint64_t seed, unsigned threads = 0);

struct CaseReport {
    std::string name;
    bool ok = false;
    std::vector<std::pair<std::string, std::string>> values;
    std::optional<Trajectory> trajectory;
};

std::vector<std::string_view> case_names();

/// Throws Error(InvalidArgument) on an unknown name.
CaseReport reproduce(std::string_view name);

}  // namespace hyperlap::check
