#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace igeo {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail; // worst observed deviation vs. its bound
};

/// Runs the full invariant suite at a pinned seed. Deterministic: the same
/// seed reproduces identical sample sets and results.
std::vector<SuiteResult> run_validation_suites(std::uint64_t seed);

/// Prints one [PASS]/[FAIL] line per suite; returns true when all passed.
bool report_validation(const std::vector<SuiteResult>& results, std::ostream& out);

} // namespace igeo
