#pragma once

// Seeded property sweeps behind the `verify` command. Each suite replays the
// soundness and consistency properties of one slice of the library against
// exhaustive or closed-form oracles; failures carry a re-runnable JSON
// description of the offending instance.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace converse {

struct VerifyOptions {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
};

struct VerifyFailure {
    std::string check;
    nlohmann::json instance;
};

struct SuiteReport {
    std::string suite;
    std::size_t checks = 0;
    std::vector<VerifyFailure> failures;
};

// "fano", "divergences", "tensorization", "packing", "applications".
std::vector<std::string> verify_suite_names();

// Runs one suite, or all of them for name == "all". Unknown names throw.
std::vector<SuiteReport> run_verify(const std::string& name, const VerifyOptions& options);

}  // namespace converse
