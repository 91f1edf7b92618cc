#pragma once

// File-format boundary: strict JSON problem specs in, self-describing JSON /
// CSV reports out. Unknown fields are rejected everywhere so a typo cannot
// silently change which bound gets evaluated. Reports carry the tool version
// and a SHA-256 digest of the canonicalized spec.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "converse/applications.hpp"
#include "converse/measures.hpp"
#include "converse/oracle.hpp"
#include "converse/reductions.hpp"

namespace converse {

inline constexpr const char* kToolName = "conversekit";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

enum class ProblemKind {
    group_testing,
    ising,
    erdos_renyi,
    sparse_regression,
    density,
    convex_opt,
    generic_hypothesis_test,
};

enum class ProblemMode { exact, approximate, adaptive };

/// One parsed problem instance; exactly one of the optional payloads is
/// filled, matching the kind.
struct ProblemSpec {
    ProblemKind kind;
    ProblemMode mode = ProblemMode::exact;
    std::string digest;  // sha256 of the canonicalized source document

    std::optional<GroupTestingSpec> group_testing;
    std::optional<IsingSpec> ising;
    std::optional<SparseRegressionSpec> sparse_regression;
    std::optional<DensitySpec> density;
    std::optional<ConvexOptSpec> convex_opt;
    struct ErdosRenyi {
        std::uint64_t p;
        double q;
        double delta;
    };
    std::optional<ErdosRenyi> erdos_renyi;
    struct GenericTest {
        FinitePMF prior;
        ChannelMatrix channel;
        std::optional<RecoveryCriterion> criterion;  // approximate mode
        GenericTest(FinitePMF pr, ChannelMatrix ch) : prior(std::move(pr)), channel(std::move(ch)) {}
    };
    std::optional<GenericTest> generic;
};

ProblemSpec parse_problem_spec(const nlohmann::json& doc);
ProblemSpec load_problem_spec(const std::string& path);

/// Simulation request (currently group testing only).
struct SimSpec {
    GroupTestingSpec gt;
    double nu = 0.0;
    std::vector<std::size_t> n_values;
    GtDecoder decoder = GtDecoder::map;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string digest;
};

SimSpec parse_sim_spec(const nlohmann::json& doc);
SimSpec load_sim_spec(const std::string& path);

// PMFs, channels and point sets share one JSON shape across the tool:
// a PMF is an array of masses, a channel an array of rows, a point set either
// {"points": [[x,y],...]} or {"distance_matrix": [[...],...], "is_metric": b}.
FinitePMF pmf_from_json(const nlohmann::json& j);
nlohmann::json pmf_to_json(const FinitePMF& p);
ChannelMatrix channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const ChannelMatrix& ch);
MetricPointSet metric_point_set_from_json(const nlohmann::json& j);

// Evaluates the bound a spec asks for.
BoundReport evaluate_problem_spec(const ProblemSpec& spec);

// Report serialization. JSON and CSV carry identical numeric payloads; CSV
// is two fixed columns (key,value) in a stable order.
nlohmann::json report_to_json(const BoundReport& report, const ProblemSpec& spec);
std::string report_to_csv(const BoundReport& report, const ProblemSpec& spec);
std::string report_to_table(const BoundReport& report, const ProblemSpec& spec);

// SHA-256 of the canonical (sorted-key, minimal-whitespace) serialization.
std::string canonical_digest(const nlohmann::json& doc);

// Fixed 17-significant-digit formatting used in all emitted files, so equal
// numbers serialize to equal bytes.
std::string format_number(double x);

}  // namespace converse
