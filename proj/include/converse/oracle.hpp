#pragma once

// Ground-truth engines: exhaustive Bayes-optimal decoding, exact Ising
// enumeration, and seeded Monte Carlo estimators. The simulations run their
// trial loops under OpenMP; each trial writes into its own slot of a
// per-trial buffer and the reduction is a fixed-order serial sum, so a
// SimResult is a pure function of (inputs, seed, trials) regardless of the
// worker count. Serial reference implementations of the parallel kernels are
// kept in converse::serial for the consistency tests and the benchmark.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "converse/applications.hpp"
#include "converse/fano.hpp"
#include "converse/measures.hpp"

namespace converse {

struct SimResult {
    double estimate = 0.0;
    double stderror = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // seconds; not part of the determinism contract
};

// Exact minimal error probability over all decoders:
// 1 - sum_y max_v prior(v) P(y|v).
double bayes_optimal_error(const FinitePMF& prior, const ChannelMatrix& channel);

// Exact minimal probability of landing farther than the threshold:
// 1 - sum_y max_vhat sum_{v: d(v,vhat) <= t} prior(v) P(y|v).
double bayes_optimal_approx_error(const FinitePMF& prior, const ChannelMatrix& channel,
                                  const RecoveryCriterion& rc);

inline constexpr std::size_t kIsingMaxNodes = 12;

/// Undirected graph with coupling strength lambda; the enumerator is general,
/// forest-ness is not required.
struct IsingModel {
    std::size_t p = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    double lambda = 0.0;

    IsingModel(std::size_t p, std::vector<std::pair<std::size_t, std::size_t>> edges,
               double lambda);  // validates, deduplicates, rejects self-loops
};

struct IsingEnumeration {
    FinitePMF pmf;  // over 2^p states; bit i of the state index gives spin i
    double log_z = 0.0;
    std::vector<std::vector<double>> pair_correlations;  // E[Y_i Y_j], p x p
};

IsingEnumeration ising_enumerate(const IsingModel& model);

// Exact I(G; Y_1) for G uniform over the ensemble, via the mixture output
// distribution. All models must share p; ensemble size * 2^p is capped.
double ising_ensemble_mi(const std::vector<IsingModel>& models);

struct GroupTestingJoint {
    JointPMF joint;  // rows: defective sets in lexicographic order, cols: 2^n outcomes
    double mi = 0.0;
    double map_error = 0.0;
    std::vector<std::vector<std::size_t>> subsets;
    GroupTestingJoint(JointPMF j) : joint(std::move(j)) {}
};

// Exact joint over (defective set, outcome vector) for one fixed binary
// design (rows = tests), with exact information and exact MAP error.
GroupTestingJoint gt_exact_joint(std::size_t p, std::size_t k,
                                 const std::vector<std::vector<int>>& design, double eps);

enum class GtDecoder { map, plugin };

// Empirical error frequency over seeded trials: fresh Bernoulli(nu) design,
// uniform defective set and noise per trial, then the chosen decoder.
SimResult gt_simulate(const GroupTestingSpec& spec, double nu, std::size_t n, GtDecoder decoder,
                      std::uint64_t trials, std::uint64_t seed);

/// Equal-covariance Gaussian mixture: component means plus a shared sigma.
struct GaussianMixture {
    std::vector<std::vector<double>> means;  // component x dimension
    double sigma = 0.0;
    FinitePMF prior;
    GaussianMixture(std::vector<std::vector<double>> means, double sigma, FinitePMF prior);
};

inline constexpr std::size_t kMixtureMaxComponents = 10'000;
inline constexpr std::size_t kMixtureMaxDimension = 16;

// Monte Carlo estimate of I(V;Y) as the average of ln P(y|v) - ln P(y).
SimResult mixture_mi_mc(const GaussianMixture& mix, std::uint64_t trials, std::uint64_t seed);

inline constexpr std::size_t kVolumeMaxDimension = 8;

/// Intersection of a bounding box with optional l2 / linf balls.
struct BodySpec {
    std::vector<std::pair<double, double>> box;  // per-dimension [lo, hi]
    std::optional<std::pair<std::vector<double>, double>> l2_ball;    // center, radius
    std::optional<std::pair<std::vector<double>, double>> linf_ball;  // center, radius
};

// Rejection-sampling volume estimate over the bounding box.
SimResult ball_volume_mc(const BodySpec& body, std::uint64_t trials, std::uint64_t seed);

// Serial reference implementations of the OpenMP trial loops above. Same
// seeding, same reduction order; estimates must agree bit for bit.
namespace serial {
SimResult gt_simulate(const GroupTestingSpec& spec, double nu, std::size_t n, GtDecoder decoder,
                      std::uint64_t trials, std::uint64_t seed);
SimResult mixture_mi_mc(const GaussianMixture& mix, std::uint64_t trials, std::uint64_t seed);
SimResult ball_volume_mc(const BodySpec& body, std::uint64_t trials, std::uint64_t seed);
}  // namespace serial

}  // namespace converse
