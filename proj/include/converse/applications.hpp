#pragma once

// Bound calculators for five worked problems: group testing, forest Ising
// model selection, sparse linear regression, density estimation, and
// strongly convex stochastic optimization. Each evaluates its proof chain
// exactly at the given finite instance (big-integer counts, logs taken last);
// where a well-known display form drops vanishing terms, that form is
// reported alongside and flagged asymptotic.

#include <cstdint>
#include <vector>

#include "converse/combinatorics.hpp"
#include "converse/reductions.hpp"

namespace converse {

struct GroupTestingSpec {
    std::uint64_t p = 0;         // items
    std::uint64_t k = 0;         // defectives
    double eps = 0.0;            // test-outcome crossover, in [0, 1/2)
    double delta = 0.0;          // target error probability
    std::uint64_t list_size = 0;  // L >= k, approximate mode only
    double alpha = 0.0;           // tolerated missed fraction, approximate mode only
};

// Per-test information ceiling ln 2 - H2(eps), in nats.
double gt_capacity(double eps);

// Tests needed for exact recovery at error probability delta; holds for
// non-adaptive and adaptive designs alike.
BoundReport gt_exact_tests_lower(const GroupTestingSpec& spec);

// List-decoding variant: the ambiguity count N_max is the exact combinatorial
// sum over list overlaps.
BoundReport gt_approx_tests_lower(const GroupTestingSpec& spec);

struct IsingSpec {
    std::uint64_t p = 0;       // nodes, >= 3
    double lambda = 0.0;       // edge strength, > 0
    double delta = 0.0;        // target error probability
    double alpha = 0.0;        // tolerated edit-distance fraction, approximate mode
    std::uint64_t n_node = 0;  // node-observation budget, adaptive mode
    double er_q = 0.0;         // edge probability, random-graph mode
};

// Samples needed for exact forest recovery: the better of the all-trees
// ensemble and the single-edge ensemble.
BoundReport ising_exact_samples_lower(const IsingSpec& spec);

// Edit-distance-alpha*p recovery: both ensembles with exact ambiguity counts.
BoundReport ising_approx_samples_lower(const IsingSpec& spec);

// Node-observation budget under adaptive querying.
BoundReport ising_adaptive_nodes_lower(const IsingSpec& spec);

// Random-graph (edge probability q) sample bound; display form only, the
// typical-set constants are not pinned down, so the report is flagged
// asymptotic.
BoundReport erdos_renyi_samples_lower(std::uint64_t p, double q, double delta);

struct IsingEdgeStats {
    double correlation;         // E[Y_i Y_j] across one edge = tanh(lambda)
    double kl_to_empty_upper;   // lambda * tanh(lambda)
};
IsingEdgeStats ising_single_edge_stats(double lambda);

struct SparseRegressionSpec {
    std::uint64_t p = 0;    // ambient dimension
    std::uint64_t k = 0;    // sparsity, < p
    double sigma = 0.0;     // noise standard deviation, > 0
    double frob_sq = 0.0;   // squared Frobenius norm of the design, > 0
    double delta = 0.0;     // target risk (0 = not requested)
    std::uint64_t n = 0;    // sample count for the budget form (0 = not given)
};

// Minimax risk lower bound in squared l2 loss, evaluated through the exact
// finite-size chain; the familiar constant-32 display form is reported
// alongside, flagged asymptotic. When delta and n are set, the sample-count
// form under the power budget frob_sq = n*p*Gamma is included.
BoundReport sparse_minimax_risk_lower(const SparseRegressionSpec& spec);

struct SparsePackingFamily {
    BigInt family_size;  // 2^k * C(p,k) signed k-sparse sign patterns
    BigInt n_max;        // ambiguity count at Hamming threshold t = k/2
    double threshold;    // t = k/2
    double log_family_size;
    double log_n_max;
    double eps_prime;
    // Materialized sign patterns (entries -1/0/+1), filled when p <= cap.
    std::vector<std::vector<int>> vectors;
};

// The signed k-sparse family with its Hamming recovery criterion; vectors are
// materialized up to the enumeration cap, counts-only beyond it.
SparsePackingFamily sparse_packing_family(std::uint64_t p, std::uint64_t k, double eps_prime,
                                          std::uint64_t materialize_cap = 16);

struct DensitySpec {
    double eta = 0.0;    // density floor, in (0,1)
    double c_lo = 0.0;   // packing-entropy lower constant
    double c_hi = 0.0;   // packing-entropy upper constant
    std::uint64_t n = 0; // sample count
    double delta = 0.0;  // target risk (0 = not requested)
};

// Squared-L2 minimax risk bound with the radii chosen to balance the covering
// and sampling terms; the balancing identities are asserted internally.
BoundReport density_minimax_risk_lower(const DensitySpec& spec);

/// Piecewise-constant density on [0,1] over equal-width bins.
struct PiecewiseDensity {
    std::vector<double> values;  // bin heights; must average to 1
    explicit PiecewiseDensity(std::vector<double> values);
};

struct DivergenceChain {
    double kl;
    double chi2;
    double l2_sq;
};

// Exact piecewise integrals of KL, chi-square and squared-L2 between two
// densities on a shared grid; asserts kl <= chi2 <= l2_sq/eta. The second
// density must sit above the floor eta everywhere.
DivergenceChain density_divergence_chain(const PiecewiseDensity& f1, const PiecewiseDensity& f2,
                                         double eta);

struct ConvexOptSpec {
    double sigma = 0.0;      // oracle noise standard deviation
    double delta = 0.0;      // target optimality gap
    double eps = 0.0;        // separation level; 0 < eps < eps_prime < 1/8
    double eps_prime = 0.0;
};

// Queries needed for delta-optimality with a noisy value-and-gradient oracle.
BoundReport scvx_queries_lower(const ConvexOptSpec& spec);

/// The two-quadratic hard pair on [0,1] plus the midpoint reference.
struct ScvxConstruction {
    double eps_prime;
    double x_star_1;  // 1/2 - sqrt(2 eps')
    double x_star_2;  // 1/2 + sqrt(2 eps')

    // v = 1 or 2 selects the pair; v = 0 is the reference centered at 1/2.
    double value(int v, double x) const;
    double derivative(int v, double x) const;
};
ScvxConstruction scvx_construction(double eps_prime);

// Exact KL of one noisy value-and-gradient observation of f_v at x against
// the reference f_0; always at most 2*eps'/sigma^2.
double scvx_per_query_kl(double eps_prime, double sigma, double x, int v);

// eps * inv_binary_entropy(clamp(ln 2 - 2 n eps'/sigma^2)).
double scvx_risk_lower(std::uint64_t n, double sigma, double eps, double eps_prime);

}  // namespace converse
