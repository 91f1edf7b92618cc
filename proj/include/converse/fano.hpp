#pragma once

// The Fano inequality family as computable lower bounds on error probability
// and conditional entropy, for exact, approximate, conditional and continuum
// recovery criteria. Probability bounds clamp to [0,1]; a vacuous bound is
// the value 0, never an error.

#include <cstddef>
#include <vector>

#include "converse/measures.hpp"

namespace converse {

/// Distance table d(v, vhat) plus a threshold; recovery succeeds when
/// d(V, Vhat) <= threshold.
struct RecoveryCriterion {
    std::size_t v_size = 0;
    std::size_t vhat_size = 0;
    std::vector<double> distance;  // row-major v_size x vhat_size
    double threshold = 0.0;

    RecoveryCriterion(std::size_t v_size, std::size_t vhat_size, std::vector<double> distance,
                      double threshold);

    // d(v, vhat) = 1{v != vhat} with threshold 0: the exact-recovery criterion.
    static RecoveryCriterion equality(std::size_t n);

    double at(std::size_t v, std::size_t vhat) const { return distance[v * vhat_size + vhat]; }
};

struct NeighborhoodCounts {
    std::size_t n_max = 0;
    std::size_t n_min = 0;
    std::vector<std::size_t> per_vhat;  // per_vhat[vhat] = #{v : d(v,vhat) <= t}
};

NeighborhoodCounts neighborhood_counts(const RecoveryCriterion& rc);

// H2(pe) + pe ln(m-1): an upper bound on H(V|Vhat) for any estimator.
double fano_entropy_rhs(double pe, std::size_t m);

// max(0, 1 - (mi + ln 2)/ln m), clamped to [0,1]. Intended for uniform V and
// m >= 3; with m = 2 the clamp makes it 0 (use fano_pe_lower_binary instead).
double fano_pe_lower(double mi, std::size_t m);

// Binary-alphabet form: inv_binary_entropy(clamp(ln 2 - mi)). In [0, 1/2].
double fano_pe_lower_binary(double mi);

// max(0, 1 - (mi + ln 2)/ln(m/n_max)); requires 1 <= n_max < m.
double approx_fano_pe_lower(double mi, std::size_t m, std::size_t n_max);

// H2(pe_t) + pe_t ln((m - n_min)/n_max) + ln(n_max).
double approx_fano_entropy_rhs(double pe_t, std::size_t m, std::size_t n_max, std::size_t n_min);

/// One conditioning block: its probability, the conditional entropy of V
/// given the estimate inside the block, and the block support size.
struct ConditionalFanoEntry {
    double weight;             // P[A = a]
    double cond_entropy;       // H(V | Vhat, A = a), nats
    std::size_t support_size;  // |V_a|, must be >= 3
};

// sum_a weight * max(0, (cond_entropy - ln 2)/ln(support_size - 1)). Each
// term is clamped at 0 before weighting, which is valid because the
// per-block bound holds separately. Blocks with support_size <= 2 are
// rejected; binary blocks must go through fano_pe_lower_binary.
double conditional_fano_pe_lower(const std::vector<ConditionalFanoEntry>& entries);

struct VolumeRatio {
    double total_volume;     // Vol of the parameter set, > 0
    double sup_ball_volume;  // sup over centers of Vol(set intersect ball), > 0
    VolumeRatio(double total_volume, double sup_ball_volume);
};

// max(0, 1 - (mi + ln 2)/ln(total/sup_ball)); equal volumes are rejected.
double continuum_fano_pe_lower(double mi, const VolumeRatio& vr);

// Closed-form volume helpers for the continuum bound. Bodies beyond
// axis-aligned boxes and l2/linf balls must be supplied as precomputed
// volumes.
double box_volume(const std::vector<double>& side_lengths);
double l2_ball_volume(std::size_t dim, double radius);
double linf_ball_volume(std::size_t dim, double radius);

}  // namespace converse
