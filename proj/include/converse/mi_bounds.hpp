#pragma once

// Computable upper bounds on mutual information: auxiliary-distribution and
// pairwise divergence bounds, the covering bound, and tensorization for
// product and adaptive sampling models. Every bound here dominates the exact
// mutual information it replaces, and the enumeration-backed variants verify
// that internally where the joint fits in memory.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "converse/measures.hpp"

namespace converse {

// Full-joint verification runs only when the expanded joint has at most this
// many cells; beyond it the bound is returned unverified.
inline constexpr std::size_t kExhaustiveCellCap = 10'000'000;

/// A finite hypothesis-testing instance: prior over v plus channel P(y|v).
struct HypothesisFamily {
    FinitePMF prior;
    ChannelMatrix channel;

    HypothesisFamily(FinitePMF prior, ChannelMatrix channel);
    JointPMF joint() const { return JointPMF::from_prior_channel(prior, channel); }
    double exact_mi() const { return mutual_information(joint()); }
};

struct AvgMax {
    double avg;
    double max;
};

// avg = sum_v P(v) D(P(.|v) || q), max = max_v D(.|v || q). Both dominate the
// exact mutual information for any auxiliary q; equality of avg at q = output
// marginal.
AvgMax mi_upper_aux(const HypothesisFamily& fam, const FinitePMF& q);

// avg = sum_{v,v'} P(v)P(v') D(P(.|v) || P(.|v')), max over ordered pairs.
AvgMax mi_upper_pairwise(const HypothesisFamily& fam);

// ln(N) + eps, valid when every row is within eps (in KL) of some center.
// The covering condition is verified; a violation throws, naming the worst v
// and its minimal divergence.
double mi_upper_covering(const HypothesisFamily& fam, const std::vector<FinitePMF>& centers,
                         double eps);

/// n conditionally independent samples of V, the i-th through its own channel.
struct ProductModel {
    std::vector<ChannelMatrix> per_sample_channels;  // all share input_size

    explicit ProductModel(std::vector<ChannelMatrix> channels);
    std::size_t n() const { return per_sample_channels.size(); }
    std::size_t input_size() const { return per_sample_channels.front().input_size(); }
};

struct TensorizationBound {
    double per_sample_sum = 0.0;   // sum_i I(V;Y_i)
    bool verified = false;         // full joint expanded and inequality checked
    double exact_joint_mi = 0.0;   // I(V;Y_1..Y_n); meaningful only when verified
};

// sum_i I(V;Y_i), which dominates I(V;Y^n). When the full joint fits under
// kExhaustiveCellCap it is expanded and the domination is checked exactly.
TensorizationBound tensorization_upper(const ProductModel& pm, const FinitePMF& prior);

/// Finite-horizon deterministic query policy: each history of (input, sample)
/// pairs maps to the next input, and each (v, input) pair has a sample
/// channel. All alphabets are finite.
struct AdaptivePolicyTree {
    std::size_t horizon;
    std::size_t x_size;
    std::size_t y_size;
    // sample_channels[v][x] = distribution of one sample given hypothesis v
    // and input x; outer size is the hypothesis count, inner size x_size.
    std::vector<std::vector<FinitePMF>> sample_channels;
    std::function<std::size_t(const std::vector<std::pair<std::size_t, std::size_t>>&)> policy;

    // A policy that plays inputs[i] at step i regardless of history.
    static AdaptivePolicyTree non_adaptive(std::size_t x_size, std::size_t y_size,
                                           std::vector<std::vector<FinitePMF>> channels,
                                           std::vector<std::size_t> inputs);
};

struct AdaptiveTensorizationBound {
    double per_step_sum = 0.0;    // sum_i I(V;Y_i|X_i)
    double exact_joint_mi = 0.0;  // I(V; X^n, Y^n), from full tree traversal
};

// Builds the exact joint over (V, X^n, Y^n) by traversing the policy tree,
// returns sum_i I(V;Y_i|X_i) and the exact joint information, and checks the
// domination internally (a violation is a logic error, not an input error).
// Throws when the traversal exceeds kExhaustiveCellCap states.
AdaptiveTensorizationBound adaptive_tensorization_upper(const AdaptivePolicyTree& tree,
                                                        const FinitePMF& prior);

struct DpiCheck {
    double lhs;  // I(V;Vhat)
    double rhs;  // I(V;Y)
    bool holds;  // lhs <= rhs + 1e-12
};

// Exact two-sided evaluation of the data processing inequality along
// V -> Y -> Vhat supplied as (prior, first-stage channel, second-stage channel).
DpiCheck dpi_check(const FinitePMF& prior, const ChannelMatrix& v_to_y,
                   const ChannelMatrix& y_to_vhat);

}  // namespace converse
