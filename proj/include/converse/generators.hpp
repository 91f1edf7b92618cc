#pragma once

// Seeded random instance generation for property sweeps: PMFs, channels,
// joints, recovery criteria and planar point sets. Deterministic across
// builds (splitmix-based), so verify counterexamples are re-runnable.

#include <array>
#include <cstdint>
#include <vector>

#include "converse/fano.hpp"
#include "converse/measures.hpp"
#include "converse/rng.hpp"

namespace converse {

// Dirichlet-like positive PMF (independent exponentials, normalized).
FinitePMF random_pmf(TrialRng& rng, std::size_t n);

// As above but each entry is zeroed with the given probability (at least one
// entry stays positive).
FinitePMF random_pmf_with_zeros(TrialRng& rng, std::size_t n, double zero_prob);

ChannelMatrix random_channel(TrialRng& rng, std::size_t inputs, std::size_t outputs);

JointPMF random_joint(TrialRng& rng, std::size_t rows, std::size_t cols);

Joint3PMF random_joint3(TrialRng& rng, std::size_t na, std::size_t nb, std::size_t nc);

// Distances uniform in [0,1], threshold uniform in [lo, hi].
RecoveryCriterion random_criterion(TrialRng& rng, std::size_t v_size, std::size_t vhat_size,
                                   double t_lo, double t_hi);

// Uniform points in the unit square.
std::vector<std::array<double, 2>> random_planar_points(TrialRng& rng, std::size_t n);

}  // namespace converse
