#pragma once

// Packing and covering machinery over explicit finite point sets, and the
// reductions that turn an information bound plus a separation guarantee into
// a minimax lower bound on estimation or optimization risk.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace converse {

/// A computed lower bound together with the quantities that produced it.
/// bound_value is the count / risk / probability the caller asked for;
/// a vacuous probability-type bound is 0 with the flag set, never an error.
struct BoundReport {
    double bound_value = 0.0;
    bool vacuous = false;
    bool asymptotic_only = false;  // display-form result with o(1) terms dropped
    std::string units;
    std::map<std::string, double> intermediates;
    std::vector<std::string> provenance;  // technique labels, e.g. "fano-approximate"
    std::vector<std::string> notes;
};

/// Finite point set with an explicit symmetric distance table. The is_metric
/// flag asserts the triangle inequality; construction spot-checks it on
/// sampled triples.
class MetricPointSet {
public:
    static MetricPointSet from_distance_matrix(std::vector<std::vector<double>> dist,
                                               bool is_metric);
    static MetricPointSet from_planar_points(const std::vector<std::array<double, 2>>& points);

    std::size_t size() const { return n_; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    bool is_metric() const { return is_metric_; }

private:
    MetricPointSet() = default;
    std::size_t n_ = 0;
    std::vector<double> dist_;
    bool is_metric_ = false;
};

// Hard upper limit on exact packing/covering instance sizes; the defaults
// below are the configured caps, this is the ceiling they may be raised to.
inline constexpr std::size_t kExactSetCapLimit = 30;
inline constexpr std::size_t kDefaultPackingCap = 24;
inline constexpr std::size_t kDefaultCoveringCap = 20;

// Greedy packing in ascending index order: keeps a point iff it is at
// distance >= eps from everything kept so far. Deterministic, maximal.
std::vector<std::size_t> greedy_packing(const MetricPointSet& ms, double eps);

// Exact packing number: maximum independent set in the conflict graph
// (edges where dist < eps), by branch and bound.
std::size_t exact_packing_number(const MetricPointSet& ms, double eps,
                                 std::size_t cap = kDefaultPackingCap);

// Greedy covering: repeatedly add the center covering the most uncovered
// points, lowest index on ties. Centers come from the point set itself.
std::vector<std::size_t> greedy_covering(const MetricPointSet& ms, double eps);

// Exact covering number: minimum number of eps-balls centered at set points
// that cover the set, by branch and bound.
std::size_t exact_covering_number(const MetricPointSet& ms, double eps,
                                  std::size_t cap = kDefaultCoveringCap);

// Exact numbers when the instance fits under the caps, otherwise the greedy
// one-sided values with a note saying which side they bound.
BoundReport packing_number_report(const MetricPointSet& ms, double eps,
                                  std::size_t cap = kDefaultPackingCap);
BoundReport covering_number_report(const MetricPointSet& ms, double eps,
                                   std::size_t cap = kDefaultCoveringCap);

/// Loss as a monotone increasing function of the separation radius.
struct LossModel {
    std::function<double(double)> phi;
    std::string description;

    static LossModel squared();              // phi(r) = r^2
    static LossModel identity();             // phi(r) = r
    static LossModel power(double exponent); // phi(r) = r^exponent
};

// phi(eps/2) * (Fano fraction at log-cardinality ln m). The caller certifies
// that the m hypotheses are pairwise eps-separated in the loss metric.
// m = 2 is routed through the inverse-binary-entropy form.
BoundReport minimax_bound_exact(const LossModel& loss, double eps, std::size_t m,
                                double mi_upper);
// Same bound with the log-cardinality supplied directly (for counts too large
// to materialize).
BoundReport minimax_bound_exact_log(const LossModel& loss, double eps, double log_m,
                                    double mi_upper);

// Approximate-recovery variant: the denominator becomes ln(m / n_max). The
// caller certifies d(v,v') > t implies eps-separation.
BoundReport minimax_bound_approx(const LossModel& loss, double eps, std::size_t m,
                                 std::size_t n_max, double mi_upper);
BoundReport minimax_bound_approx_log(const LossModel& loss, double eps, double log_m,
                                     double log_n_max, double mi_upper);

enum class LocalVariant { aux_min, aux_avg, pairwise_avg, pairwise_max };

/// Divergence statistics for the local approach: per-hypothesis divergences
/// to a chosen auxiliary distribution, and/or the full pairwise table.
struct LocalDivergences {
    std::vector<double> to_aux;                 // D(P_v || Q), one per hypothesis
    std::vector<std::vector<double>> pairwise;  // D(P_v || P_w)
};

// Local approach: the selected divergence statistic replaces the mutual
// information in the exact-recovery reduction. Any of the four statistics is
// a valid surrogate.
BoundReport local_bound(const LossModel& loss, double eps, const LocalDivergences& div,
                        LocalVariant variant);

// Global approach: packing log-cardinality in the denominator, KL-covering
// metric entropy plus n * eps_c in the numerator.
BoundReport global_bound(const LossModel& loss, double eps_p, double eps_c, std::size_t n,
                         double log_pack, double log_cover_kl);

// Noisy-optimization reduction: eps times the Fano fraction, m = 2 through
// the inverse-binary-entropy form. The caller certifies that each query point
// is eps-optimal for at most one of the m functions.
BoundReport optimization_bound(double eps, std::size_t m, double mi_upper);
BoundReport optimization_bound_log(double eps, double log_m, double mi_upper);

}  // namespace converse
