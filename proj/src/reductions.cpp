#include "converse/reductions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "converse/measures.hpp"

namespace converse {

namespace {

constexpr double ln2 = std::numbers::ln2;

// max(0, 1 - (mi + ln 2)/log_denom); the recurring Fano fraction.
double fano_fraction(double mi, double log_denom) {
    if (!(log_denom > 0.0)) {
        throw std::invalid_argument("bound calculator: nonpositive log-cardinality denominator");
    }
    if (mi < 0.0) throw std::invalid_argument("bound calculator: negative information term");
    return std::clamp(1.0 - (mi + ln2) / log_denom, 0.0, 1.0);
}

double eval_phi(const LossModel& loss, double r) {
    if (!loss.phi) throw std::invalid_argument("LossModel: missing phi");
    const double v = loss.phi(r);
    if (!(v >= 0.0)) throw std::invalid_argument("LossModel: phi must be nonnegative");
    return v;
}

}  // namespace

MetricPointSet MetricPointSet::from_distance_matrix(std::vector<std::vector<double>> dist,
                                                    bool is_metric) {
    MetricPointSet ms;
    ms.n_ = dist.size();
    if (ms.n_ == 0) throw std::invalid_argument("MetricPointSet: empty point set");
    ms.dist_.assign(ms.n_ * ms.n_, 0.0);
    for (std::size_t i = 0; i < ms.n_; ++i) {
        if (dist[i].size() != ms.n_) {
            throw std::invalid_argument("MetricPointSet: distance table is not square");
        }
        for (std::size_t j = 0; j < ms.n_; ++j) {
            const double d = dist[i][j];
            if (!(d >= 0.0)) throw std::invalid_argument("MetricPointSet: negative distance");
            if (i == j && d != 0.0) {
                throw std::invalid_argument("MetricPointSet: nonzero diagonal");
            }
            if (dist[j][i] != d) throw std::invalid_argument("MetricPointSet: asymmetric table");
            ms.dist_[i * ms.n_ + j] = d;
        }
    }
    ms.is_metric_ = is_metric;
    if (is_metric) {
        // Spot-check the triangle inequality: all triples up to 16 points,
        // a deterministic sample beyond that.
        auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
            if (ms.dist(i, k) > ms.dist(i, j) + ms.dist(j, k) + 1e-9) {
                throw std::invalid_argument("MetricPointSet: triangle inequality violated at (" +
                                            std::to_string(i) + "," + std::to_string(j) + "," +
                                            std::to_string(k) + ")");
            }
        };
        if (ms.n_ <= 16) {
            for (std::size_t i = 0; i < ms.n_; ++i)
                for (std::size_t j = 0; j < ms.n_; ++j)
                    for (std::size_t k = 0; k < ms.n_; ++k) check(i, j, k);
        } else {
            std::uint64_t state = 0x9e3779b97f4a7c15ULL;
            for (int s = 0; s < 3000; ++s) {
                auto next = [&state, &ms] {
                    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
                    return static_cast<std::size_t>((state >> 33) % ms.n_);
                };
                check(next(), next(), next());
            }
        }
    }
    return ms;
}

MetricPointSet MetricPointSet::from_planar_points(
    const std::vector<std::array<double, 2>>& points) {
    std::vector<std::vector<double>> d(points.size(), std::vector<double>(points.size(), 0.0));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double dx = points[i][0] - points[j][0];
            const double dy = points[i][1] - points[j][1];
            d[i][j] = d[j][i] = std::hypot(dx, dy);
        }
    }
    return from_distance_matrix(std::move(d), true);
}

std::vector<std::size_t> greedy_packing(const MetricPointSet& ms, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("greedy_packing: eps must be positive");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        bool ok = true;
        for (std::size_t j : kept) {
            if (ms.dist(i, j) < eps) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(i);
    }
    return kept;
}

namespace {

void require_cap(std::size_t n, std::size_t cap, const char* what) {
    if (cap > kExactSetCapLimit) {
        throw std::invalid_argument(std::string(what) + ": cap exceeds the hard limit of " +
                                    std::to_string(kExactSetCapLimit));
    }
    if (n > cap) {
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(n) +
                                    " points exceed the exact-solver cap of " +
                                    std::to_string(cap));
    }
}

struct MisSolver {
    std::vector<std::uint64_t> conflicts;  // conflicts[i]: mask of j with dist < eps
    std::size_t best = 0;

    void run(std::uint64_t candidates, std::size_t size) {
        std::size_t alive = static_cast<std::size_t>(std::popcount(candidates));
        if (size + alive <= best) return;
        if (candidates == 0) {
            best = std::max(best, size);
            return;
        }
        // Branch on the candidate with the most conflicts among candidates;
        // if none conflict, everything remaining can be taken.
        std::size_t pick = 64, pick_deg = 0;
        bool any_conflict = false;
        for (std::uint64_t m = candidates; m != 0; m &= m - 1) {
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
            const std::size_t deg =
                static_cast<std::size_t>(std::popcount(conflicts[i] & candidates));
            if (deg > 0) any_conflict = true;
            if (pick == 64 || deg > pick_deg) {
                pick = i;
                pick_deg = deg;
            }
        }
        if (!any_conflict) {
            best = std::max(best, size + alive);
            return;
        }
        const std::uint64_t bit = 1ULL << pick;
        run(candidates & ~(conflicts[pick] | bit), size + 1);  // take
        run(candidates & ~bit, size);                          // skip
    }
};

struct CoverSolver {
    std::size_t n = 0;
    std::vector<std::uint64_t> covered_by;  // covered_by[i]: centers within eps of point i
    std::vector<std::uint64_t> covers;      // covers[c]: points within eps of center c
    std::size_t best = 0;

    void run(std::uint64_t uncovered, std::size_t chosen) {
        if (chosen >= best) return;
        if (uncovered == 0) {
            best = chosen;
            return;
        }
        // Branch on the uncovered point with the fewest usable centers.
        std::size_t pick = n;
        std::size_t pick_options = n + 1;
        for (std::uint64_t m = uncovered; m != 0; m &= m - 1) {
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(m));
            const std::size_t opts = static_cast<std::size_t>(std::popcount(covered_by[i]));
            if (opts < pick_options) {
                pick = i;
                pick_options = opts;
            }
        }
        for (std::uint64_t m = covered_by[pick]; m != 0; m &= m - 1) {
            const std::size_t c = static_cast<std::size_t>(std::countr_zero(m));
            run(uncovered & ~covers[c], chosen + 1);
        }
    }
};

}  // namespace

std::size_t exact_packing_number(const MetricPointSet& ms, double eps, std::size_t cap) {
    if (!(eps > 0.0)) throw std::invalid_argument("exact_packing_number: eps must be positive");
    require_cap(ms.size(), cap, "exact_packing_number");
    const std::size_t n = ms.size();
    MisSolver solver;
    solver.conflicts.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && ms.dist(i, j) < eps) solver.conflicts[i] |= 1ULL << j;
    solver.best = greedy_packing(ms, eps).size();  // valid packing: lower bound
    const std::uint64_t all = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    solver.run(all, 0);
    return solver.best;
}

std::vector<std::size_t> greedy_covering(const MetricPointSet& ms, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("greedy_covering: eps must be positive");
    const std::size_t n = ms.size();
    std::vector<bool> covered(n, false);
    std::vector<std::size_t> centers;
    std::size_t remaining = n;
    while (remaining > 0) {
        std::size_t pick = n, pick_gain = 0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t gain = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!covered[i] && ms.dist(i, c) <= eps) ++gain;
            }
            if (gain > pick_gain) {  // strict: lowest index wins ties
                pick = c;
                pick_gain = gain;
            }
        }
        centers.push_back(pick);
        for (std::size_t i = 0; i < n; ++i) {
            if (!covered[i] && ms.dist(i, pick) <= eps) {
                covered[i] = true;
                --remaining;
            }
        }
    }
    return centers;
}

std::size_t exact_covering_number(const MetricPointSet& ms, double eps, std::size_t cap) {
    if (!(eps > 0.0)) throw std::invalid_argument("exact_covering_number: eps must be positive");
    require_cap(ms.size(), cap, "exact_covering_number");
    const std::size_t n = ms.size();
    CoverSolver solver;
    solver.n = n;
    solver.covered_by.assign(n, 0);
    solver.covers.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < n; ++c) {
            if (ms.dist(i, c) <= eps) {
                solver.covered_by[i] |= 1ULL << c;
                solver.covers[c] |= 1ULL << i;
            }
        }
    }
    solver.best = greedy_covering(ms, eps).size();  // valid covering: upper bound
    if (solver.best == 0) solver.best = 1;
    const std::uint64_t all = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    solver.run(all, 0);
    return solver.best;
}

BoundReport packing_number_report(const MetricPointSet& ms, double eps, std::size_t cap) {
    BoundReport r;
    r.units = "count";
    if (ms.size() <= cap) {
        r.bound_value = static_cast<double>(exact_packing_number(ms, eps, cap));
        r.provenance = {"packing-exact-branch-and-bound"};
    } else {
        r.bound_value = static_cast<double>(greedy_packing(ms, eps).size());
        r.provenance = {"packing-greedy"};
        r.notes = {"greedy value is a one-sided lower bound on the packing number"};
    }
    r.intermediates["eps"] = eps;
    r.intermediates["points"] = static_cast<double>(ms.size());
    return r;
}

BoundReport covering_number_report(const MetricPointSet& ms, double eps, std::size_t cap) {
    BoundReport r;
    r.units = "count";
    if (ms.size() <= cap) {
        r.bound_value = static_cast<double>(exact_covering_number(ms, eps, cap));
        r.provenance = {"covering-exact-branch-and-bound"};
    } else {
        r.bound_value = static_cast<double>(greedy_covering(ms, eps).size());
        r.provenance = {"covering-greedy"};
        r.notes = {"greedy value is a one-sided upper bound on the covering number"};
    }
    r.intermediates["eps"] = eps;
    r.intermediates["points"] = static_cast<double>(ms.size());
    return r;
}

LossModel LossModel::squared() { return {[](double r) { return r * r; }, "squared"}; }

LossModel LossModel::identity() { return {[](double r) { return r; }, "identity"}; }

LossModel LossModel::power(double exponent) {
    if (!(exponent > 0.0)) throw std::invalid_argument("LossModel::power: exponent must be > 0");
    return {[exponent](double r) { return std::pow(r, exponent); },
            "power(" + std::to_string(exponent) + ")"};
}

BoundReport minimax_bound_exact_log(const LossModel& loss, double eps, double log_m,
                                    double mi_upper) {
    const double fraction = fano_fraction(mi_upper, log_m);
    const double scale = eval_phi(loss, eps / 2.0);
    BoundReport r;
    r.units = "loss";
    r.bound_value = scale * fraction;
    r.vacuous = fraction == 0.0;
    r.provenance = {"reduction-to-exact-recovery", "fano"};
    r.intermediates = {{"mi_upper", mi_upper},
                       {"log_m", log_m},
                       {"fano_fraction", fraction},
                       {"phi_half_eps", scale},
                       {"eps", eps}};
    return r;
}

BoundReport minimax_bound_exact(const LossModel& loss, double eps, std::size_t m,
                                double mi_upper) {
    if (m < 2) throw std::invalid_argument("minimax_bound_exact: need m >= 2");
    if (m == 2) {
        if (mi_upper < 0.0) throw std::invalid_argument("minimax_bound_exact: negative mi");
        const double pe = inv_binary_entropy(std::clamp(ln2 - mi_upper, 0.0, ln2));
        const double scale = eval_phi(loss, eps / 2.0);
        BoundReport r;
        r.units = "loss";
        r.bound_value = scale * pe;
        r.vacuous = pe == 0.0;
        r.provenance = {"reduction-to-exact-recovery", "fano-binary"};
        r.intermediates = {{"mi_upper", mi_upper},
                           {"pe_lower", pe},
                           {"phi_half_eps", scale},
                           {"eps", eps},
                           {"m", 2.0}};
        return r;
    }
    BoundReport r = minimax_bound_exact_log(loss, eps, std::log(static_cast<double>(m)), mi_upper);
    r.intermediates["m"] = static_cast<double>(m);
    return r;
}

BoundReport minimax_bound_approx_log(const LossModel& loss, double eps, double log_m,
                                     double log_n_max, double mi_upper) {
    if (log_n_max < 0.0) {
        throw std::invalid_argument("minimax_bound_approx: negative log n_max");
    }
    const double fraction = fano_fraction(mi_upper, log_m - log_n_max);
    const double scale = eval_phi(loss, eps / 2.0);
    BoundReport r;
    r.units = "loss";
    r.bound_value = scale * fraction;
    r.vacuous = fraction == 0.0;
    r.provenance = {"reduction-to-approximate-recovery", "fano-approximate"};
    r.intermediates = {{"mi_upper", mi_upper},
                       {"log_m", log_m},
                       {"log_n_max", log_n_max},
                       {"fano_fraction", fraction},
                       {"phi_half_eps", scale},
                       {"eps", eps}};
    return r;
}

BoundReport minimax_bound_approx(const LossModel& loss, double eps, std::size_t m,
                                 std::size_t n_max, double mi_upper) {
    if (n_max < 1 || n_max >= m) {
        throw std::invalid_argument("minimax_bound_approx: need 1 <= n_max < m");
    }
    if (m == 2) {
        // n_max is forced to 1, so this is the exact-recovery case; route it
        // through the binary form like the exact calculator does.
        BoundReport r = minimax_bound_exact(loss, eps, 2, mi_upper);
        r.intermediates["n_max"] = 1.0;
        return r;
    }
    // Computed as ln(m/n_max) in one step so the n_max = 1 case agrees with
    // the exact-recovery calculator bit for bit.
    const double log_ratio = std::log(static_cast<double>(m) / static_cast<double>(n_max));
    BoundReport r = minimax_bound_approx_log(loss, eps, log_ratio, 0.0, mi_upper);
    r.intermediates["m"] = static_cast<double>(m);
    r.intermediates["n_max"] = static_cast<double>(n_max);
    r.intermediates["log_m"] = log_ratio;
    return r;
}

BoundReport local_bound(const LossModel& loss, double eps, const LocalDivergences& div,
                        LocalVariant variant) {
    double stat = 0.0;
    std::size_t m = 0;
    std::string label;
    switch (variant) {
        case LocalVariant::aux_min:
        case LocalVariant::aux_avg: {
            if (div.to_aux.empty()) {
                throw std::invalid_argument("local_bound: empty auxiliary divergence list");
            }
            m = div.to_aux.size();
            if (variant == LocalVariant::aux_min) {
                stat = *std::min_element(div.to_aux.begin(), div.to_aux.end());
                label = "aux-min";
            } else {
                double s = 0.0;
                for (double d : div.to_aux) s += d;
                stat = s / static_cast<double>(m);
                label = "aux-avg";
            }
            break;
        }
        case LocalVariant::pairwise_avg:
        case LocalVariant::pairwise_max: {
            if (div.pairwise.empty()) {
                throw std::invalid_argument("local_bound: empty pairwise divergence table");
            }
            m = div.pairwise.size();
            double s = 0.0, mx = 0.0;
            for (const auto& row : div.pairwise) {
                if (row.size() != m) {
                    throw std::invalid_argument("local_bound: pairwise table not square");
                }
                for (double d : row) {
                    s += d;
                    mx = std::max(mx, d);
                }
            }
            if (variant == LocalVariant::pairwise_avg) {
                stat = s / static_cast<double>(m * m);
                label = "pairwise-avg";
            } else {
                stat = mx;
                label = "pairwise-max";
            }
            break;
        }
    }
    if (m < 2) throw std::invalid_argument("local_bound: need at least two hypotheses");
    BoundReport r = (m == 2)
                        ? minimax_bound_exact(loss, eps, 2, stat)
                        : minimax_bound_exact_log(loss, eps, std::log(static_cast<double>(m)), stat);
    r.provenance = {"local-divergence", label};
    r.intermediates["divergence_statistic"] = stat;
    r.intermediates["m"] = static_cast<double>(m);
    return r;
}

BoundReport global_bound(const LossModel& loss, double eps_p, double eps_c, std::size_t n,
                         double log_pack, double log_cover_kl) {
    if (!(log_pack > 0.0)) throw std::invalid_argument("global_bound: log_pack must be > 0");
    if (eps_c < 0.0 || log_cover_kl < 0.0) {
        throw std::invalid_argument("global_bound: negative covering inputs");
    }
    const double numerator = log_cover_kl + static_cast<double>(n) * eps_c + ln2;
    const double fraction = std::clamp(1.0 - numerator / log_pack, 0.0, 1.0);
    const double scale = eval_phi(loss, eps_p / 2.0);
    BoundReport r;
    r.units = "loss";
    r.bound_value = scale * fraction;
    r.vacuous = fraction == 0.0;
    r.provenance = {"global-packing-covering", "fano", "kl-covering"};
    r.intermediates = {{"eps_p", eps_p},          {"eps_c", eps_c},
                       {"n", static_cast<double>(n)}, {"log_pack", log_pack},
                       {"log_cover_kl", log_cover_kl}, {"fano_fraction", fraction},
                       {"phi_half_eps_p", scale}};
    return r;
}

BoundReport optimization_bound_log(double eps, double log_m, double mi_upper) {
    if (!(eps >= 0.0)) throw std::invalid_argument("optimization_bound: negative eps");
    const double fraction = fano_fraction(mi_upper, log_m);
    BoundReport r;
    r.units = "optimality gap";
    r.bound_value = eps * fraction;
    r.vacuous = fraction == 0.0;
    r.provenance = {"optimization-reduction", "fano"};
    r.intermediates = {{"eps", eps},
                       {"mi_upper", mi_upper},
                       {"log_m", log_m},
                       {"fano_fraction", fraction}};
    return r;
}

BoundReport optimization_bound(double eps, std::size_t m, double mi_upper) {
    if (m < 2) throw std::invalid_argument("optimization_bound: need m >= 2");
    if (m == 2) {
        if (!(eps >= 0.0)) throw std::invalid_argument("optimization_bound: negative eps");
        if (mi_upper < 0.0) throw std::invalid_argument("optimization_bound: negative mi");
        const double pe = inv_binary_entropy(std::clamp(ln2 - mi_upper, 0.0, ln2));
        BoundReport r;
        r.units = "optimality gap";
        r.bound_value = eps * pe;
        r.vacuous = pe == 0.0;
        r.provenance = {"optimization-reduction", "fano-binary"};
        r.intermediates = {{"eps", eps}, {"mi_upper", mi_upper}, {"pe_lower", pe}, {"m", 2.0}};
        return r;
    }
    BoundReport r = optimization_bound_log(eps, std::log(static_cast<double>(m)), mi_upper);
    r.intermediates["m"] = static_cast<double>(m);
    return r;
}

}  // namespace converse
