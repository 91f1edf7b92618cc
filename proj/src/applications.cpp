#include "converse/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "converse/measures.hpp"

namespace converse {

namespace {

constexpr double ln2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Ceiling with a small guard so values sitting on an integer up to rounding
// noise do not get bumped a whole step.
double guarded_ceil(double x) {
    if (x == kInf) return kInf;
    const double v = std::ceil(x - 1e-9);
    return v <= 0.0 ? 0.0 : v;
}

// numerator/denominator for sample-count chains: 0/0 -> 0, x/0 -> +inf.
double safe_ratio(double numerator, double denominator) {
    if (numerator <= 0.0) return 0.0;
    if (denominator <= 0.0) return kInf;
    return numerator / denominator;
}

void validate_delta(double delta, const char* what) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument(std::string(what) + ": delta outside [0,1]");
    }
}

}  // namespace

double gt_capacity(double eps) {
    if (!(eps >= 0.0 && eps < 0.5)) {
        throw std::invalid_argument("gt_capacity: eps must lie in [0, 1/2)");
    }
    return ln2 - binary_entropy(eps);
}

namespace {

// Information any decoder must extract to keep P[d(V,Vhat) > t] <= delta,
// for V uniform over m outcomes with ambiguity counts (n_max, n_min):
// inverting the entropy form of the approximate-recovery inequality gives
//   I >= ln m - [H2(delta) + delta ln((m - n_min)/n_max) + ln n_max],
// and the requirement vanishes once delta reaches the saturation point
// (m - n_min)/(m - n_min + n_max), where the bracket tops out at ln m.
// At delta = 0 this keeps the full ln(m/n_max) with no slack term.
double required_information(double delta, const BigInt& m, const BigInt& n_max,
                            const BigInt& n_min) {
    const BigInt outside = m - n_min;
    if (outside <= 0) return 0.0;
    const double log_outside = log_big(outside);
    const double sat = std::exp(log_outside - log_big(outside + n_max));
    if (delta >= sat) return 0.0;
    const double log_n_max = log_big(n_max);
    const double rhs = binary_entropy(delta) + delta * (log_outside - log_n_max) + log_n_max;
    return std::max(0.0, log_big(m) - rhs);
}

void validate_gt(const GroupTestingSpec& spec, bool approximate) {
    if (spec.k == 0 || spec.k > spec.p) {
        throw std::invalid_argument("group testing: need 1 <= k <= p");
    }
    if (!(spec.eps >= 0.0 && spec.eps < 0.5)) {
        throw std::invalid_argument("group testing: eps must lie in [0, 1/2)");
    }
    validate_delta(spec.delta, "group testing");
    if (approximate) {
        if (spec.list_size < spec.k || spec.list_size > spec.p) {
            throw std::invalid_argument("group testing: need k <= L <= p");
        }
        if (!(spec.alpha >= 0.0 && spec.alpha < 1.0)) {
            throw std::invalid_argument("group testing: alpha must lie in [0, 1)");
        }
    }
}

}  // namespace

BoundReport gt_exact_tests_lower(const GroupTestingSpec& spec) {
    validate_gt(spec, false);
    const double capacity = gt_capacity(spec.eps);
    const BigInt m = big_binomial(spec.p, spec.k);
    const double numerator = required_information(spec.delta, m, 1, 1);
    const double tests = guarded_ceil(safe_ratio(numerator, capacity));

    BoundReport r;
    r.units = "tests";
    r.bound_value = tests;
    r.vacuous = tests == 0.0;
    r.provenance = {"fano", "data-processing", "tensorization", "bsc-capacity"};
    r.intermediates = {{"log_m", log_big(m)},
                       {"capacity", capacity},
                       {"information_required", numerator},
                       {"pre_ceiling", safe_ratio(numerator, capacity)}};
    r.notes = {"valid for non-adaptive and adaptive designs"};
    return r;
}

BoundReport gt_approx_tests_lower(const GroupTestingSpec& spec) {
    validate_gt(spec, true);
    const double capacity = gt_capacity(spec.eps);
    const BigInt m = big_binomial(spec.p, spec.k);

    // Ambiguity count around one list: choose k-j defectives inside the list
    // and j outside, for every tolerated miss count j.
    const auto floor_ak = static_cast<std::uint64_t>(std::floor(spec.alpha * spec.k));
    BigInt n_max = 0;
    for (std::uint64_t j = 0; j <= floor_ak && j <= spec.k; ++j) {
        n_max += big_binomial(spec.p - spec.list_size, j) *
                 big_binomial(spec.list_size, spec.k - j);
    }

    BoundReport r;
    r.units = "tests";
    r.provenance = {"fano-approximate", "data-processing", "tensorization", "bsc-capacity",
                    "exact-ambiguity-count"};
    const double log_m = log_big(m);
    const double log_n_max = log_big(n_max);
    r.intermediates = {{"log_m", log_m}, {"log_n_max", log_n_max}, {"capacity", capacity}};
    if (n_max >= m) {
        r.bound_value = 0.0;
        r.vacuous = true;
        r.notes = {"ambiguity count covers the whole family; bound is vacuous"};
        return r;
    }
    // The list criterion gives every size-L list the same neighborhood, so
    // the extreme ambiguity counts coincide.
    const double numerator = required_information(spec.delta, m, n_max, n_max);
    const double tests = guarded_ceil(safe_ratio(numerator, capacity));
    r.bound_value = tests;
    r.vacuous = tests == 0.0;
    r.intermediates["information_required"] = numerator;
    r.intermediates["pre_ceiling"] = safe_ratio(numerator, capacity);
    return r;
}

namespace {

void validate_ising(const IsingSpec& spec) {
    if (spec.p < 3) throw std::invalid_argument("ising: need p >= 3");
    if (!(spec.lambda >= 0.0)) throw std::invalid_argument("ising: lambda must be >= 0");
    validate_delta(spec.delta, "ising");
}

// log of the matching-style ensemble size: C(p,2) C(p-2,2) ... down to the
// last pair, which equals p!/2^floor(p/2) for both parities.
double log_matching_ensemble(std::uint64_t p) {
    return log_big(big_factorial(p)) - static_cast<double>(p / 2) * ln2;
}

}  // namespace

BoundReport ising_exact_samples_lower(const IsingSpec& spec) {
    validate_ising(spec);
    const double p = static_cast<double>(spec.p);
    const double edge_info = spec.lambda * std::tanh(spec.lambda);

    const double log_trees = (p - 2.0) * std::log(p);
    const double n1 = safe_ratio(std::max(0.0, (1.0 - spec.delta) * log_trees - ln2), p * ln2);

    const double log_single_edge = log_binomial(spec.p, 2);
    const double n2 =
        safe_ratio(std::max(0.0, (1.0 - spec.delta) * log_single_edge - ln2), edge_info);

    const double samples = guarded_ceil(std::max(n1, n2));
    BoundReport r;
    r.units = "samples";
    r.bound_value = samples;
    r.vacuous = samples == 0.0;
    r.provenance = {"fano", "data-processing", "tensorization", "ensemble-all-trees",
                    "ensemble-single-edge"};
    r.intermediates = {{"log_tree_ensemble", log_trees},
                       {"log_single_edge_ensemble", log_single_edge},
                       {"edge_info", edge_info},
                       {"branch_trees", n1},
                       {"branch_single_edge", n2}};
    return r;
}

BoundReport ising_approx_samples_lower(const IsingSpec& spec) {
    validate_ising(spec);
    if (!(spec.alpha > 0.0 && spec.alpha < 0.5)) {
        throw std::invalid_argument("ising: alpha must lie in (0, 1/2)");
    }
    const double p = static_cast<double>(spec.p);
    const double edge_info = spec.lambda * std::tanh(spec.lambda);
    const auto floor_ap = static_cast<std::uint64_t>(std::floor(spec.alpha * p));
    const std::uint64_t pairs = spec.p * (spec.p - 1) / 2;

    // Tree ensemble: swap j edges for j others.
    BigInt n1_max = 0;
    for (std::uint64_t j = 0; j <= floor_ap; ++j) {
        n1_max += big_binomial(spec.p - 1, j) * big_binomial(pairs - spec.p + 1, j);
    }
    const double log_trees = (p - 2.0) * std::log(p);
    const double log_n1 = log_big(n1_max);
    const double b1 = safe_ratio(
        std::max(0.0, (1.0 - spec.delta) * (log_trees - log_n1) - ln2), p * ln2);

    // Isolated-edge ensemble on floor(p/2) pairs (odd p ignores one node).
    const std::uint64_t matching = spec.p / 2;
    BigInt n2_max = 0;
    for (std::uint64_t j = 0; j <= floor_ap; ++j) {
        n2_max += big_binomial(matching, j) * big_binomial(pairs - matching, j);
    }
    const double log_g2a = log_matching_ensemble(spec.p);
    const double log_n2 = log_big(n2_max);
    const double b2 = safe_ratio(std::max(0.0, (1.0 - spec.delta) * (log_g2a - log_n2) - ln2),
                                 static_cast<double>(matching) * edge_info);

    const double samples = guarded_ceil(std::max(b1, b2));
    BoundReport r;
    r.units = "samples";
    r.bound_value = samples;
    r.vacuous = samples == 0.0;
    r.provenance = {"fano-approximate", "data-processing", "tensorization",
                    "ensemble-all-trees", "ensemble-isolated-edges", "exact-ambiguity-count"};
    r.intermediates = {{"log_tree_ensemble", log_trees},
                       {"log_n_max_trees", log_n1},
                       {"log_matching_ensemble", log_g2a},
                       {"log_n_max_matching", log_n2},
                       {"edge_info", edge_info},
                       {"branch_trees", b1},
                       {"branch_matching", b2}};
    return r;
}

BoundReport ising_adaptive_nodes_lower(const IsingSpec& spec) {
    validate_ising(spec);
    const double p = static_cast<double>(spec.p);
    const double edge_info = spec.lambda * std::tanh(spec.lambda);

    const double log_trees = (p - 2.0) * std::log(p);
    const double b1 = safe_ratio(std::max(0.0, (1.0 - spec.delta) * log_trees - ln2), ln2);

    const double log_g2a = log_matching_ensemble(spec.p);
    const double b2 =
        safe_ratio(std::max(0.0, (1.0 - spec.delta) * log_g2a - ln2), 0.5 * edge_info);

    const double nodes = guarded_ceil(std::max(b1, b2));
    BoundReport r;
    r.units = "node observations";
    r.bound_value = nodes;
    r.vacuous = nodes == 0.0;
    r.provenance = {"fano", "adaptive-tensorization", "ensemble-all-trees",
                    "ensemble-isolated-edges"};
    r.intermediates = {{"log_tree_ensemble", log_trees},
                       {"log_matching_ensemble", log_g2a},
                       {"edge_info", edge_info},
                       {"branch_trees", b1},
                       {"branch_matching", b2}};
    return r;
}

BoundReport erdos_renyi_samples_lower(std::uint64_t p, double q, double delta) {
    if (p < 2) throw std::invalid_argument("erdos_renyi: need p >= 2");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("erdos_renyi: q must lie in (0,1)");
    validate_delta(delta, "erdos_renyi");
    const double pre = static_cast<double>(p) * binary_entropy(q) / (2.0 * ln2) * (1.0 - delta);
    BoundReport r;
    r.units = "samples";
    r.bound_value = guarded_ceil(pre);
    r.vacuous = r.bound_value == 0.0;
    r.asymptotic_only = true;
    r.provenance = {"conditional-fano", "typical-set"};
    r.intermediates = {{"pre_ceiling", pre}, {"edge_entropy", binary_entropy(q)}};
    r.notes = {"asymptotic display form, vanishing terms dropped"};
    return r;
}

IsingEdgeStats ising_single_edge_stats(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("ising_single_edge_stats: negative lambda");
    const double t = std::tanh(lambda);
    return {t, lambda * t};
}

BoundReport sparse_minimax_risk_lower(const SparseRegressionSpec& spec) {
    if (spec.k == 0 || spec.k >= spec.p) {
        throw std::invalid_argument("sparse regression: need 1 <= k < p");
    }
    if (!(spec.sigma > 0.0) || !(spec.frob_sq > 0.0)) {
        throw std::invalid_argument("sparse regression: sigma and frob_sq must be positive");
    }
    const double p = static_cast<double>(spec.p), k = static_cast<double>(spec.k);
    const double sigma_sq = spec.sigma * spec.sigma;
    const double log_pk = std::log(p / k);

    const BigInt family = big_pow2(spec.k) * big_binomial(spec.p, spec.k);
    const auto half_k = static_cast<std::uint64_t>((spec.k + 1) / 2);  // ceil(k/2)
    BigInt n_max = 0;
    for (std::uint64_t j = 0; j <= half_k; ++j) {
        n_max += big_pow2(j) * big_binomial(spec.p, j);
    }

    const double eps_prime_sq = sigma_sq * p * log_pk / (2.0 * spec.frob_sq);
    // E[||X V||^2] = (k/p) ||X||_F^2 because the sign patterns have
    // covariance (k/p) I.
    const double mi_upper = eps_prime_sq / (2.0 * sigma_sq) * (k / p) * spec.frob_sq;
    const double headline = sigma_sq * k * p * log_pk / (32.0 * spec.frob_sq);

    BoundReport r;
    if (n_max >= family) {
        r.units = "risk (squared l2)";
        r.bound_value = 0.0;
        r.vacuous = true;
        r.provenance = {"reduction-to-approximate-recovery", "fano-approximate"};
        r.intermediates = {{"log_family", log_big(family)}, {"log_n_max", log_big(n_max)}};
        r.notes = {"ambiguity count covers the whole family; bound is vacuous"};
        return r;
    }
    const double eps = std::sqrt(eps_prime_sq) * std::sqrt(k / 2.0);
    r = minimax_bound_approx_log(LossModel::squared(), eps, log_big(family), log_big(n_max),
                                 mi_upper);
    r.units = "risk (squared l2)";
    r.provenance = {"reduction-to-approximate-recovery", "fano-approximate", "tensorization",
                    "gaussian-kl", "exact-ambiguity-count"};
    r.intermediates["eps_prime_sq"] = eps_prime_sq;
    r.intermediates["headline_asymptotic"] = headline;
    r.notes.push_back("headline constant-32 value is the asymptotic display form");
    if (spec.delta > 0.0 && spec.n > 0) {
        // Sample-count form under the power budget frob_sq = n * p * Gamma.
        const double gamma = spec.frob_sq / (static_cast<double>(spec.n) * p);
        r.intermediates["gamma"] = gamma;
        r.intermediates["n_lower_asymptotic"] =
            sigma_sq * k * log_pk / (32.0 * spec.delta * gamma);
    }
    return r;
}

SparsePackingFamily sparse_packing_family(std::uint64_t p, std::uint64_t k, double eps_prime,
                                          std::uint64_t materialize_cap) {
    if (k == 0 || k > p) throw std::invalid_argument("sparse_packing_family: need 1 <= k <= p");
    if (!(eps_prime > 0.0)) {
        throw std::invalid_argument("sparse_packing_family: eps_prime must be positive");
    }
    SparsePackingFamily fam;
    fam.eps_prime = eps_prime;
    fam.family_size = big_pow2(k) * big_binomial(p, k);
    fam.threshold = static_cast<double>(k) / 2.0;
    const auto half_k = static_cast<std::uint64_t>((k + 1) / 2);
    fam.n_max = 0;
    for (std::uint64_t j = 0; j <= half_k; ++j) {
        fam.n_max += big_pow2(j) * big_binomial(p, j);
    }
    fam.log_family_size = log_big(fam.family_size);
    fam.log_n_max = log_big(fam.n_max);

    if (p <= materialize_cap) {
        // All sign patterns with exactly k nonzero entries.
        std::vector<std::size_t> support(k);
        auto emit_signs = [&](auto&& self, std::size_t pos, std::vector<int>& v) -> void {
            if (pos == k) {
                fam.vectors.push_back(v);
                return;
            }
            for (int s : {-1, +1}) {
                v[support[pos]] = s;
                self(self, pos + 1, v);
            }
            v[support[pos]] = 0;
        };
        auto choose = [&](auto&& self, std::size_t next, std::size_t depth) -> void {
            if (depth == k) {
                std::vector<int> v(p, 0);
                emit_signs(emit_signs, 0, v);
                return;
            }
            for (std::size_t i = next; i < p; ++i) {
                support[depth] = i;
                self(self, i + 1, depth + 1);
            }
        };
        choose(choose, 0, 0);
    }
    return fam;
}

BoundReport density_minimax_risk_lower(const DensitySpec& spec) {
    if (!(spec.eta > 0.0 && spec.eta < 1.0)) {
        throw std::invalid_argument("density: eta must lie in (0,1)");
    }
    if (!(spec.c_lo > 0.0) || !(spec.c_hi >= spec.c_lo)) {
        throw std::invalid_argument("density: need 0 < c_lo <= c_hi");
    }
    if (spec.n == 0) throw std::invalid_argument("density: need n >= 1");
    const double n = static_cast<double>(spec.n);

    // Radius choices that balance the covering and sampling terms, then pin
    // the fraction at one half.
    const double c_prime = spec.c_hi / std::sqrt(spec.eta);
    const double eps_c = std::pow(c_prime / n, 2.0 / 3.0);
    const double cover_term = spec.c_hi / std::sqrt(spec.eta * eps_c);
    const double sample_term = n * eps_c;
    if (std::abs(cover_term - sample_term) >
        1e-9 * std::max({1.0, cover_term, sample_term})) {
        throw std::logic_error("density: covering/sampling balance failed");
    }
    const double eps_p_inv =
        (2.0 / spec.c_lo) * (2.0 * std::pow(c_prime, 2.0 / 3.0) * std::cbrt(n) + ln2);
    const double eps_p = 1.0 / eps_p_inv;
    const double log_pack = spec.c_lo * eps_p_inv;  // packing-entropy lower bound at eps_p

    BoundReport r = global_bound(LossModel::squared(), eps_p, eps_c, spec.n, log_pack, cover_term);
    if (std::abs(r.intermediates.at("fano_fraction") - 0.5) > 1e-9) {
        throw std::logic_error("density: fraction did not balance to one half");
    }
    r.units = "risk (squared L2)";
    r.provenance = {"global-packing-covering", "kl-covering", "chi2-l2-chain"};
    r.intermediates["c_prime"] = c_prime;
    r.intermediates["cover_term"] = cover_term;
    r.intermediates["sample_term"] = sample_term;
    r.notes.push_back(
        "packing term uses the lower packing-entropy constant c_lo in the denominator");
    return r;
}

PiecewiseDensity::PiecewiseDensity(std::vector<double> values) : values(std::move(values)) {
    if (this->values.empty()) throw std::invalid_argument("PiecewiseDensity: no bins");
    double total = 0.0;
    for (double v : this->values) {
        if (!(v >= 0.0)) throw std::invalid_argument("PiecewiseDensity: negative value");
        total += v;
    }
    total /= static_cast<double>(this->values.size());
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("PiecewiseDensity: does not integrate to 1");
    }
}

DivergenceChain density_divergence_chain(const PiecewiseDensity& f1, const PiecewiseDensity& f2,
                                         double eta) {
    if (f1.values.size() != f2.values.size()) {
        throw std::invalid_argument("density_divergence_chain: grids differ");
    }
    if (!(eta > 0.0)) throw std::invalid_argument("density_divergence_chain: eta must be > 0");
    const double w = 1.0 / static_cast<double>(f1.values.size());
    DivergenceChain out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < f1.values.size(); ++i) {
        const double a = f1.values[i], b = f2.values[i];
        if (b < eta) {
            throw std::invalid_argument("density_divergence_chain: second density below floor");
        }
        if (a > 0.0) out.kl += w * a * std::log(a / b);
        const double d = a - b;
        out.chi2 += w * d * d / b;
        out.l2_sq += w * d * d;
    }
    out.kl = std::max(out.kl, 0.0);
    if (out.kl > out.chi2 + 1e-12 || out.chi2 > out.l2_sq / eta + 1e-12) {
        throw std::logic_error("density_divergence_chain: divergence chain violated");
    }
    return out;
}

BoundReport scvx_queries_lower(const ConvexOptSpec& spec) {
    if (!(spec.sigma > 0.0)) throw std::invalid_argument("convex opt: sigma must be > 0");
    if (!(spec.delta > 0.0)) throw std::invalid_argument("convex opt: delta must be > 0");
    const double sigma_sq = spec.sigma * spec.sigma;
    const double eps = 10.0 * spec.delta;
    const double pre = sigma_sq * ln2 / (40.0 * spec.delta);
    BoundReport r;
    r.units = "queries";
    r.bound_value = guarded_ceil(pre);
    r.vacuous = r.bound_value == 0.0;
    r.provenance = {"optimization-reduction", "fano-binary", "adaptive-tensorization",
                    "gaussian-kl"};
    r.intermediates = {{"pre_ceiling", pre},
                       {"eps", eps},
                       {"query_threshold", sigma_sq * ln2 / (4.0 * eps)}};
    return r;
}

ScvxConstruction scvx_construction(double eps_prime) {
    if (!(eps_prime > 0.0 && eps_prime < 0.125)) {
        throw std::invalid_argument(
            "scvx_construction: eps_prime must lie in (0, 1/8) so both minimizers stay in (0,1)");
    }
    ScvxConstruction c{};
    c.eps_prime = eps_prime;
    const double shift = std::sqrt(2.0 * eps_prime);
    c.x_star_1 = 0.5 - shift;
    c.x_star_2 = 0.5 + shift;
    return c;
}

double ScvxConstruction::value(int v, double x) const {
    const double center = v == 0 ? 0.5 : (v == 1 ? x_star_1 : x_star_2);
    if (v < 0 || v > 2) throw std::invalid_argument("ScvxConstruction: v must be 0, 1 or 2");
    const double d = x - center;
    return 0.5 * d * d;
}

double ScvxConstruction::derivative(int v, double x) const {
    const double center = v == 0 ? 0.5 : (v == 1 ? x_star_1 : x_star_2);
    if (v < 0 || v > 2) throw std::invalid_argument("ScvxConstruction: v must be 0, 1 or 2");
    return x - center;
}

double scvx_per_query_kl(double eps_prime, double sigma, double x, int v) {
    if (!(sigma > 0.0)) throw std::invalid_argument("scvx_per_query_kl: sigma must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("scvx_per_query_kl: x outside [0,1]");
    if (v != 1 && v != 2) throw std::invalid_argument("scvx_per_query_kl: v must be 1 or 2");
    const ScvxConstruction c = scvx_construction(eps_prime);
    const double dv = c.value(v, x) - c.value(0, x);
    const double dd = c.derivative(v, x) - c.derivative(0, x);
    return (dv * dv + dd * dd) / (2.0 * sigma * sigma);
}

double scvx_risk_lower(std::uint64_t n, double sigma, double eps, double eps_prime) {
    if (!(sigma > 0.0)) throw std::invalid_argument("scvx_risk_lower: sigma must be > 0");
    if (!(eps > 0.0 && eps < eps_prime && eps_prime < 0.125)) {
        throw std::invalid_argument("scvx_risk_lower: need 0 < eps < eps_prime < 1/8");
    }
    const double mi = 2.0 * static_cast<double>(n) * eps_prime / (sigma * sigma);
    return eps * inv_binary_entropy(std::clamp(ln2 - mi, 0.0, ln2));
}

}  // namespace converse
