#include "converse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "converse/applications.hpp"
#include "converse/fano.hpp"
#include "converse/generators.hpp"
#include "converse/measures.hpp"
#include "converse/mi_bounds.hpp"
#include "converse/oracle.hpp"
#include "converse/reductions.hpp"
#include "converse/rng.hpp"

namespace converse {

namespace {

using nlohmann::json;

constexpr double ln2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
    const VerifyOptions& opt;
    SuiteReport report;

    void check(bool ok, const std::string& name, json instance) {
        ++report.checks;
        if (!ok) report.failures.push_back({name, std::move(instance)});
    }
};

json instance_tag(std::uint64_t seed, std::uint64_t trial) {
    return json{{"seed", seed}, {"trial", trial}};
}

// ---------------------------------------------------------------------------
// fano: soundness of every error-probability bound against the exact
// Bayes-optimal decoder, plus entropy-form dominance over all decoders.
// ---------------------------------------------------------------------------

void fano_soundness(Ctx& c) {
    const auto& opt = c.opt;
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        TrialRng rng(opt.seed, t);
        const std::size_t nv = 2 + rng.next_below(7);  // 2..8
        const std::size_t ny = 2 + rng.next_below(7);
        const FinitePMF prior = FinitePMF::uniform(nv);
        const ChannelMatrix ch = random_channel(rng, nv, ny);
        const double mi = mutual_information(JointPMF::from_prior_channel(prior, ch));
        const double pe = bayes_optimal_error(prior, ch);

        json inst = instance_tag(opt.seed, t);
        inst["nv"] = nv;
        inst["ny"] = ny;
        if (nv == 2) {
            c.check(pe >= fano_pe_lower_binary(mi) - opt.tolerance, "fano/binary-soundness", inst);
        } else {
            c.check(pe >= fano_pe_lower(mi, nv) - opt.tolerance, "fano/exact-soundness", inst);
        }

        // Approximate recovery with a random criterion into its own alphabet.
        const std::size_t nvhat = 2 + rng.next_below(7);
        const RecoveryCriterion rc = random_criterion(rng, nv, nvhat, 0.05, 0.6);
        const auto counts = neighborhood_counts(rc);
        if (counts.n_max >= 1 && counts.n_max < nv) {
            const double pe_t = bayes_optimal_approx_error(prior, ch, rc);
            c.check(pe_t >= approx_fano_pe_lower(mi, nv, counts.n_max) - opt.tolerance,
                    "fano/approximate-soundness", inst);
        }

        // Reduction consistency: the equality criterion at threshold zero
        // reproduces the exact-recovery bound bit for bit.
        const auto eq_counts = neighborhood_counts(RecoveryCriterion::equality(nv));
        if (nv >= 3) {
            c.check(approx_fano_pe_lower(mi, nv, eq_counts.n_max) == fano_pe_lower(mi, nv),
                    "fano/reduction-consistency", inst);
        }
    }
}

void fano_entropy_dominance(Ctx& c) {
    const std::uint64_t rounds = std::max<std::uint64_t>(1, c.opt.trials / 5);
    for (std::uint64_t t = 0; t < rounds; ++t) {
        TrialRng rng(c.opt.seed ^ 0x5eedULL, t);
        const std::size_t nv = 3, ny = 3;
        const FinitePMF prior = random_pmf(rng, nv);
        const ChannelMatrix ch = random_channel(rng, nv, ny);
        const RecoveryCriterion rc = random_criterion(rng, nv, nv, 0.1, 0.9);
        const auto counts = neighborhood_counts(rc);
        const JointPMF joint = JointPMF::from_prior_channel(prior, ch);

        // All |Vhat|^|Y| = 27 deterministic decoders.
        for (std::size_t code = 0; code < 27; ++code) {
            std::vector<std::size_t> dec(ny);
            std::size_t rem = code;
            for (std::size_t y = 0; y < ny; ++y) {
                dec[y] = rem % nv;
                rem /= nv;
            }
            std::vector<double> pair(nv * nv, 0.0);
            for (std::size_t v = 0; v < nv; ++v)
                for (std::size_t y = 0; y < ny; ++y) pair[v * nv + dec[y]] += joint.at(v, y);
            const JointPMF vvhat = normalized_joint(nv, nv, std::move(pair));
            const double cond_ent = entropy(vvhat.flatten()) - entropy(vvhat.col_marginal());

            double pe = 0.0, pe_t = 0.0;
            for (std::size_t v = 0; v < nv; ++v) {
                for (std::size_t w = 0; w < nv; ++w) {
                    if (v != w) pe += vvhat.at(v, w);
                    if (rc.at(v, w) > rc.threshold) pe_t += vvhat.at(v, w);
                }
            }
            pe = std::clamp(pe, 0.0, 1.0);
            pe_t = std::clamp(pe_t, 0.0, 1.0);
            json inst = instance_tag(c.opt.seed ^ 0x5eedULL, t);
            inst["decoder"] = code;
            c.check(cond_ent <= fano_entropy_rhs(pe, nv) + 1e-12, "fano/entropy-rhs-dominance",
                    inst);
            if (counts.n_max >= 1) {
                c.check(cond_ent <= approx_fano_entropy_rhs(pe_t, nv, counts.n_max,
                                                            counts.n_min) +
                                        1e-12,
                        "fano/approx-entropy-rhs-dominance", inst);
            }
        }
    }
}

void fano_conditional(Ctx& c) {
    const std::uint64_t rounds = std::max<std::uint64_t>(1, c.opt.trials / 10);
    for (std::uint64_t t = 0; t < rounds; ++t) {
        TrialRng rng(c.opt.seed ^ 0xb10cULL, t);
        // Two blocks of hypotheses (sizes >= 3), a random block weight, one
        // shared channel; the estimator is the exact MAP rule on y.
        const std::size_t m1 = 3 + rng.next_below(3);
        const std::size_t m2 = 3 + rng.next_below(3);
        const std::size_t nv = m1 + m2, ny = 2 + rng.next_below(5);
        const double w1 = 0.2 + 0.6 * rng.next_double();
        std::vector<double> prior_mass(nv);
        for (std::size_t v = 0; v < nv; ++v) {
            prior_mass[v] = v < m1 ? w1 / static_cast<double>(m1)
                                   : (1.0 - w1) / static_cast<double>(m2);
        }
        const FinitePMF prior = normalized_pmf(std::move(prior_mass));
        const ChannelMatrix ch = random_channel(rng, nv, ny);

        std::vector<std::size_t> dec(ny);
        for (std::size_t y = 0; y < ny; ++y) {
            double best = -1.0;
            for (std::size_t v = 0; v < nv; ++v) {
                if (prior[v] * ch.at(v, y) > best) {
                    best = prior[v] * ch.at(v, y);
                    dec[y] = v;
                }
            }
        }

        double pe = 0.0;
        std::vector<ConditionalFanoEntry> entries;
        for (int block = 0; block < 2; ++block) {
            const std::size_t lo = block == 0 ? 0 : m1;
            const std::size_t hi = block == 0 ? m1 : nv;
            const double weight = block == 0 ? w1 : 1.0 - w1;
            // Joint over (v, vhat) conditioned on this block.
            const std::size_t mb = hi - lo;
            std::vector<double> pair(mb * nv, 0.0);
            for (std::size_t v = lo; v < hi; ++v) {
                for (std::size_t y = 0; y < ny; ++y) {
                    pair[(v - lo) * nv + dec[y]] += ch.at(v, y) / static_cast<double>(mb);
                }
            }
            const JointPMF vvhat = normalized_joint(mb, nv, std::move(pair));
            const double cond_ent = entropy(vvhat.flatten()) - entropy(vvhat.col_marginal());
            entries.push_back({weight, cond_ent, mb});
            for (std::size_t v = lo; v < hi; ++v) {
                for (std::size_t y = 0; y < ny; ++y) {
                    if (dec[y] != v) pe += prior[v] * ch.at(v, y);
                }
            }
        }
        pe = std::clamp(pe, 0.0, 1.0);
        json inst = instance_tag(c.opt.seed ^ 0xb10cULL, t);
        inst["m1"] = m1;
        inst["m2"] = m2;
        c.check(pe >= conditional_fano_pe_lower(entries) - c.opt.tolerance,
                "fano/conditional-soundness", inst);
    }
}

void suite_fano(Ctx& c) {
    fano_soundness(c);
    fano_entropy_dominance(c);
    fano_conditional(c);
}

// ---------------------------------------------------------------------------
// divergences: the divergence-relation lattice, event-level data processing,
// entropy range, chain rule, and the Gaussian closed form vs quadrature.
// ---------------------------------------------------------------------------

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 40);
}

void suite_divergences(Ctx& c) {
    const auto& opt = c.opt;
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        TrialRng rng(opt.seed, t);
        const std::size_t n = 2 + rng.next_below(15);  // 2..16
        const FinitePMF p = rng.next_double() < 0.3 ? random_pmf_with_zeros(rng, n, 0.3)
                                                    : random_pmf(rng, n);
        const FinitePMF q = random_pmf(rng, n);  // strictly positive
        const double kl = kl_divergence(p, q);
        const double tv = tv_distance(p, q);
        const double h2 = hellinger_sq(p, q);
        const double x2 = chi_sq(p, q);
        json inst = instance_tag(opt.seed, t);
        inst["n"] = n;

        c.check(kl >= 2.0 * tv * tv - 1e-12, "divergences/pinsker", inst);
        double eta = 1.0;
        for (std::size_t i = 0; i < n; ++i) eta = std::min(eta, q[i]);
        c.check(kl <= 2.0 / eta * tv * tv + 1e-12, "divergences/reverse-pinsker", inst);
        const double h = std::sqrt(h2);
        c.check(0.5 * h2 <= tv + 1e-12 && tv <= h * std::sqrt(1.0 - h2 / 4.0) + 1e-12,
                "divergences/hellinger-tv-sandwich", inst);
        c.check(kl <= std::log1p(x2) + 1e-12 && std::log1p(x2) <= x2 + 1e-12,
                "divergences/kl-chi2", inst);
        c.check(tv >= 0.0 && tv <= 1.0 + 1e-12 && h2 >= 0.0 && h2 <= 2.0 + 1e-12 && kl >= 0.0,
                "divergences/ranges", inst);

        // Entropy range with the extremes.
        const FinitePMF r = random_pmf_with_zeros(rng, n, 0.2);
        c.check(entropy(r) >= 0.0 &&
                    entropy(r) <= std::log(static_cast<double>(n)) + 1e-12,
                "divergences/entropy-range", inst);

        // Event-level data processing: any event over the cells of a joint.
        const std::size_t cells = 2 + rng.next_below(11);
        const FinitePMF jp = random_pmf(rng, cells);
        const FinitePMF jq = random_pmf(rng, cells);
        // Nonempty proper event; the extremes are exact ties that rounding
        // would turn into spurious support violations.
        const std::uint64_t mask = 1 + rng.next_below((std::uint64_t{1} << cells) - 2);
        double pe = 0.0, qe = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                pe += jp[i];
                qe += jq[i];
            }
        }
        pe = std::clamp(pe, 0.0, 1.0);
        qe = std::clamp(qe, 0.0, 1.0);
        c.check(binary_kl(pe, qe) <= kl_divergence(jp, jq) + 1e-12,
                "divergences/event-data-processing", inst);
    }

    // Entropy chain rule on three-way joints: H(A,B,C) = H(A) + H(B|A) + H(C|A,B).
    for (std::uint64_t t = 0; t < std::max<std::uint64_t>(1, opt.trials / 10); ++t) {
        TrialRng rng(opt.seed ^ 0xc4a1ULL, t);
        const std::size_t na = 2 + rng.next_below(3), nb = 2 + rng.next_below(3),
                          nc = 2 + rng.next_below(3);
        const Joint3PMF j3 = random_joint3(rng, na, nb, nc);
        const double h_all = entropy(j3.flatten());
        double h_a = 0.0, h_b_given_a = 0.0, h_c_given_ab = 0.0;
        std::vector<double> pa(na, 0.0);
        std::vector<double> pab(na * nb, 0.0);
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t x = 0; x < nc; ++x) {
                    pa[a] += j3.at(a, b, x);
                    pab[a * nb + b] += j3.at(a, b, x);
                }
        for (std::size_t a = 0; a < na; ++a) {
            if (pa[a] > 0.0) h_a -= pa[a] * std::log(pa[a]);
            for (std::size_t b = 0; b < nb; ++b) {
                const double w = pab[a * nb + b];
                if (w > 0.0) h_b_given_a -= w * std::log(w / pa[a]);
                for (std::size_t x = 0; x < nc; ++x) {
                    const double z = j3.at(a, b, x);
                    if (z > 0.0) h_c_given_ab -= z * std::log(z / w);
                }
            }
        }
        c.check(std::abs(h_all - (h_a + h_b_given_a + h_c_given_ab)) <= 1e-12,
                "divergences/entropy-chain-rule", instance_tag(opt.seed ^ 0xc4a1ULL, t));
    }

    // Gaussian closed form against adaptive quadrature of the KL integrand.
    for (double mean_gap : {0.3, 1.0, 2.5}) {
        for (double var : {0.5, 1.0, 2.0}) {
            const GaussianScalar a(0.0, var), b(mean_gap, var);
            const double closed = gaussian_kl(a, b);
            const double sd = std::sqrt(var);
            auto integrand = [&](double x) {
                const double pa = std::exp(-x * x / (2.0 * var));
                const double diff = x - mean_gap;
                const double log_ratio = (diff * diff - x * x) / (2.0 * var);
                return pa / (sd * std::sqrt(2.0 * std::numbers::pi)) * log_ratio;
            };
            const double numeric = integrate(integrand, -10.0 * sd, mean_gap + 10.0 * sd, 1e-10);
            c.check(std::abs(closed - numeric) <= 1e-6, "divergences/gaussian-kl-quadrature",
                    json{{"mean_gap", mean_gap}, {"variance", var}});
        }
    }

    // Inverse binary entropy round trip on a grid.
    for (int i = 0; i <= 1000; ++i) {
        const double a = 0.5 * static_cast<double>(i) / 1000.0;
        const double back = inv_binary_entropy(binary_entropy(a));
        c.check(std::abs(back - a) <= 1e-10, "divergences/inv-binary-entropy-roundtrip",
                json{{"a", a}});
    }
}

// ---------------------------------------------------------------------------
// tensorization: product/adaptive enumeration, divergence-based bounds,
// covering, and the data processing inequality.
// ---------------------------------------------------------------------------

void suite_tensorization(Ctx& c) {
    const auto& opt = c.opt;
    const std::uint64_t rounds = std::max<std::uint64_t>(1, opt.trials / 4);
    for (std::uint64_t t = 0; t < rounds; ++t) {
        TrialRng rng(opt.seed, t);
        json inst = instance_tag(opt.seed, t);

        // Product models, fully enumerated.
        const std::size_t nv = 2 + rng.next_below(3);
        const std::size_t n = 1 + rng.next_below(3);
        std::vector<ChannelMatrix> channels;
        for (std::size_t i = 0; i < n; ++i) {
            channels.push_back(random_channel(rng, nv, 2 + rng.next_below(3)));
        }
        const FinitePMF prior = random_pmf(rng, nv);
        const auto tb = tensorization_upper(ProductModel(channels), prior);
        c.check(tb.verified && tb.exact_joint_mi <= tb.per_sample_sum + 1e-12,
                "tensorization/product-domination", inst);

        // Adaptive trees: binary inputs and samples, horizon 2, policy
        // branching on the first sample.
        AdaptivePolicyTree tree;
        tree.horizon = 2;
        tree.x_size = 2;
        tree.y_size = 2;
        tree.sample_channels.resize(2);
        for (std::size_t v = 0; v < 2; ++v) {
            for (std::size_t x = 0; x < 2; ++x) {
                const double a = 0.05 + 0.9 * rng.next_double();
                tree.sample_channels[v].push_back(FinitePMF({a, 1.0 - a}));
            }
        }
        const std::size_t first = rng.next_below(2);
        tree.policy = [first](const std::vector<std::pair<std::size_t, std::size_t>>& h) {
            if (h.empty()) return first;
            return h.back().second;  // play the last sample as the next input
        };
        const auto ab = adaptive_tensorization_upper(tree, FinitePMF::uniform(2));
        c.check(ab.exact_joint_mi <= ab.per_step_sum + 1e-12, "tensorization/adaptive-domination",
                inst);

        // Divergence-based information bounds and their ordering.
        const HypothesisFamily fam(random_pmf(rng, nv), random_channel(rng, nv, 2 + rng.next_below(5)));
        const double mi = fam.exact_mi();
        const FinitePMF marginal = fam.joint().col_marginal();
        const auto at_marginal = mi_upper_aux(fam, marginal);
        c.check(std::abs(at_marginal.avg - mi) <= 1e-12, "tensorization/aux-equality-at-marginal",
                inst);
        const FinitePMF q = random_pmf(rng, fam.channel.output_size());
        const auto aux = mi_upper_aux(fam, q);
        c.check(mi <= aux.avg + 1e-12 && aux.avg <= aux.max + 1e-12,
                "tensorization/aux-ordering", inst);
        const auto pw = mi_upper_pairwise(fam);
        c.check(mi <= pw.avg + 1e-12 && pw.avg <= pw.max + 1e-12,
                "tensorization/pairwise-ordering", inst);

        // Covering bound with self-covering centers.
        std::vector<FinitePMF> centers;
        for (std::size_t v = 0; v < fam.prior.size(); ++v) centers.push_back(fam.channel.row(v));
        c.check(mi_upper_covering(fam, centers, 0.0) >= mi - 1e-12,
                "tensorization/covering-dominates", inst);
        // A random center at radius zero violates the covering condition
        // unless it happens to equal every row.
        bool detected = false;
        try {
            mi_upper_covering(fam, {q}, 0.0);
            detected = aux.max <= 1e-12;
        } catch (const std::invalid_argument&) {
            detected = true;
        }
        c.check(detected, "tensorization/covering-violation-detected", inst);

        // Data processing chain.
        const std::size_t ny = 2 + rng.next_below(5), nw = 2 + rng.next_below(5);
        const auto chain = dpi_check(random_pmf(rng, nv), random_channel(rng, nv, ny),
                                     random_channel(rng, ny, nw));
        c.check(chain.holds, "tensorization/dpi", inst);
    }

    // OR-reduced group testing step: information through the pooled bit
    // dominates the conditional information, per sample.
    for (std::uint64_t t = 0; t < std::max<std::uint64_t>(1, opt.trials / 20); ++t) {
        TrialRng rng(opt.seed ^ 0x0eedULL, t);
        const std::size_t p = 4;
        const double nu = 0.2 + 0.6 * rng.next_double();
        const double eps = 0.05 + 0.3 * rng.next_double();
        const std::size_t n_designs = 16;  // all binary rows over 4 items
        // P(x) iid Bernoulli(nu); S uniform over singletons.
        std::vector<double> px(n_designs);
        for (std::size_t x = 0; x < n_designs; ++x) {
            double prob = 1.0;
            for (std::size_t j = 0; j < p; ++j) {
                prob *= (x >> j) & 1 ? nu : 1.0 - nu;
            }
            px[x] = prob;
        }
        // Joint over (S, Y, X) and the pooled-bit pair (U, Y).
        std::vector<double> j3(p * 2 * n_designs, 0.0);
        std::vector<double> uy(2 * 2, 0.0);
        for (std::size_t s = 0; s < p; ++s) {
            for (std::size_t x = 0; x < n_designs; ++x) {
                const int u = (x >> s) & 1;
                for (int y = 0; y < 2; ++y) {
                    const double flip = y == u ? 1.0 - eps : eps;
                    const double mass = (1.0 / static_cast<double>(p)) * px[x] * flip;
                    j3[(s * 2 + y) * n_designs + x] += mass;
                    uy[u * 2 + y] += mass;
                }
            }
        }
        const double cond = conditional_mutual_information(normalized_joint3(p, 2, n_designs, j3));
        const double pooled = mutual_information(normalized_joint(2, 2, uy));
        c.check(pooled >= cond - 1e-12, "tensorization/or-reduction-dominates",
                instance_tag(opt.seed ^ 0x0eedULL, t));
    }
}

// ---------------------------------------------------------------------------
// packing: exact solvers against subset enumeration, the sandwich between
// packing and covering numbers, and greedy one-sidedness.
// ---------------------------------------------------------------------------

struct ExhaustiveNumbers {
    std::size_t packing;
    std::size_t covering;
};

ExhaustiveNumbers exhaustive_numbers(const MetricPointSet& ms, double eps) {
    const std::size_t n = ms.size();
    std::vector<std::uint32_t> conflict(n, 0), covers(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && ms.dist(i, j) < eps) conflict[i] |= 1u << j;
            if (ms.dist(i, j) <= eps) covers[i] |= 1u << j;  // center i covers j
        }
    }
    std::size_t best_pack = 0;
    std::size_t best_cover = n;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        bool packing_ok = true;
        std::uint32_t covered = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (s & (1u << i)) {
                if (conflict[i] & s) packing_ok = false;
                covered |= covers[i];
            }
        }
        const auto size = static_cast<std::size_t>(std::popcount(s));
        if (packing_ok) best_pack = std::max(best_pack, size);
        if (covered == (1u << n) - 1) best_cover = std::min(best_cover, size);
    }
    return {best_pack, best_cover};
}

bool tie_free(const MetricPointSet& ms, double eps) {
    for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
            const double d = ms.dist(i, j);
            if (std::abs(d - eps) < 1e-9 || std::abs(d - 2.0 * eps) < 1e-9) return false;
        }
    }
    return true;
}

void suite_packing(Ctx& c) {
    const auto& opt = c.opt;
    const std::uint64_t rounds = std::max<std::uint64_t>(1, opt.trials / 5);
    std::uint64_t produced = 0;
    for (std::uint64_t attempt = 0; produced < rounds && attempt < rounds * 20; ++attempt) {
        TrialRng rng(opt.seed, attempt);
        const auto ms = MetricPointSet::from_planar_points(random_planar_points(rng, 12));
        const double eps = 0.15 + 0.25 * rng.next_double();
        if (!tie_free(ms, eps)) continue;
        ++produced;
        json inst = instance_tag(opt.seed, attempt);
        inst["eps"] = eps;

        const auto oracle_e = exhaustive_numbers(ms, eps);
        const auto oracle_2e = exhaustive_numbers(ms, 2.0 * eps);
        const std::size_t pack_e = exact_packing_number(ms, eps);
        const std::size_t pack_2e = exact_packing_number(ms, 2.0 * eps);
        const std::size_t cover_e = exact_covering_number(ms, eps);
        c.check(pack_e == oracle_e.packing && pack_2e == oracle_2e.packing,
                "packing/exact-matches-enumeration", inst);
        c.check(cover_e == oracle_e.covering, "packing/covering-matches-enumeration", inst);
        c.check(pack_2e <= cover_e && cover_e <= pack_e, "packing/sandwich", inst);

        // Greedy outputs are valid and one-sided.
        const auto gp = greedy_packing(ms, eps);
        bool valid = true;
        for (std::size_t a = 0; a < gp.size() && valid; ++a) {
            for (std::size_t b = a + 1; b < gp.size(); ++b) {
                if (ms.dist(gp[a], gp[b]) < eps) {
                    valid = false;
                    break;
                }
            }
        }
        c.check(valid && gp.size() <= pack_e, "packing/greedy-packing-valid", inst);
        const auto gc = greedy_covering(ms, eps);
        std::vector<bool> covered(ms.size(), false);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            for (std::size_t ctr : gc) {
                if (ms.dist(i, ctr) <= eps) {
                    covered[i] = true;
                    break;
                }
            }
        }
        c.check(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }) &&
                    gc.size() >= cover_e,
                "packing/greedy-covering-valid", inst);
    }
    c.check(produced == rounds, "packing/tie-free-instances-generated",
            json{{"produced", produced}, {"wanted", rounds}});
}

// ---------------------------------------------------------------------------
// applications: oracle agreement and formula-level invariants.
// ---------------------------------------------------------------------------

void suite_applications(Ctx& c) {
    const auto& opt = c.opt;

    // Monotone in delta, zero at delta = 1.
    {
        GroupTestingSpec g{100, 5, 0.05, 0.0, 10, 0.3};
        double prev = kInf;
        for (double d : {0.0, 0.2, 0.5, 0.9, 1.0}) {
            g.delta = d;
            const double val = gt_exact_tests_lower(g).bound_value;
            c.check(val <= prev && val >= 0.0, "applications/gt-delta-monotone",
                    json{{"delta", d}});
            prev = val;
        }
        c.check(prev == 0.0, "applications/gt-delta-one-vacuous", json{});

        IsingSpec is{50, 0.3, 0.0, 0.1, 0, 0.0};
        prev = kInf;
        for (double d : {0.0, 0.3, 0.7, 1.0}) {
            is.delta = d;
            const double val = ising_exact_samples_lower(is).bound_value;
            c.check(val <= prev && val >= 0.0, "applications/ising-delta-monotone",
                    json{{"delta", d}});
            prev = val;
        }
        c.check(prev == 0.0, "applications/ising-delta-one-vacuous", json{});
    }

    // Combinatorial log bounds used by the display forms: the exact ambiguity
    // counts never exceed their closed-form upper estimates.
    for (std::uint64_t t = 0; t < 20; ++t) {
        TrialRng rng(opt.seed, t);
        const std::uint64_t k = 3 + rng.next_below(6);
        const std::uint64_t p = 10 * k + rng.next_below(100);
        const std::uint64_t L = k + rng.next_below(2 * k);
        const double alpha = 0.1 + 0.5 * rng.next_double();
        const auto floor_ak = static_cast<std::uint64_t>(std::floor(alpha * k));
        if (floor_ak == 0 || floor_ak >= k || L > p) continue;
        BigInt n_max = 0;
        for (std::uint64_t j = 0; j <= floor_ak; ++j) {
            n_max += big_binomial(p - L, j) * big_binomial(L, k - j);
        }
        const double lhs = log_big(n_max);
        const double fak = static_cast<double>(floor_ak);
        const double rhs = std::log(alpha * k + 1.0) +
                           fak * std::log(static_cast<double>(p) * std::numbers::e / fak) +
                           static_cast<double>(k - floor_ak) *
                               std::log(static_cast<double>(L) * std::numbers::e /
                                        static_cast<double>(k - floor_ak));
        c.check(lhs <= rhs + 1e-9, "applications/gt-ambiguity-log-bound",
                json{{"p", p}, {"k", k}, {"L", L}, {"alpha", alpha}});
    }
    for (std::uint64_t t = 0; t < 20; ++t) {
        TrialRng rng(opt.seed ^ 0xa82ULL, t);
        const std::uint64_t p = 20 + rng.next_below(80);
        const double alpha = 0.05 + 0.4 * rng.next_double();
        const auto floor_ap = static_cast<std::uint64_t>(std::floor(alpha * p));
        if (floor_ap == 0) continue;
        const std::uint64_t pairs = p * (p - 1) / 2;
        BigInt n_max = 0;
        for (std::uint64_t j = 0; j <= floor_ap; ++j) {
            n_max += big_binomial(p - 1, j) * big_binomial(pairs - p + 1, j);
        }
        const double fap = static_cast<double>(floor_ap);
        const double rhs = std::log(alpha * p + 1.0) + static_cast<double>(p) * ln2 +
                           fap * std::log(static_cast<double>(p) * static_cast<double>(p) *
                                          std::numbers::e / fap);
        c.check(log_big(n_max) <= rhs + 1e-9, "applications/ising-ambiguity-log-bound",
                json{{"p", p}, {"alpha", alpha}});
    }

    // Group testing against exact enumeration: information ceiling and MAP
    // error above the Fano floor for seeded designs.
    {
        TrialRng rng(opt.seed ^ 0x67eULL, 0);
        const std::size_t p = 8, k = 2;
        const double eps = 0.1;
        const double capacity = gt_capacity(eps);
        const double log_m = log_binomial(p, k);
        for (std::size_t n = 1; n <= 6; ++n) {
            std::vector<std::vector<int>> design(n, std::vector<int>(p, 0));
            for (auto& row : design)
                for (auto& cell : row) cell = rng.next_double() < 0.5 ? 1 : 0;
            const auto joint = gt_exact_joint(p, k, design, eps);
            json inst{{"n", n}};
            c.check(joint.mi <= static_cast<double>(n) * capacity + 1e-9,
                    "applications/gt-information-ceiling", inst);
            const double floor_pe =
                std::max(0.0, 1.0 - (joint.mi + ln2) / log_m);
            c.check(joint.map_error >= floor_pe - 1e-9, "applications/gt-map-above-floor", inst);
        }
    }

    // Ising oracle agreement.
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        const std::size_t p = 6;
        const IsingModel single(p, {{0, 1}}, lambda);
        const auto enumeration = ising_enumerate(single);
        json inst{{"lambda", lambda}};
        c.check(std::abs(enumeration.pair_correlations[0][1] - std::tanh(lambda)) <= 1e-10,
                "applications/ising-edge-correlation", inst);
        double total = 0.0;
        for (std::size_t s = 0; s < enumeration.pmf.size(); ++s) total += enumeration.pmf[s];
        c.check(std::abs(total - 1.0) <= 1e-12, "applications/ising-normalization", inst);
        const auto empty = ising_enumerate(IsingModel(p, {}, lambda));
        const double kl = kl_divergence(enumeration.pmf, empty.pmf);
        const auto stats = ising_single_edge_stats(lambda);
        c.check(kl <= stats.kl_to_empty_upper + 1e-12, "applications/ising-kl-to-empty", inst);
        std::vector<IsingModel> ensemble;
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a + 1; b < p; ++b) ensemble.emplace_back(p, std::vector<std::pair<std::size_t, std::size_t>>{{a, b}}, lambda);
        c.check(ising_ensemble_mi(ensemble) <= stats.kl_to_empty_upper + 1e-12,
                "applications/ising-ensemble-mi", inst);
    }

    // Sparse regression: sign-pattern covariance and the MC cross-check.
    {
        const auto fam = sparse_packing_family(6, 2, 1.0);
        const std::size_t p = 6;
        const double expect = 2.0 / 6.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                double sum = 0.0;
                for (const auto& v : fam.vectors) sum += v[i] * v[j];
                const double cov = sum / static_cast<double>(fam.vectors.size());
                worst = std::max(worst, std::abs(cov - (i == j ? expect : 0.0)));
            }
        }
        c.check(worst <= 1e-12, "applications/sparse-sign-covariance", json{{"p", p}, {"k", 2}});

        // p=6, k=1, n=2: Monte Carlo mixture information stays below the
        // covariance surrogate.
        TrialRng rng(opt.seed ^ 0x5a5ULL, 0);
        const auto family = sparse_packing_family(6, 1, 0.4);
        const double sigma = 1.0;
        std::vector<std::vector<double>> design(2, std::vector<double>(6));
        double frob_sq = 0.0;
        for (auto& row : design)
            for (auto& cell : row) {
                cell = rng.next_normal();
                frob_sq += cell * cell;
            }
        std::vector<std::vector<double>> means;
        for (const auto& v : family.vectors) {
            std::vector<double> mu(2, 0.0);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 6; ++j) mu[i] += design[i][j] * (0.4 * v[j]);
            means.push_back(mu);
        }
        const GaussianMixture mix(means, sigma, FinitePMF::uniform(means.size()));
        const auto mc = mixture_mi_mc(mix, 20000, opt.seed);
        const double surrogate = 0.4 * 0.4 / (2.0 * sigma * sigma) * (1.0 / 6.0) * frob_sq;
        c.check(mc.estimate <= surrogate + 3.0 * mc.stderror,
                "applications/sparse-mi-surrogate", json{{"surrogate", surrogate}});
    }

    // Density chain on random piecewise pairs.
    for (std::uint64_t t = 0; t < std::max<std::uint64_t>(1, opt.trials / 10); ++t) {
        TrialRng rng(opt.seed ^ 0xdeULL, t);
        const std::size_t bins = 16;
        std::vector<double> a(bins), b(bins);
        double sa = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < bins; ++i) {
            a[i] = 0.1 + rng.next_double();
            b[i] = 0.4 + rng.next_double();
            sa += a[i];
            sb += b[i];
        }
        for (std::size_t i = 0; i < bins; ++i) {
            a[i] *= static_cast<double>(bins) / sa;
            b[i] *= static_cast<double>(bins) / sb;
        }
        double eta = 1.0;
        for (double x : b) eta = std::min(eta, x);
        bool ok = true;
        try {
            density_divergence_chain(PiecewiseDensity(a), PiecewiseDensity(b), eta * 0.999);
        } catch (const std::exception&) {
            ok = false;
        }
        c.check(ok, "applications/density-divergence-chain", instance_tag(opt.seed ^ 0xdeULL, t));
    }

    // Density balancing and the n^{-2/3} scaling window.
    {
        DensitySpec d{0.25, 1.0, 1.0, 1000, 0.0};
        double lo = kInf, hi = 0.0;
        for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
            d.n = n;
            const auto r = density_minimax_risk_lower(d);
            const double scaled =
                r.bound_value * std::pow(static_cast<double>(n), 2.0 / 3.0);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        const double mid = 0.5 * (lo + hi);
        c.check((hi - mid) / mid <= 0.02, "applications/density-scaling-window",
                json{{"lo", lo}, {"hi", hi}});
    }

    // Strongly convex construction identities.
    {
        const double ep = 0.02;
        const auto con = scvx_construction(ep);
        double worst = 0.0, worst_kl = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double x = static_cast<double>(i) / 10000.0;
            const double sum = con.value(1, x) + con.value(2, x);
            const double expect = (x - 0.5) * (x - 0.5) + 2.0 * ep;
            worst = std::max(worst, std::abs(sum - expect));
            for (int v : {1, 2}) {
                worst_kl = std::max(worst_kl, scvx_per_query_kl(ep, 1.0, x, v) - 2.0 * ep);
            }
        }
        c.check(worst <= 1e-12, "applications/scvx-pair-identity", json{{"eps_prime", ep}});
        c.check(worst_kl <= 1e-12, "applications/scvx-per-query-kl-ceiling",
                json{{"eps_prime", ep}});
        c.check(inv_binary_entropy(ln2 / 2.0) > 0.1, "applications/scvx-inverse-entropy-value",
                json{});
    }
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    return {"fano", "divergences", "tensorization", "packing", "applications"};
}

std::vector<SuiteReport> run_verify(const std::string& name, const VerifyOptions& options) {
    std::vector<std::string> names;
    if (name == "all") {
        names = verify_suite_names();
    } else {
        names = {name};
    }
    std::vector<SuiteReport> out;
    for (const auto& suite : names) {
        Ctx ctx{options, {}};
        ctx.report.suite = suite;
        if (suite == "fano") {
            suite_fano(ctx);
        } else if (suite == "divergences") {
            suite_divergences(ctx);
        } else if (suite == "tensorization") {
            suite_tensorization(ctx);
        } else if (suite == "packing") {
            suite_packing(ctx);
        } else if (suite == "applications") {
            suite_applications(ctx);
        } else {
            throw std::invalid_argument("unknown verify suite \"" + suite + "\"");
        }
        out.push_back(std::move(ctx.report));
    }
    return out;
}

}  // namespace converse
