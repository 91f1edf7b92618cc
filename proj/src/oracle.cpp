#include "converse/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "converse/mi_bounds.hpp"
#include "converse/rng.hpp"

namespace converse {

namespace {

template <class Fn>
void for_each_trial(std::uint64_t trials, bool parallel, Fn&& fn) {
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long t = 0; t < static_cast<long long>(trials); ++t) {
            fn(static_cast<std::uint64_t>(t));
        }
    } else {
        for (std::uint64_t t = 0; t < trials; ++t) fn(t);
    }
}

double binomial_stderr(double p_hat, std::uint64_t trials) {
    return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(trials));
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::vector<std::vector<std::size_t>> enumerate_subsets(std::size_t p, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(k);
    auto rec = [&](auto&& self, std::size_t next, std::size_t depth) -> void {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = next; i + (k - depth - 1) < p; ++i) {
            cur[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

}  // namespace

double bayes_optimal_error(const FinitePMF& prior, const ChannelMatrix& channel) {
    if (prior.size() != channel.input_size()) {
        throw std::invalid_argument("bayes_optimal_error: prior/channel size mismatch");
    }
    double success = 0.0;
    for (std::size_t y = 0; y < channel.output_size(); ++y) {
        double best = 0.0;
        for (std::size_t v = 0; v < prior.size(); ++v) {
            best = std::max(best, prior[v] * channel.at(v, y));
        }
        success += best;
    }
    return std::clamp(1.0 - success, 0.0, 1.0);
}

double bayes_optimal_approx_error(const FinitePMF& prior, const ChannelMatrix& channel,
                                  const RecoveryCriterion& rc) {
    if (prior.size() != channel.input_size() || rc.v_size != prior.size()) {
        throw std::invalid_argument("bayes_optimal_approx_error: dimension mismatch");
    }
    double success = 0.0;
    for (std::size_t y = 0; y < channel.output_size(); ++y) {
        double best = 0.0;
        for (std::size_t vhat = 0; vhat < rc.vhat_size; ++vhat) {
            double mass = 0.0;
            for (std::size_t v = 0; v < rc.v_size; ++v) {
                if (rc.at(v, vhat) <= rc.threshold) mass += prior[v] * channel.at(v, y);
            }
            best = std::max(best, mass);
        }
        success += best;
    }
    return std::clamp(1.0 - success, 0.0, 1.0);
}

IsingModel::IsingModel(std::size_t p, std::vector<std::pair<std::size_t, std::size_t>> edges_in,
                       double lambda)
    : p(p), lambda(lambda) {
    if (p == 0 || p > kIsingMaxNodes) {
        throw std::invalid_argument("IsingModel: node count must lie in [1, " +
                                    std::to_string(kIsingMaxNodes) + "]");
    }
    if (!(lambda >= 0.0)) throw std::invalid_argument("IsingModel: negative lambda");
    std::set<std::pair<std::size_t, std::size_t>> dedup;
    for (auto [a, b] : edges_in) {
        if (a >= p || b >= p) throw std::invalid_argument("IsingModel: edge endpoint out of range");
        if (a == b) throw std::invalid_argument("IsingModel: self-loop");
        dedup.emplace(std::min(a, b), std::max(a, b));
    }
    edges.assign(dedup.begin(), dedup.end());
}

IsingEnumeration ising_enumerate(const IsingModel& model) {
    const std::size_t n_states = std::size_t{1} << model.p;
    std::vector<double> energy(n_states);
    double e_max = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n_states; ++s) {
        double e = 0.0;
        for (auto [a, b] : model.edges) {
            const int sa = (s >> a) & 1 ? 1 : -1;
            const int sb = (s >> b) & 1 ? 1 : -1;
            e += static_cast<double>(sa * sb);
        }
        energy[s] = model.lambda * e;
        e_max = std::max(e_max, energy[s]);
    }
    std::vector<double> weight(n_states);
    double z_shifted = 0.0;
    for (std::size_t s = 0; s < n_states; ++s) {
        weight[s] = std::exp(energy[s] - e_max);
        z_shifted += weight[s];
    }
    for (double& w : weight) w /= z_shifted;

    IsingEnumeration out{normalized_pmf(std::move(weight)), e_max + std::log(z_shifted), {}};
    out.pair_correlations.assign(model.p, std::vector<double>(model.p, 0.0));
    for (std::size_t i = 0; i < model.p; ++i) out.pair_correlations[i][i] = 1.0;
    for (std::size_t i = 0; i < model.p; ++i) {
        for (std::size_t j = i + 1; j < model.p; ++j) {
            double c = 0.0;
            for (std::size_t s = 0; s < n_states; ++s) {
                const int si = (s >> i) & 1 ? 1 : -1;
                const int sj = (s >> j) & 1 ? 1 : -1;
                c += out.pmf[s] * static_cast<double>(si * sj);
            }
            out.pair_correlations[i][j] = out.pair_correlations[j][i] = c;
        }
    }
    return out;
}

double ising_ensemble_mi(const std::vector<IsingModel>& models) {
    if (models.empty()) throw std::invalid_argument("ising_ensemble_mi: empty ensemble");
    const std::size_t p = models.front().p;
    if (p > 10) throw std::invalid_argument("ising_ensemble_mi: node cap is 10");
    for (const auto& m : models) {
        if (m.p != p) throw std::invalid_argument("ising_ensemble_mi: models must share p");
    }
    const std::size_t n_states = std::size_t{1} << p;
    if (models.size() * n_states > kExhaustiveCellCap) {
        throw std::invalid_argument("ising_ensemble_mi: ensemble size exceeds the cell cap");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(models.size());
    for (const auto& m : models) rows.push_back(ising_enumerate(m).pmf.mass());

    std::vector<double> mixture(n_states, 0.0);
    const double w = 1.0 / static_cast<double>(models.size());
    for (const auto& r : rows)
        for (std::size_t s = 0; s < n_states; ++s) mixture[s] += w * r[s];

    double mi = 0.0;
    for (const auto& r : rows) {
        for (std::size_t s = 0; s < n_states; ++s) {
            if (r[s] > 0.0) mi += w * r[s] * std::log(r[s] / mixture[s]);
        }
    }
    return std::max(mi, 0.0);
}

GroupTestingJoint gt_exact_joint(std::size_t p, std::size_t k,
                                 const std::vector<std::vector<int>>& design, double eps) {
    if (p == 0 || p > 10 || k == 0 || k > 2) {
        throw std::invalid_argument("gt_exact_joint: caps are p <= 10, k <= 2");
    }
    if (design.size() > 6) throw std::invalid_argument("gt_exact_joint: at most 6 tests");
    if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("gt_exact_joint: bad eps");
    for (const auto& row : design) {
        if (row.size() != p) throw std::invalid_argument("gt_exact_joint: design row length != p");
    }
    const std::size_t n = design.size();
    const auto subsets = enumerate_subsets(p, k);
    const std::size_t n_outcomes = std::size_t{1} << n;

    std::vector<double> joint(subsets.size() * n_outcomes);
    const double prior = 1.0 / static_cast<double>(subsets.size());
    for (std::size_t si = 0; si < subsets.size(); ++si) {
        // Noiseless outcome of each test for this defective set.
        std::vector<int> noiseless(n, 0);
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t item : subsets[si]) {
                if (design[t][item] != 0) {
                    noiseless[t] = 1;
                    break;
                }
            }
        }
        for (std::size_t y = 0; y < n_outcomes; ++y) {
            double prob = prior;
            for (std::size_t t = 0; t < n; ++t) {
                const int bit = (y >> t) & 1;
                prob *= (bit == noiseless[t]) ? (1.0 - eps) : eps;
            }
            joint[si * n_outcomes + y] = prob;
        }
    }
    GroupTestingJoint out(normalized_joint(subsets.size(), n_outcomes, std::move(joint)));
    out.subsets = subsets;
    out.mi = mutual_information(out.joint);
    double success = 0.0;
    for (std::size_t y = 0; y < n_outcomes; ++y) {
        double best = 0.0;
        for (std::size_t si = 0; si < subsets.size(); ++si) {
            best = std::max(best, out.joint.at(si, y));
        }
        success += best;
    }
    out.map_error = std::clamp(1.0 - success, 0.0, 1.0);
    return out;
}

namespace {

SimResult gt_simulate_impl(const GroupTestingSpec& spec, double nu, std::size_t n,
                           GtDecoder decoder, std::uint64_t trials, std::uint64_t seed,
                           bool parallel) {
    if (spec.k == 0 || spec.k > spec.p) throw std::invalid_argument("gt_simulate: need 1<=k<=p");
    if (!(spec.eps >= 0.0 && spec.eps < 0.5)) throw std::invalid_argument("gt_simulate: bad eps");
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("gt_simulate: nu must be in (0,1]");
    if (spec.p > 64) throw std::invalid_argument("gt_simulate: item cap is p <= 64");
    if (trials == 0) throw std::invalid_argument("gt_simulate: need at least one trial");
    const std::size_t p = spec.p, k = spec.k;
    const BigInt n_subsets_big = big_binomial(p, k);
    if (decoder == GtDecoder::map && n_subsets_big > 1'000'000) {
        throw std::invalid_argument("gt_simulate: MAP decoder cap is C(p,k) <= 1e6");
    }
    const auto subsets = enumerate_subsets(p, k);
    const std::size_t n_subsets = subsets.size();

    Timer timer;
    std::vector<std::uint8_t> errors(trials, 0);
    for_each_trial(trials, parallel, [&](std::uint64_t t) {
        TrialRng rng(seed, t);
        const std::size_t truth = static_cast<std::size_t>(rng.next_below(n_subsets));

        // Fresh Bernoulli(nu) design, stored test-major as bitmasks over items.
        std::vector<std::uint64_t> tests(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                if (rng.next_double() < nu) tests[i] |= std::uint64_t{1} << j;
            }
        }
        std::uint64_t truth_mask = 0;
        for (std::size_t item : subsets[truth]) truth_mask |= std::uint64_t{1} << item;

        std::vector<int> outcome(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int noiseless = (tests[i] & truth_mask) != 0 ? 1 : 0;
            const bool flip = rng.next_double() < spec.eps;
            outcome[i] = flip ? 1 - noiseless : noiseless;
        }

        std::size_t decoded = 0;
        if (decoder == GtDecoder::map) {
            // Minimize the number of mismatched tests (eps < 1/2 makes the
            // likelihood monotone inial mismatch count); lowest index on ties.
            std::size_t best_mismatch = n + 1;
            for (std::size_t si = 0; si < n_subsets; ++si) {
                std::uint64_t mask = 0;
                for (std::size_t item : subsets[si]) mask |= std::uint64_t{1} << item;
                std::size_t mismatch = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const int noiseless = (tests[i] & mask) != 0 ? 1 : 0;
                    if (noiseless != outcome[i]) ++mismatch;
                }
                if (mismatch < best_mismatch) {
                    best_mismatch = mismatch;
                    decoded = si;
                }
            }
        } else {
            // Plug-in scoring: positive tests vote for their items, negative
            // tests against; take the k best scores, lowest index on ties.
            std::vector<long long> score(p, 0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < p; ++j) {
                    if (tests[i] & (std::uint64_t{1} << j)) {
                        score[j] += outcome[i] == 1 ? 1 : -1;
                    }
                }
            }
            std::vector<std::size_t> order(p);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
            std::vector<std::size_t> picked(order.begin(), order.begin() + k);
            std::sort(picked.begin(), picked.end());
            const auto it = std::find(subsets.begin(), subsets.end(), picked);
            decoded = it == subsets.end() ? n_subsets : static_cast<std::size_t>(it - subsets.begin());
        }
        errors[t] = decoded == truth ? 0 : 1;
    });

    std::uint64_t error_count = 0;
    for (std::uint8_t e : errors) error_count += e;
    SimResult out;
    out.estimate = static_cast<double>(error_count) / static_cast<double>(trials);
    out.stderror = binomial_stderr(out.estimate, trials);
    out.trials = trials;
    out.seed = seed;
    out.wall_time = timer.seconds();
    return out;
}

SimResult mixture_mi_mc_impl(const GaussianMixture& mix, std::uint64_t trials, std::uint64_t seed,
                             bool parallel) {
    if (trials == 0) throw std::invalid_argument("mixture_mi_mc: need at least one trial");
    const std::size_t m = mix.means.size();
    const std::size_t dim = mix.means.front().size();
    const double inv_two_var = 1.0 / (2.0 * mix.sigma * mix.sigma);

    Timer timer;
    std::vector<double> values(trials);
    for_each_trial(trials, parallel, [&](std::uint64_t t) {
        TrialRng rng(seed, t);
        // Component by inverse-CDF on the prior, then one Gaussian sample.
        const double u = rng.next_double();
        std::size_t v = m - 1;
        double acc = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            acc += mix.prior[c];
            if (u < acc) {
                v = c;
                break;
            }
        }
        std::vector<double> y(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            y[d] = mix.means[v][d] + mix.sigma * rng.next_normal();
        }
        // ln P(y|v) - ln P(y); the shared normalization constant cancels.
        std::vector<double> loglik(m);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < m; ++c) {
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = y[d] - mix.means[c][d];
                sq += diff * diff;
            }
            loglik[c] = -sq * inv_two_var;
            if (mix.prior[c] > 0.0) top = std::max(top, std::log(mix.prior[c]) + loglik[c]);
        }
        double denom = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            if (mix.prior[c] > 0.0) denom += std::exp(std::log(mix.prior[c]) + loglik[c] - top);
        }
        values[t] = loglik[v] - (top + std::log(denom));
    });

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(trials);

    SimResult out;
    out.estimate = mean;
    out.stderror = std::sqrt(var / static_cast<double>(trials));
    out.trials = trials;
    out.seed = seed;
    out.wall_time = timer.seconds();
    return out;
}

SimResult ball_volume_mc_impl(const BodySpec& body, std::uint64_t trials, std::uint64_t seed,
                              bool parallel) {
    if (trials == 0) throw std::invalid_argument("ball_volume_mc: need at least one trial");
    const std::size_t dim = body.box.size();
    if (dim == 0 || dim > kVolumeMaxDimension) {
        throw std::invalid_argument("ball_volume_mc: dimension cap is " +
                                    std::to_string(kVolumeMaxDimension));
    }
    double box_vol = 1.0;
    for (auto [lo, hi] : body.box) {
        if (!(hi > lo)) throw std::invalid_argument("ball_volume_mc: empty box side");
        box_vol *= hi - lo;
    }
    auto check_center = [&](const std::vector<double>& c) {
        if (c.size() != dim) throw std::invalid_argument("ball_volume_mc: center dimension");
    };
    if (body.l2_ball) check_center(body.l2_ball->first);
    if (body.linf_ball) check_center(body.linf_ball->first);

    Timer timer;
    std::vector<std::uint8_t> inside(trials, 0);
    for_each_trial(trials, parallel, [&](std::uint64_t t) {
        TrialRng rng(seed, t);
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            x[d] = body.box[d].first + (body.box[d].second - body.box[d].first) * rng.next_double();
        }
        bool ok = true;
        if (body.l2_ball) {
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = x[d] - body.l2_ball->first[d];
                sq += diff * diff;
            }
            ok = sq <= body.l2_ball->second * body.l2_ball->second;
        }
        if (ok && body.linf_ball) {
            for (std::size_t d = 0; d < dim; ++d) {
                if (std::abs(x[d] - body.linf_ball->first[d]) > body.linf_ball->second) {
                    ok = false;
                    break;
                }
            }
        }
        inside[t] = ok ? 1 : 0;
    });

    std::uint64_t hits = 0;
    for (std::uint8_t i : inside) hits += i;
    const double frac = static_cast<double>(hits) / static_cast<double>(trials);
    SimResult out;
    out.estimate = box_vol * frac;
    out.stderror = box_vol * binomial_stderr(frac, trials);
    out.trials = trials;
    out.seed = seed;
    out.wall_time = timer.seconds();
    return out;
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<std::vector<double>> means_in, double sigma,
                                 FinitePMF prior)
    : means(std::move(means_in)), sigma(sigma), prior(std::move(prior)) {
    if (means.empty() || means.size() > kMixtureMaxComponents) {
        throw std::invalid_argument("GaussianMixture: component count out of range");
    }
    if (means.size() != this->prior.size()) {
        throw std::invalid_argument("GaussianMixture: prior length mismatch");
    }
    const std::size_t dim = means.front().size();
    if (dim == 0 || dim > kMixtureMaxDimension) {
        throw std::invalid_argument("GaussianMixture: dimension out of range");
    }
    for (const auto& mu : means) {
        if (mu.size() != dim) throw std::invalid_argument("GaussianMixture: ragged means");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("GaussianMixture: sigma must be > 0");
}

SimResult gt_simulate(const GroupTestingSpec& spec, double nu, std::size_t n, GtDecoder decoder,
                      std::uint64_t trials, std::uint64_t seed) {
    return gt_simulate_impl(spec, nu, n, decoder, trials, seed, true);
}

SimResult mixture_mi_mc(const GaussianMixture& mix, std::uint64_t trials, std::uint64_t seed) {
    return mixture_mi_mc_impl(mix, trials, seed, true);
}

SimResult ball_volume_mc(const BodySpec& body, std::uint64_t trials, std::uint64_t seed) {
    return ball_volume_mc_impl(body, trials, seed, true);
}

namespace serial {

SimResult gt_simulate(const GroupTestingSpec& spec, double nu, std::size_t n, GtDecoder decoder,
                      std::uint64_t trials, std::uint64_t seed) {
    return gt_simulate_impl(spec, nu, n, decoder, trials, seed, false);
}

SimResult mixture_mi_mc(const GaussianMixture& mix, std::uint64_t trials, std::uint64_t seed) {
    return mixture_mi_mc_impl(mix, trials, seed, false);
}

SimResult ball_volume_mc(const BodySpec& body, std::uint64_t trials, std::uint64_t seed) {
    return ball_volume_mc_impl(body, trials, seed, false);
}

}  // namespace serial

}  // namespace converse
