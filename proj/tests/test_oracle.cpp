#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "converse/fano.hpp"
#include "converse/generators.hpp"
#include "converse/measures.hpp"
#include "converse/oracle.hpp"
#include "converse/rng.hpp"

using namespace converse;

namespace {

constexpr double ln2 = std::numbers::ln2;

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    const double left = simpson(a, m, fa, flm, fm), right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return adaptive(f, a, b, f(a), f(m), f(b), simpson(a, b, f(a), f(m), f(b)), 1e-10, 40);
}

// Exact information of a two-component equal-variance 1-D mixture with a
// uniform prior, by quadrature.
double two_component_mi(double gap, double sigma) {
    auto density = [&](double y, double mean) {
        const double z = (y - mean) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    };
    auto integrand = [&](double y) {
        const double p0 = density(y, 0.0), p1 = density(y, gap);
        const double mix = 0.5 * (p0 + p1);
        double v = 0.0;
        if (p0 > 0.0) v += 0.5 * p0 * std::log(p0 / mix);
        if (p1 > 0.0) v += 0.5 * p1 * std::log(p1 / mix);
        return v;
    };
    return integrate(integrand, -10.0 * sigma, gap + 10.0 * sigma);
}

}  // namespace

TEST_CASE("bayes-optimal error") {
    CHECK(bayes_optimal_error(FinitePMF::uniform(4), ChannelMatrix::identity(4)) == 0.0);

    // Identical rows force blind guessing.
    std::vector<FinitePMF> rows(5, FinitePMF({0.3, 0.7}));
    CHECK(bayes_optimal_error(FinitePMF::uniform(5), ChannelMatrix(rows)) ==
          doctest::Approx(0.8).epsilon(1e-14));

    // Binary symmetric channel: the optimal error is the crossover itself.
    CHECK(bayes_optimal_error(FinitePMF::uniform(2), ChannelMatrix::bsc(0.12)) ==
          doctest::Approx(0.12).epsilon(1e-14));
}

TEST_CASE("bayes-optimal error equals exhaustive decoder minimization") {
    TrialRng rng(61, 0);
    for (int t = 0; t < 300; ++t) {
        const std::size_t nv = 2 + rng.next_below(3), ny = 2 + rng.next_below(3);
        const FinitePMF prior = random_pmf(rng, nv);
        const ChannelMatrix ch = random_channel(rng, nv, ny);
        double best = 1.0;
        std::size_t n_codes = 1;
        for (std::size_t y = 0; y < ny; ++y) n_codes *= nv;
        for (std::size_t code = 0; code < n_codes; ++code) {
            std::size_t rem = code;
            double correct = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                const std::size_t v = rem % nv;
                rem /= nv;
                correct += prior[v] * ch.at(v, y);
            }
            best = std::min(best, 1.0 - correct);
        }
        CHECK(bayes_optimal_error(prior, ch) == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("approximate bayes-optimal error") {
    TrialRng rng(62, 0);

    // Equality criterion reproduces the exact-recovery optimum.
    for (int t = 0; t < 100; ++t) {
        const std::size_t nv = 2 + rng.next_below(4), ny = 2 + rng.next_below(4);
        const FinitePMF prior = random_pmf(rng, nv);
        const ChannelMatrix ch = random_channel(rng, nv, ny);
        CHECK(bayes_optimal_approx_error(prior, ch, RecoveryCriterion::equality(nv)) ==
              doctest::Approx(bayes_optimal_error(prior, ch)).epsilon(1e-14));
    }

    // Everything within reach: no way to miss.
    const RecoveryCriterion all(3, 2, std::vector<double>(6, 0.0), 0.5);
    CHECK(bayes_optimal_approx_error(FinitePMF::uniform(3), random_channel(rng, 3, 4), all) <=
          1e-14);

    // Random 4x4x4 instances against enumeration of every decoder map.
    for (int t = 0; t < 100; ++t) {
        const FinitePMF prior = random_pmf(rng, 4);
        const ChannelMatrix ch = random_channel(rng, 4, 4);
        const RecoveryCriterion rc = random_criterion(rng, 4, 4, 0.2, 0.8);
        double best = 1.0;
        for (std::size_t code = 0; code < 256; ++code) {
            std::size_t rem = code;
            double hit = 0.0;
            for (std::size_t y = 0; y < 4; ++y) {
                const std::size_t vhat = rem % 4;
                rem /= 4;
                for (std::size_t v = 0; v < 4; ++v) {
                    if (rc.at(v, vhat) <= rc.threshold) hit += prior[v] * ch.at(v, y);
                }
            }
            best = std::min(best, 1.0 - hit);
        }
        CHECK(bayes_optimal_approx_error(prior, ch, rc) == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("ising enumeration") {
    // Empty graph: uniform states, zero cross-correlations.
    const auto empty = ising_enumerate(IsingModel(4, {}, 1.0));
    for (std::size_t s = 0; s < 16; ++s) CHECK(empty.pmf[s] == doctest::Approx(1.0 / 16.0));
    CHECK(empty.pair_correlations[0][1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(empty.log_z == doctest::Approx(4.0 * ln2).epsilon(1e-12));

    // Single edge: the correlation across it is tanh(lambda).
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        const auto single = ising_enumerate(IsingModel(5, {{1, 3}}, lambda));
        CHECK(std::abs(single.pair_correlations[1][3] - std::tanh(lambda)) <= 1e-12);
        CHECK(std::abs(single.pair_correlations[0][4]) <= 1e-12);
        double total = 0.0;
        for (std::size_t s = 0; s < single.pmf.size(); ++s) total += single.pmf[s];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

        // log Z against a direct log-sum-exp over states.
        double z = 0.0;
        for (std::size_t s = 0; s < 32; ++s) {
            const int a = (s >> 1) & 1 ? 1 : -1;
            const int b = (s >> 3) & 1 ? 1 : -1;
            z += std::exp(lambda * a * b);
        }
        CHECK(single.log_z == doctest::Approx(std::log(z)).epsilon(1e-10));
    }

    // Two isolated edges factorize: the joint equals the product of the
    // two edge marginals, so their divergence vanishes.
    const auto two = ising_enumerate(IsingModel(4, {{0, 1}, {2, 3}}, 0.8));
    std::vector<double> edge01(4, 0.0), edge23(4, 0.0);
    for (std::size_t s = 0; s < 16; ++s) {
        edge01[s & 3] += two.pmf[s];
        edge23[(s >> 2) & 3] += two.pmf[s];
    }
    std::vector<double> product(16);
    for (std::size_t s = 0; s < 16; ++s) product[s] = edge01[s & 3] * edge23[(s >> 2) & 3];
    CHECK(kl_divergence(two.pmf, normalized_pmf(product)) <= 1e-12);

    CHECK_THROWS_AS(ising_enumerate(IsingModel(13, {}, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(IsingModel(4, {{0, 0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(IsingModel(4, {{0, 5}}, 1.0), std::invalid_argument);
}

TEST_CASE("ising ensemble information") {
    // A one-model ensemble carries nothing.
    CHECK(ising_ensemble_mi({IsingModel(4, {{0, 1}}, 0.7)}) ==
          doctest::Approx(0.0).epsilon(1e-14));

    // Single-edge ensembles stay below lambda tanh lambda.
    for (double lambda : {0.1, 0.5, 1.0, 2.0}) {
        std::vector<IsingModel> ensemble;
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t b = a + 1; b < 6; ++b)
                ensemble.emplace_back(6, std::vector<std::pair<std::size_t, std::size_t>>{{a, b}},
                                      lambda);
        const double mi = ising_ensemble_mi(ensemble);
        CHECK(mi <= lambda * std::tanh(lambda) + 1e-12);
        CHECK(mi >= 0.0);
    }

    // Zero coupling: all models coincide.
    std::vector<IsingModel> flat;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b)
            flat.emplace_back(4, std::vector<std::pair<std::size_t, std::size_t>>{{a, b}}, 0.0);
    CHECK(ising_ensemble_mi(flat) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(ising_ensemble_mi({}), std::invalid_argument);
    CHECK_THROWS_AS(ising_ensemble_mi({IsingModel(11, {}, 1.0)}), std::invalid_argument);
}

TEST_CASE("group testing exact joint") {
    // Testing every item alone with no noise identifies the set.
    std::vector<std::vector<int>> singles(5, std::vector<int>(5, 0));
    for (int i = 0; i < 5; ++i) singles[i][i] = 1;
    const auto ident = gt_exact_joint(5, 2, singles, 0.0);
    CHECK(ident.map_error == doctest::Approx(0.0).epsilon(1e-13));

    // An empty design reveals nothing: blind guessing among C(p,k) sets.
    const std::vector<std::vector<int>> blank(3, std::vector<int>(6, 0));
    const auto nothing = gt_exact_joint(6, 2, blank, 0.1);
    CHECK(nothing.mi == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(nothing.map_error == doctest::Approx(1.0 - 1.0 / 15.0).epsilon(1e-13));

    // Random designs: the exact MAP error sits above the Fano floor.
    TrialRng rng(63, 0);
    for (int t = 0; t < 50; ++t) {
        std::vector<std::vector<int>> design(1 + rng.next_below(6), std::vector<int>(8, 0));
        for (auto& row : design)
            for (auto& cell : row) cell = rng.next_double() < 0.3 ? 1 : 0;
        const auto joint = gt_exact_joint(8, 2, design, 0.1);
        CHECK(joint.map_error >= fano_pe_lower(joint.mi, 28) - 1e-9);
    }

    CHECK_THROWS_AS(gt_exact_joint(11, 2, blank, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gt_exact_joint(8, 3, blank, 0.1), std::invalid_argument);
}

TEST_CASE("group testing simulation") {
    const GroupTestingSpec spec{8, 2, 0.1, 0.0, 0, 0.0};

    // Zero tests: the decoder is guessing.
    const auto blind = gt_simulate(spec, 0.5, 0, GtDecoder::map, 4000, 9);
    CHECK(std::abs(blind.estimate - (1.0 - 1.0 / 28.0)) <= 3.0 * blind.stderror + 1e-12);

    // Noiseless and generous: errors die out.
    const GroupTestingSpec clean{8, 2, 0.0, 0.0, 0, 0.0};
    const auto easy = gt_simulate(clean, 0.5, 30, GtDecoder::map, 2000, 9);
    CHECK(easy.estimate < 0.05);

    // Identical seeds reproduce identical estimates; distinct seeds move.
    const auto a = gt_simulate(spec, 0.5, 4, GtDecoder::map, 3000, 42);
    const auto b = gt_simulate(spec, 0.5, 4, GtDecoder::map, 3000, 42);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderror == b.stderror);

    // The serial reference path is bit-identical to the parallel one.
    const auto s = serial::gt_simulate(spec, 0.5, 4, GtDecoder::map, 3000, 42);
    CHECK(s.estimate == a.estimate);
    CHECK(s.stderror == a.stderror);

    // The empirical curve never undercuts the information floor.
    const double capacity = gt_capacity(spec.eps);
    const double log_m = log_binomial(8, 2);
    for (std::size_t n : {1, 3, 5}) {
        const auto res = gt_simulate(spec, 0.5, n, GtDecoder::map, 3000, 11);
        const double floor_pe =
            std::max(0.0, 1.0 - (static_cast<double>(n) * capacity + ln2) / log_m);
        CHECK(res.estimate + 3.0 * res.stderror >= floor_pe);
    }

    // The plug-in decoder runs and cannot beat the floor either.
    const auto plug = gt_simulate(spec, 0.5, 5, GtDecoder::plugin, 2000, 13);
    const double floor5 = std::max(0.0, 1.0 - (5.0 * capacity + ln2) / log_m);
    CHECK(plug.estimate + 3.0 * plug.stderror >= floor5);

    CHECK_THROWS_AS(gt_simulate(spec, 0.5, 2, GtDecoder::map, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gt_simulate(GroupTestingSpec{50, 14, 0.1, 0.0, 0, 0.0}, 0.5, 2,
                                GtDecoder::map, 10, 1),
                    std::invalid_argument);  // C(50,14) beyond the MAP cap
}

TEST_CASE("mixture information estimate") {
    // Identical components: nothing to learn.
    const GaussianMixture same({{0.0, 0.0}, {0.0, 0.0}}, 1.0, FinitePMF::uniform(2));
    const auto zero = mixture_mi_mc(same, 20000, 5);
    CHECK(std::abs(zero.estimate) <= 3.0 * zero.stderror + 1e-12);

    // Far-separated pair saturates at ln 2.
    const GaussianMixture far({{0.0}, {40.0}}, 1.0, FinitePMF::uniform(2));
    const auto sat = mixture_mi_mc(far, 20000, 5);
    CHECK(std::abs(sat.estimate - ln2) <= 3.0 * sat.stderror + 1e-9);

    // Moderate separation against 1-D quadrature.
    const double gap = 1.7, sigma = 0.9;
    const GaussianMixture pair({{0.0}, {gap}}, sigma, FinitePMF::uniform(2));
    const auto mc = mixture_mi_mc(pair, 60000, 5);
    CHECK(std::abs(mc.estimate - two_component_mi(gap, sigma)) <= 3.0 * mc.stderror);

    // Determinism and the serial reference.
    const auto r1 = mixture_mi_mc(pair, 5000, 77);
    const auto r2 = mixture_mi_mc(pair, 5000, 77);
    const auto r3 = serial::mixture_mi_mc(pair, 5000, 77);
    CHECK(r1.estimate == r2.estimate);
    CHECK(r1.estimate == r3.estimate);
    CHECK(r1.stderror == r3.stderror);

    CHECK_THROWS_AS(GaussianMixture({{0.0}}, 0.0, FinitePMF::uniform(1)), std::invalid_argument);
    CHECK_THROWS_AS(GaussianMixture({std::vector<double>(17, 0.0)}, 1.0, FinitePMF::uniform(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(mixture_mi_mc(pair, 0, 1), std::invalid_argument);
}

TEST_CASE("volume estimates") {
    // The whole box.
    BodySpec cube;
    cube.box.assign(3, {0.0, 1.0});
    const auto full = ball_volume_mc(cube, 1000, 3);
    CHECK(full.estimate == 1.0);
    CHECK(full.stderror == 0.0);

    // Disk of radius 1/2 inside the unit square: area pi/4.
    BodySpec disk;
    disk.box.assign(2, {0.0, 1.0});
    disk.l2_ball = {{std::vector<double>{0.5, 0.5}}, 0.5};
    const auto quarter = ball_volume_mc(disk, 200000, 3);
    CHECK(std::abs(quarter.estimate - std::numbers::pi / 4.0) <= 3.0 * quarter.stderror);

    // Dimension-5 ball against the closed form.
    BodySpec ball5;
    ball5.box.assign(5, {-1.0, 1.0});
    ball5.l2_ball = {{std::vector<double>(5, 0.0)}, 1.0};
    const auto b5 = ball_volume_mc(ball5, 400000, 3);
    CHECK(std::abs(b5.estimate - l2_ball_volume(5, 1.0)) <= 3.0 * b5.stderror);

    // Box-ball intersection with a sup-norm ball.
    BodySpec inter;
    inter.box.assign(2, {0.0, 1.0});
    inter.linf_ball = {{std::vector<double>{0.0, 0.0}}, 0.5};
    const auto corner = ball_volume_mc(inter, 100000, 3);
    CHECK(std::abs(corner.estimate - 0.25) <= 3.0 * corner.stderror);

    // Determinism and the serial reference.
    const auto v1 = ball_volume_mc(disk, 5000, 8);
    const auto v2 = serial::ball_volume_mc(disk, 5000, 8);
    CHECK(v1.estimate == v2.estimate);

    BodySpec too_big;
    too_big.box.assign(9, {0.0, 1.0});
    CHECK_THROWS_AS(ball_volume_mc(too_big, 10, 1), std::invalid_argument);
}

TEST_CASE("simulation results carry their metadata") {
    const GroupTestingSpec spec{6, 1, 0.05, 0.0, 0, 0.0};
    const auto r = gt_simulate(spec, 0.4, 3, GtDecoder::map, 500, 123);
    CHECK(r.trials == 500);
    CHECK(r.seed == 123);
    CHECK(r.wall_time >= 0.0);
    CHECK(r.stderror >= 0.0);
}
