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
}

TEST_CASE("fano entropy rhs") {
    CHECK(fano_entropy_rhs(0.0, 7) == 0.0);
    CHECK(fano_entropy_rhs(1.0, 2) == 0.0);  // H2(1) + ln 1
    // Frozen: ln 2 + 0.5 ln 3.
    CHECK(fano_entropy_rhs(0.5, 4) == doctest::Approx(1.242453324894000155).epsilon(1e-14));
    CHECK_THROWS_AS(fano_entropy_rhs(0.5, 1), std::invalid_argument);
}

TEST_CASE("fano error-probability lower bound") {
    CHECK(fano_pe_lower(0.0, 16) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(fano_pe_lower(std::log(7.0), 7) == 0.0);
    // Frozen: 1 - (1 + ln 2)/(10 ln 2).
    CHECK(fano_pe_lower(1.0, 1024) == doctest::Approx(0.755730495911103659).epsilon(1e-14));
    // The binary case clamps to zero; the binary form is the useful one.
    CHECK(fano_pe_lower(0.0, 2) == 0.0);
    CHECK_THROWS_AS(fano_pe_lower(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(fano_pe_lower(-0.1, 4), std::invalid_argument);
}

TEST_CASE("binary fano lower bound") {
    CHECK(fano_pe_lower_binary(0.0) == 0.5);
    CHECK(fano_pe_lower_binary(ln2) == 0.0);
    CHECK(fano_pe_lower_binary(10.0) == 0.0);
    CHECK(fano_pe_lower_binary(ln2 / 2.0) > 0.1);
}

TEST_CASE("monotonicity of the fano bounds") {
    TrialRng rng(21, 0);
    for (int t = 0; t < 300; ++t) {
        const double mi = 2.0 * rng.next_double();
        const double mi2 = mi + rng.next_double();
        const std::size_t m = 3 + rng.next_below(60);
        CHECK(fano_pe_lower(mi2, m) <= fano_pe_lower(mi, m));
        CHECK(fano_pe_lower(mi, m + 1 + rng.next_below(20)) >= fano_pe_lower(mi, m));
        CHECK(fano_pe_lower_binary(mi2) <= fano_pe_lower_binary(mi));
        const std::size_t n_max = 1 + rng.next_below(m - 1);
        if (n_max + 1 < m) {
            CHECK(approx_fano_pe_lower(mi, m, n_max + 1) <= approx_fano_pe_lower(mi, m, n_max));
        }
    }
}

TEST_CASE("neighborhood counts") {
    const auto eq = neighborhood_counts(RecoveryCriterion::equality(5));
    CHECK(eq.n_max == 1);
    CHECK(eq.n_min == 1);

    const RecoveryCriterion zero(4, 3, std::vector<double>(12, 0.0), 0.0);
    const auto all = neighborhood_counts(zero);
    CHECK(all.n_max == 4);
    CHECK(all.n_min == 4);

    // Hamming distance over sign patterns with threshold k/2, against a
    // brute-force pair count.
    const auto fam = sparse_packing_family(5, 2, 1.0);
    const std::size_t m = fam.vectors.size();
    std::vector<double> dist(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            int d = 0;
            for (std::size_t c = 0; c < 5; ++c) d += fam.vectors[i][c] != fam.vectors[j][c];
            dist[i * m + j] = d;
        }
    const RecoveryCriterion rc(m, m, dist, 1.0);  // t = k/2
    const auto counts = neighborhood_counts(rc);
    std::size_t brute_max = 0, brute_min = m;
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < m; ++i) c += dist[i * m + j] <= 1.0;
        brute_max = std::max(brute_max, c);
        brute_min = std::min(brute_min, c);
    }
    CHECK(counts.n_max == brute_max);
    CHECK(counts.n_min == brute_min);
    CHECK(counts.per_vhat.size() == m);
}

TEST_CASE("approximate-recovery bound reduces to exact") {
    TrialRng rng(22, 0);
    for (int t = 0; t < 1000; ++t) {
        const double mi = 3.0 * rng.next_double();
        const std::size_t m = 3 + rng.next_below(100);
        CHECK(approx_fano_pe_lower(mi, m, 1) == fano_pe_lower(mi, m));
    }
    CHECK(approx_fano_pe_lower(0.0, 64, 4) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(approx_fano_pe_lower(0.0, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(approx_fano_pe_lower(0.0, 8, 0), std::invalid_argument);
}

TEST_CASE("approximate entropy rhs") {
    TrialRng rng(23, 0);
    for (int t = 0; t < 200; ++t) {
        const double pe = rng.next_double();
        const std::size_t m = 2 + rng.next_below(30);
        CHECK(approx_fano_entropy_rhs(pe, m, 1, 1) == fano_entropy_rhs(pe, m));
    }
    CHECK(approx_fano_entropy_rhs(0.0, 10, 4, 2) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK_THROWS_AS(approx_fano_entropy_rhs(0.1, 10, 0, 0), std::invalid_argument);
}

TEST_CASE("entropy rhs dominates every decoder on 3x3 instances") {
    TrialRng rng(24, 0);
    for (int t = 0; t < 100; ++t) {
        const FinitePMF prior = random_pmf(rng, 3);
        const ChannelMatrix ch = random_channel(rng, 3, 3);
        const JointPMF joint = JointPMF::from_prior_channel(prior, ch);
        const RecoveryCriterion rc = random_criterion(rng, 3, 3, 0.1, 0.9);
        const auto counts = neighborhood_counts(rc);
        for (std::size_t code = 0; code < 27; ++code) {
            std::vector<std::size_t> dec(3);
            std::size_t rem = code;
            for (std::size_t y = 0; y < 3; ++y) {
                dec[y] = rem % 3;
                rem /= 3;
            }
            std::vector<double> pair(9, 0.0);
            for (std::size_t v = 0; v < 3; ++v)
                for (std::size_t y = 0; y < 3; ++y) pair[v * 3 + dec[y]] += joint.at(v, y);
            const JointPMF vvhat = normalized_joint(3, 3, std::move(pair));
            const double cond_ent = entropy(vvhat.flatten()) - entropy(vvhat.col_marginal());
            double pe = 0.0, pe_t = 0.0;
            for (std::size_t v = 0; v < 3; ++v)
                for (std::size_t w = 0; w < 3; ++w) {
                    if (v != w) pe += vvhat.at(v, w);
                    if (rc.at(v, w) > rc.threshold) pe_t += vvhat.at(v, w);
                }
            pe = std::min(pe, 1.0);
            pe_t = std::min(pe_t, 1.0);
            CHECK(cond_ent <= fano_entropy_rhs(pe, 3) + 1e-12);
            if (counts.n_max >= 1) {
                CHECK(cond_ent <=
                      approx_fano_entropy_rhs(pe_t, 3, counts.n_max, counts.n_min) + 1e-12);
            }
        }
    }
}

TEST_CASE("soundness against the bayes-optimal decoder") {
    TrialRng rng(25, 0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t nv = 2 + rng.next_below(7), ny = 2 + rng.next_below(7);
        const FinitePMF prior = FinitePMF::uniform(nv);
        const ChannelMatrix ch = random_channel(rng, nv, ny);
        const double mi = mutual_information(JointPMF::from_prior_channel(prior, ch));
        const double pe = bayes_optimal_error(prior, ch);
        if (nv == 2) {
            CHECK(pe >= fano_pe_lower_binary(mi) - 1e-9);
        } else {
            CHECK(pe >= fano_pe_lower(mi, nv) - 1e-9);
        }
        const std::size_t nvhat = 2 + rng.next_below(7);
        const RecoveryCriterion rc = random_criterion(rng, nv, nvhat, 0.05, 0.6);
        const auto counts = neighborhood_counts(rc);
        if (counts.n_max >= 1 && counts.n_max < nv) {
            CHECK(bayes_optimal_approx_error(prior, ch, rc) >=
                  approx_fano_pe_lower(mi, nv, counts.n_max) - 1e-9);
        }
    }
}

TEST_CASE("conditional fano") {
    // One block of weight 1 at full entropy.
    const double one = conditional_fano_pe_lower({{1.0, std::log(4.0), 4}});
    CHECK(one == doctest::Approx((std::log(4.0) - ln2) / std::log(3.0)).epsilon(1e-14));
    // Frozen value of that expression.
    CHECK(one == doctest::Approx(0.630929753571457437).epsilon(1e-14));

    // Entropy at or below one bit contributes nothing.
    CHECK(conditional_fano_pe_lower({{0.6, ln2, 5}, {0.4, 0.3, 7}}) == 0.0);

    // Two-block mixture against the per-block sum.
    const std::vector<ConditionalFanoEntry> blocks = {{0.3, 1.2, 4}, {0.5, 0.9, 6}};
    double hand = 0.3 * std::max(0.0, (1.2 - ln2) / std::log(3.0)) +
                  0.5 * std::max(0.0, (0.9 - ln2) / std::log(5.0));
    CHECK(conditional_fano_pe_lower(blocks) == doctest::Approx(hand).epsilon(1e-14));

    // Per-term clamping: a useless block cannot drag the bound down.
    const double with_bad = conditional_fano_pe_lower({{0.3, 1.2, 4}, {0.5, 0.1, 6}});
    CHECK(with_bad == doctest::Approx(0.3 * (1.2 - ln2) / std::log(3.0)).epsilon(1e-13));

    CHECK_THROWS_AS(conditional_fano_pe_lower({{1.0, 0.5, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(conditional_fano_pe_lower({{0.7, 0.5, 4}, {0.7, 0.5, 4}}),
                    std::invalid_argument);
}

TEST_CASE("continuum fano") {
    // Exact cancellation: ratio e^{ln 2} makes the bound vanish at zero
    // information.
    const VolumeRatio vr(2.0, 1.0);
    CHECK(continuum_fano_pe_lower(0.0, vr) == 0.0);

    // Unit cube, sup-norm ball of radius 1/4 in dimension 3.
    const double ball = linf_ball_volume(3, 0.25);
    CHECK(ball == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(continuum_fano_pe_lower(0.0, VolumeRatio(1.0, ball)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(continuum_fano_pe_lower(0.0, VolumeRatio(1.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(VolumeRatio(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(VolumeRatio(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("volume helpers") {
    CHECK(box_volume({1.0, 1.0, 1.0}) == 1.0);
    CHECK(box_volume({2.0, 0.5}) == 1.0);
    CHECK(l2_ball_volume(2, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(l2_ball_volume(3, 1.0) == doctest::Approx(4.0 / 3.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(l2_ball_volume(1, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(linf_ball_volume(4, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(l2_ball_volume(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(box_volume({1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("recovery criterion validation") {
    CHECK_THROWS_AS(RecoveryCriterion(2, 2, std::vector<double>(3, 0.0), 0.0),
                    std::invalid_argument);
    const RecoveryCriterion rc = RecoveryCriterion::equality(3);
    CHECK(rc.at(0, 0) == 0.0);
    CHECK(rc.at(0, 1) == 1.0);
}
