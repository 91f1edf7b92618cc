#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "converse/generators.hpp"
#include "converse/measures.hpp"
#include "converse/rng.hpp"

using namespace converse;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double ln2 = std::numbers::ln2;

// Adaptive Simpson quadrature, the independent oracle for the Gaussian
// closed form.
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
    return adaptive(f, a, b, f(a), f(m), f(b), simpson(a, b, f(a), f(m), f(b)), 1e-11, 40);
}

}  // namespace

TEST_CASE("pmf validation and renormalization") {
    CHECK_THROWS_AS(FinitePMF({0.5, -0.1, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(FinitePMF({0.5, 0.4}), std::invalid_argument);     // sums to 0.9
    CHECK_THROWS_AS(FinitePMF({0.6, 0.6}), std::invalid_argument);     // sums to 1.2
    CHECK_THROWS_AS(FinitePMF(std::vector<double>{}), std::invalid_argument);

    // Within tolerance: accepted and renormalized to an exact unit sum.
    const FinitePMF p({0.5, 0.5 + 5e-13});
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("entropy values") {
    CHECK(entropy(FinitePMF::uniform(2)) == doctest::Approx(ln2).epsilon(1e-15));
    CHECK(entropy(FinitePMF::point_mass(5, 2)) == 0.0);
    // Frozen from a 30-digit evaluation of -sum p ln p.
    CHECK(entropy(FinitePMF({0.25, 0.75})) ==
          doctest::Approx(0.562335144618808350).epsilon(1e-14));
}

TEST_CASE("entropy range on random pmfs") {
    TrialRng rng(11, 0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng.next_below(16);
        const FinitePMF p = random_pmf_with_zeros(rng, n, 0.2);
        const double h = entropy(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(ln2).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // Frozen from a 30-digit evaluation.
    CHECK(binary_entropy(0.11) == doctest::Approx(0.346515336918666152).epsilon(1e-14));
    for (double a : {0.05, 0.2, 0.37, 0.49}) {
        CHECK(binary_entropy(a) == doctest::Approx(binary_entropy(1.0 - a)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(binary_entropy(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(binary_entropy(1.01), std::invalid_argument);
}

TEST_CASE("inverse binary entropy") {
    CHECK(inv_binary_entropy(ln2) == 0.5);
    CHECK(inv_binary_entropy(0.0) == 0.0);
    // Frozen from a 30-digit bisection; the acceptance threshold is > 0.1.
    CHECK(inv_binary_entropy(ln2 / 2.0) ==
          doctest::Approx(0.110027864438359551).epsilon(1e-10));
    CHECK(inv_binary_entropy(ln2 / 2.0) > 0.1);
    CHECK_THROWS_AS(inv_binary_entropy(-1e-9), std::invalid_argument);
    CHECK_THROWS_AS(inv_binary_entropy(ln2 + 1e-9), std::invalid_argument);

    // Round trip across the whole domain.
    for (int i = 0; i <= 1000; ++i) {
        const double a = 0.5 * i / 1000.0;
        CHECK(std::abs(inv_binary_entropy(binary_entropy(a)) - a) <= 1e-10);
    }
}

TEST_CASE("mutual information basics") {
    // Independent pair.
    const JointPMF prod = JointPMF::product(FinitePMF({0.3, 0.7}), FinitePMF({0.2, 0.5, 0.3}));
    CHECK(mutual_information(prod) == doctest::Approx(0.0).epsilon(1e-14));

    // Uniform bit through a noiseless channel.
    const JointPMF ident =
        JointPMF::from_prior_channel(FinitePMF::uniform(2), ChannelMatrix::identity(2));
    CHECK(mutual_information(ident) == doctest::Approx(ln2).epsilon(1e-15));

    // Uniform bit through a useless channel.
    const JointPMF useless =
        JointPMF::from_prior_channel(FinitePMF::uniform(2), ChannelMatrix::bsc(0.5));
    CHECK(mutual_information(useless) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("mutual information route agreement") {
    TrialRng rng(12, 0);
    for (int t = 0; t < 300; ++t) {
        const std::size_t nv = 2 + rng.next_below(5), ny = 2 + rng.next_below(5);
        const JointPMF j = random_joint(rng, nv, ny);
        const double direct = mutual_information(j);

        // Entropy route: H(V) + H(Y) - H(V,Y).
        const double via_entropy =
            entropy(j.row_marginal()) + entropy(j.col_marginal()) - entropy(j.flatten());
        CHECK(std::abs(direct - via_entropy) <= 1e-12);

        // Average-divergence route: sum_v P(v) D(P(.|v) || P_Y).
        const FinitePMF pv = j.row_marginal();
        const FinitePMF py = j.col_marginal();
        double via_kl = 0.0;
        for (std::size_t v = 0; v < nv; ++v) {
            if (pv[v] == 0.0) continue;
            std::vector<double> row(ny);
            for (std::size_t y = 0; y < ny; ++y) row[y] = j.at(v, y) / pv[v];
            via_kl += pv[v] * kl_divergence(normalized_pmf(row), py);
        }
        CHECK(std::abs(direct - via_kl) <= 1e-12);
        CHECK(direct >= 0.0);
    }
}

TEST_CASE("conditional mutual information") {
    TrialRng rng(13, 0);

    // X independent of (V,Y): conditioning changes nothing.
    const JointPMF vy = random_joint(rng, 3, 3);
    const FinitePMF px({0.4, 0.6});
    std::vector<double> m(3 * 3 * 2);
    for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t y = 0; y < 3; ++y)
            for (std::size_t x = 0; x < 2; ++x) m[(v * 3 + y) * 2 + x] = vy.at(v, y) * px[x];
    CHECK(conditional_mutual_information(Joint3PMF(3, 3, 2, m)) ==
          doctest::Approx(mutual_information(vy)).epsilon(1e-13));

    // V determined by the conditioning variable: nothing left to learn.
    std::vector<double> det(2 * 2 * 2, 0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) det[(x * 2 + y) * 2 + x] = 0.25;
    CHECK(conditional_mutual_information(Joint3PMF(2, 2, 2, det)) ==
          doctest::Approx(0.0).epsilon(1e-14));

    // Random 2x2x2 joints against definition-level summation over all cells.
    for (int t = 0; t < 200; ++t) {
        const Joint3PMF j3 = random_joint3(rng, 2, 2, 2);
        double direct = 0.0;
        for (std::size_t x = 0; x < 2; ++x) {
            double pc = 0.0;
            double cell[2][2];
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    cell[a][b] = j3.at(a, b, x);
                    pc += cell[a][b];
                }
            if (pc == 0.0) continue;
            double pa[2] = {cell[0][0] + cell[0][1], cell[1][0] + cell[1][1]};
            double pb[2] = {cell[0][0] + cell[1][0], cell[0][1] + cell[1][1]};
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    if (cell[a][b] > 0.0) {
                        direct += cell[a][b] * std::log(cell[a][b] * pc / (pa[a] * pb[b]));
                    }
                }
        }
        CHECK(std::abs(conditional_mutual_information(j3) - direct) <= 1e-12);
    }
}

TEST_CASE("kl divergence") {
    const FinitePMF p({0.3, 0.7});
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(FinitePMF({1.0, 0.0}), FinitePMF::uniform(2)) ==
          doctest::Approx(ln2).epsilon(1e-15));
    CHECK(kl_divergence(FinitePMF::uniform(2), FinitePMF({1.0, 0.0})) == kInf);
    CHECK_THROWS_AS(kl_divergence(p, FinitePMF::uniform(3)), std::invalid_argument);
}

TEST_CASE("divergence relation lattice on random pairs") {
    TrialRng rng(14, 0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng.next_below(15);
        const FinitePMF p = random_pmf_with_zeros(rng, n, 0.25);
        const FinitePMF q = random_pmf(rng, n);
        const double kl = kl_divergence(p, q);
        const double tv = tv_distance(p, q);
        const double h2 = hellinger_sq(p, q);
        const double x2 = chi_sq(p, q);

        CHECK(tv >= 0.0);
        CHECK(tv <= 1.0 + 1e-12);
        CHECK(h2 >= 0.0);
        CHECK(h2 <= 2.0 + 1e-12);
        CHECK(x2 >= 0.0);
        CHECK(kl >= 2.0 * tv * tv - 1e-12);
        double eta = 1.0;
        for (std::size_t i = 0; i < n; ++i) eta = std::min(eta, q[i]);
        CHECK(kl <= 2.0 / eta * tv * tv + 1e-12);
        const double h = std::sqrt(h2);
        CHECK(0.5 * h2 <= tv + 1e-12);
        CHECK(tv <= h * std::sqrt(1.0 - h2 / 4.0) + 1e-12);
        CHECK(kl <= std::log1p(x2) + 1e-12);
        CHECK(std::log1p(x2) <= x2 + 1e-12);
    }
}

TEST_CASE("divergences identity and disjoint support") {
    const FinitePMF p({0.2, 0.8, 0.0, 0.0});
    const FinitePMF q({0.0, 0.0, 0.5, 0.5});
    CHECK(tv_distance(p, p) == 0.0);
    CHECK(hellinger_sq(p, p) == 0.0);
    CHECK(chi_sq(p, p) == 0.0);
    CHECK(tv_distance(p, q) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(chi_sq(p, q) == kInf);
    CHECK(kl_divergence(p, q) == kInf);
}

TEST_CASE("event-level data processing") {
    TrialRng rng(15, 0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t cells = 2 + rng.next_below(11);
        const FinitePMF jp = random_pmf(rng, cells);
        const FinitePMF jq = random_pmf(rng, cells);
        // Nonempty proper event; the full and empty events are exact ties
        // that rounding would turn into spurious support violations.
        const std::uint64_t mask = 1 + rng.next_below((std::uint64_t{1} << cells) - 2);
        double pe = 0.0, qe = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                pe += jp[i];
                qe += jq[i];
            }
        }
        pe = std::min(pe, 1.0);
        qe = std::min(qe, 1.0);
        CHECK(binary_kl(pe, qe) <= kl_divergence(jp, jq) + 1e-12);
    }
}

TEST_CASE("entropy chain rule on three-way joints") {
    TrialRng rng(16, 0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t na = 2 + rng.next_below(3), nb = 2 + rng.next_below(3),
                          nc = 2 + rng.next_below(3);
        const Joint3PMF j = random_joint3(rng, na, nb, nc);
        std::vector<double> pa(na, 0.0), pab(na * nb, 0.0);
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t x = 0; x < nc; ++x) {
                    pa[a] += j.at(a, b, x);
                    pab[a * nb + b] += j.at(a, b, x);
                }
        double h_a = 0.0, h_ba = 0.0, h_cab = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
            if (pa[a] > 0.0) h_a -= pa[a] * std::log(pa[a]);
            for (std::size_t b = 0; b < nb; ++b) {
                const double w = pab[a * nb + b];
                if (w > 0.0) h_ba -= w * std::log(w / pa[a]);
                for (std::size_t x = 0; x < nc; ++x) {
                    const double z = j.at(a, b, x);
                    if (z > 0.0) h_cab -= z * std::log(z / w);
                }
            }
        }
        CHECK(std::abs(entropy(j.flatten()) - (h_a + h_ba + h_cab)) <= 1e-12);
    }
}

TEST_CASE("gaussian kl") {
    CHECK(gaussian_kl(GaussianScalar(1.3, 2.0), GaussianScalar(1.3, 2.0)) == 0.0);
    CHECK(gaussian_kl(GaussianScalar(0.0, 1.0), GaussianScalar(1.0, 1.0)) == 0.5);
    CHECK(gaussian_kl(GaussianScalar(0.0, 2.0), GaussianScalar(2.0, 2.0)) == 1.0);
    CHECK_THROWS_AS(gaussian_kl(GaussianScalar(0.0, 1.0), GaussianScalar(0.0, 2.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(GaussianScalar(0.0, 0.0), std::invalid_argument);

    // Against adaptive quadrature of p(x) ln(p(x)/q(x)).
    for (double gap : {0.25, 1.0, 3.0}) {
        for (double var : {0.5, 1.0, 4.0}) {
            const double sd = std::sqrt(var);
            auto integrand = [&](double x) {
                const double density =
                    std::exp(-x * x / (2.0 * var)) / (sd * std::sqrt(2.0 * std::numbers::pi));
                const double diff = x - gap;
                return density * ((diff * diff - x * x) / (2.0 * var));
            };
            const double numeric = integrate(integrand, -12.0 * sd, gap + 12.0 * sd);
            CHECK(gaussian_kl(GaussianScalar(0.0, var), GaussianScalar(gap, var)) ==
                  doctest::Approx(numeric).epsilon(1e-6));
        }
    }
}

TEST_CASE("binary kl") {
    CHECK(binary_kl(0.3, 0.3) == 0.0);
    CHECK(binary_kl(1.0, 0.5) == doctest::Approx(ln2).epsilon(1e-15));
    CHECK(binary_kl(0.5, 0.0) == kInf);
    CHECK(binary_kl(0.5, 1.0) == kInf);
    CHECK(binary_kl(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(binary_kl(1.1, 0.5), std::invalid_argument);
}

TEST_CASE("joint marginalization yields valid pmfs") {
    TrialRng rng(17, 0);
    for (int t = 0; t < 100; ++t) {
        const JointPMF j = random_joint(rng, 2 + rng.next_below(6), 2 + rng.next_below(6));
        const FinitePMF rm = j.row_marginal();
        const FinitePMF cm = j.col_marginal();
        double sr = 0.0, sc = 0.0;
        for (std::size_t i = 0; i < rm.size(); ++i) sr += rm[i];
        for (std::size_t i = 0; i < cm.size(); ++i) sc += cm[i];
        CHECK(sr == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sc == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("channel constructors") {
    const ChannelMatrix bsc = ChannelMatrix::bsc(0.1);
    CHECK(bsc.at(0, 0) == 0.9);
    CHECK(bsc.at(1, 0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(ChannelMatrix::bsc(1.5), std::invalid_argument);
    CHECK_THROWS_AS(ChannelMatrix(std::vector<FinitePMF>{FinitePMF::uniform(2),
                                                         FinitePMF::uniform(3)}),
                    std::invalid_argument);
}

TEST_CASE("nats to bits") {
    CHECK(nats_to_bits(ln2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nats_to_bits(0.0) == 0.0);
}
