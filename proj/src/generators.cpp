#include "converse/generators.hpp"

#include <cmath>

namespace converse {

FinitePMF random_pmf(TrialRng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (double& x : w) x = -std::log(1.0 - rng.next_double());
    return normalized_pmf(std::move(w));
}

FinitePMF random_pmf_with_zeros(TrialRng& rng, std::size_t n, double zero_prob) {
    std::vector<double> w(n, 0.0);
    bool any = false;
    for (double& x : w) {
        if (rng.next_double() >= zero_prob) {
            x = -std::log(1.0 - rng.next_double());
            any = true;
        }
    }
    if (!any) w[rng.next_below(n)] = 1.0;
    return normalized_pmf(std::move(w));
}

ChannelMatrix random_channel(TrialRng& rng, std::size_t inputs, std::size_t outputs) {
    std::vector<FinitePMF> rows;
    rows.reserve(inputs);
    for (std::size_t v = 0; v < inputs; ++v) rows.push_back(random_pmf(rng, outputs));
    return ChannelMatrix(std::move(rows));
}

JointPMF random_joint(TrialRng& rng, std::size_t rows, std::size_t cols) {
    std::vector<double> w(rows * cols);
    for (double& x : w) x = -std::log(1.0 - rng.next_double());
    const FinitePMF flat = normalized_pmf(std::move(w));
    return JointPMF(rows, cols, flat.mass());
}

Joint3PMF random_joint3(TrialRng& rng, std::size_t na, std::size_t nb, std::size_t nc) {
    std::vector<double> w(na * nb * nc);
    for (double& x : w) x = -std::log(1.0 - rng.next_double());
    const FinitePMF flat = normalized_pmf(std::move(w));
    return Joint3PMF(na, nb, nc, flat.mass());
}

RecoveryCriterion random_criterion(TrialRng& rng, std::size_t v_size, std::size_t vhat_size,
                                   double t_lo, double t_hi) {
    std::vector<double> d(v_size * vhat_size);
    for (double& x : d) x = rng.next_double();
    const double t = t_lo + (t_hi - t_lo) * rng.next_double();
    return RecoveryCriterion(v_size, vhat_size, std::move(d), t);
}

std::vector<std::array<double, 2>> random_planar_points(TrialRng& rng, std::size_t n) {
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {rng.next_double(), rng.next_double()};
    return pts;
}

}  // namespace converse
