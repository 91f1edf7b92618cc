#include "converse/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace converse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_mass(const std::vector<double>& mass, const char* what) {
    if (mass.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty mass vector");
    }
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0) || m > 1.0 + kMassTolerance) {
            throw std::invalid_argument(std::string(what) + ": mass entry " +
                                        std::to_string(m) + " outside [0,1]");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
        throw std::invalid_argument(std::string(what) + ": total mass " +
                                    std::to_string(total) + " not 1 within tolerance");
    }
}

void renormalize(std::vector<double>& mass) {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (double& m : mass) m /= total;
}

// p * ln(p/q) with the zero-mass conventions.
double kl_term(double p, double q) {
    if (p == 0.0) return 0.0;
    if (q == 0.0) return kInf;
    return p * std::log(p / q);
}

}  // namespace

FinitePMF::FinitePMF(std::vector<double> mass) : mass_(std::move(mass)) {
    validate_mass(mass_, "FinitePMF");
    renormalize(mass_);
}

FinitePMF FinitePMF::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("FinitePMF::uniform: n must be >= 1");
    return FinitePMF(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FinitePMF FinitePMF::point_mass(std::size_t n, std::size_t index) {
    if (n == 0 || index >= n) throw std::invalid_argument("FinitePMF::point_mass: bad index");
    std::vector<double> m(n, 0.0);
    m[index] = 1.0;
    return FinitePMF(std::move(m));
}

JointPMF::JointPMF(std::size_t rows, std::size_t cols, std::vector<double> mass)
    : rows_(rows), cols_(cols), mass_(std::move(mass)) {
    if (rows_ == 0 || cols_ == 0 || mass_.size() != rows_ * cols_) {
        throw std::invalid_argument("JointPMF: dimension mismatch");
    }
    validate_mass(mass_, "JointPMF");
    renormalize(mass_);
}

JointPMF JointPMF::from_prior_channel(const FinitePMF& prior, const ChannelMatrix& channel) {
    if (prior.size() != channel.input_size()) {
        throw std::invalid_argument("JointPMF::from_prior_channel: prior/channel size mismatch");
    }
    std::vector<double> m(prior.size() * channel.output_size());
    for (std::size_t v = 0; v < prior.size(); ++v) {
        for (std::size_t y = 0; y < channel.output_size(); ++y) {
            m[v * channel.output_size() + y] = prior[v] * channel.at(v, y);
        }
    }
    return JointPMF(prior.size(), channel.output_size(), std::move(m));
}

JointPMF JointPMF::product(const FinitePMF& a, const FinitePMF& b) {
    std::vector<double> m(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m[i * b.size() + j] = a[i] * b[j];
    return JointPMF(a.size(), b.size(), std::move(m));
}

FinitePMF JointPMF::row_marginal() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t v = 0; v < rows_; ++v)
        for (std::size_t y = 0; y < cols_; ++y) m[v] += at(v, y);
    return normalized_pmf(std::move(m));
}

FinitePMF JointPMF::col_marginal() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t v = 0; v < rows_; ++v)
        for (std::size_t y = 0; y < cols_; ++y) m[y] += at(v, y);
    return normalized_pmf(std::move(m));
}

FinitePMF JointPMF::flatten() const { return FinitePMF(mass_); }

FinitePMF normalized_pmf(std::vector<double> mass) {
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0)) throw std::invalid_argument("normalized_pmf: negative mass");
        total += m;
    }
    if (!(total > 0.0)) throw std::invalid_argument("normalized_pmf: zero total mass");
    for (double& m : mass) m /= total;
    return FinitePMF(std::move(mass));
}

JointPMF normalized_joint(std::size_t rows, std::size_t cols, std::vector<double> mass) {
    const FinitePMF flat = normalized_pmf(std::move(mass));
    return JointPMF(rows, cols, flat.mass());
}

Joint3PMF normalized_joint3(std::size_t na, std::size_t nb, std::size_t nc,
                            std::vector<double> mass) {
    const FinitePMF flat = normalized_pmf(std::move(mass));
    return Joint3PMF(na, nb, nc, flat.mass());
}

Joint3PMF::Joint3PMF(std::size_t na, std::size_t nb, std::size_t nc, std::vector<double> mass)
    : na_(na), nb_(nb), nc_(nc), mass_(std::move(mass)) {
    if (na_ == 0 || nb_ == 0 || nc_ == 0 || mass_.size() != na_ * nb_ * nc_) {
        throw std::invalid_argument("Joint3PMF: dimension mismatch");
    }
    validate_mass(mass_, "Joint3PMF");
    renormalize(mass_);
}

FinitePMF Joint3PMF::flatten() const { return FinitePMF(mass_); }

ChannelMatrix::ChannelMatrix(std::vector<FinitePMF> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("ChannelMatrix: no rows");
    output_size_ = rows_.front().size();
    for (const auto& r : rows_) {
        if (r.size() != output_size_) {
            throw std::invalid_argument("ChannelMatrix: ragged rows");
        }
    }
}

ChannelMatrix ChannelMatrix::identity(std::size_t n) {
    std::vector<FinitePMF> rows;
    rows.reserve(n);
    for (std::size_t v = 0; v < n; ++v) rows.push_back(FinitePMF::point_mass(n, v));
    return ChannelMatrix(std::move(rows));
}

ChannelMatrix ChannelMatrix::bsc(double crossover) {
    if (!(crossover >= 0.0 && crossover <= 1.0)) {
        throw std::invalid_argument("ChannelMatrix::bsc: crossover outside [0,1]");
    }
    std::vector<FinitePMF> rows;
    rows.push_back(FinitePMF({1.0 - crossover, crossover}));
    rows.push_back(FinitePMF({crossover, 1.0 - crossover}));
    return ChannelMatrix(std::move(rows));
}

GaussianScalar::GaussianScalar(double mean, double variance) : mean(mean), variance(variance) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("GaussianScalar: variance must be strictly positive");
    }
}

double entropy(const FinitePMF& p) {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p[i];
        if (pi > 0.0) h -= pi * std::log(pi);
    }
    return h;
}

double binary_entropy(double a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("binary_entropy: argument outside [0,1]");
    }
    double h = 0.0;
    if (a > 0.0) h += a * std::log(1.0 / a);
    if (a < 1.0) h += (1.0 - a) * std::log(1.0 / (1.0 - a));
    return h;
}

double inv_binary_entropy(double h) {
    constexpr double ln2 = std::numbers::ln2;
    if (!(h >= 0.0 && h <= ln2)) {
        throw std::invalid_argument("inv_binary_entropy: argument outside [0, ln 2]");
    }
    if (h == 0.0) return 0.0;
    if (h >= ln2) return 0.5;
    double lo = 0.0, hi = 0.5;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < h) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mutual_information(const JointPMF& joint) {
    const FinitePMF pv = joint.row_marginal();
    const FinitePMF py = joint.col_marginal();
    double mi = 0.0;
    for (std::size_t v = 0; v < joint.rows(); ++v) {
        for (std::size_t y = 0; y < joint.cols(); ++y) {
            const double pvy = joint.at(v, y);
            if (pvy > 0.0) mi += pvy * std::log(pvy / (pv[v] * py[y]));
        }
    }
    return std::max(mi, 0.0);
}

double conditional_mutual_information(const Joint3PMF& joint) {
    const std::size_t na = joint.size_a(), nb = joint.size_b(), nc = joint.size_c();
    double cmi = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        double pc = 0.0;
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b) pc += joint.at(a, b, c);
        if (pc == 0.0) continue;
        std::vector<double> slice(na * nb);
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b) slice[a * nb + b] = joint.at(a, b, c) / pc;
        cmi += pc * mutual_information(normalized_joint(na, nb, std::move(slice)));
    }
    return cmi;
}

double kl_divergence(const FinitePMF& p, const FinitePMF& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("kl_divergence: alphabet size mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double t = kl_term(p[i], q[i]);
        if (t == kInf) return kInf;
        d += t;
    }
    return std::max(d, 0.0);
}

double tv_distance(const FinitePMF& p, const FinitePMF& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("tv_distance: alphabet size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

double hellinger_sq(const FinitePMF& p, const FinitePMF& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("hellinger_sq: alphabet size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
        s += d * d;
    }
    return s;
}

double chi_sq(const FinitePMF& p, const FinitePMF& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("chi_sq: alphabet size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - q[i];
        if (d == 0.0) continue;
        if (q[i] == 0.0) return kInf;  // p puts mass where q has none
        s += d * d / q[i];
    }
    return s;
}

double gaussian_kl(const GaussianScalar& a, const GaussianScalar& b) {
    if (a.variance != b.variance) {
        throw std::invalid_argument("gaussian_kl: variances must match");
    }
    const double d = a.mean - b.mean;
    return d * d / (2.0 * a.variance);
}

double binary_kl(double a, double b) {
    if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
        throw std::invalid_argument("binary_kl: arguments outside [0,1]");
    }
    const double t0 = kl_term(a, b);
    if (t0 == kInf) return kInf;
    const double t1 = kl_term(1.0 - a, 1.0 - b);
    if (t1 == kInf) return kInf;
    return std::max(t0 + t1, 0.0);
}

double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

}  // namespace converse
