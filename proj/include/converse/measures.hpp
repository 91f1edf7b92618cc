#pragma once

// Exact information measures over finite alphabets, plus the closed-form
// equal-variance Gaussian divergence. Everything is in nats; conversion to
// bits happens only at the reporting layer (nats_to_bits).
//
// Conventions, fixed globally:
//   0 * ln 0 = 0
//   p > 0, q = 0  =>  divergence is +infinity (a propagating value, never an
//   error).

#include <cstddef>
#include <vector>

namespace converse {

// Tolerance on probability-mass sums. Inputs whose total mass is within this
// of 1 are renormalized; anything further off is rejected.
inline constexpr double kMassTolerance = 1e-12;

/// Probability mass function over an indexed finite alphabet.
class FinitePMF {
public:
    // Validates (entries in [0,1], sum within kMassTolerance of 1) and
    // renormalizes. Throws std::invalid_argument on bad input.
    explicit FinitePMF(std::vector<double> mass);

    static FinitePMF uniform(std::size_t n);
    static FinitePMF point_mass(std::size_t n, std::size_t index);

    std::size_t size() const { return mass_.size(); }
    double operator[](std::size_t i) const { return mass_[i]; }
    const std::vector<double>& mass() const { return mass_; }

private:
    std::vector<double> mass_;
};

class ChannelMatrix;

/// Joint distribution over a pair of finite alphabets, row-major.
class JointPMF {
public:
    JointPMF(std::size_t rows, std::size_t cols, std::vector<double> mass);
    static JointPMF from_prior_channel(const FinitePMF& prior, const ChannelMatrix& channel);
    static JointPMF product(const FinitePMF& a, const FinitePMF& b);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t v, std::size_t y) const { return mass_[v * cols_ + y]; }
    const std::vector<double>& mass() const { return mass_; }

    FinitePMF row_marginal() const;  // marginal over the first axis
    FinitePMF col_marginal() const;  // marginal over the second axis
    FinitePMF flatten() const;       // the joint viewed as a PMF over cells

private:
    std::size_t rows_, cols_;
    std::vector<double> mass_;
};

/// Joint distribution over a triple of finite alphabets; axis 2 is the
/// conditioning variable in conditional_mutual_information.
class Joint3PMF {
public:
    Joint3PMF(std::size_t na, std::size_t nb, std::size_t nc, std::vector<double> mass);

    std::size_t size_a() const { return na_; }
    std::size_t size_b() const { return nb_; }
    std::size_t size_c() const { return nc_; }
    double at(std::size_t a, std::size_t b, std::size_t c) const {
        return mass_[(a * nb_ + b) * nc_ + c];
    }
    const std::vector<double>& mass() const { return mass_; }
    FinitePMF flatten() const;

private:
    std::size_t na_, nb_, nc_;
    std::vector<double> mass_;
};

/// Conditional distribution P(y|v) as a row-stochastic table.
class ChannelMatrix {
public:
    explicit ChannelMatrix(std::vector<FinitePMF> rows);
    static ChannelMatrix identity(std::size_t n);
    static ChannelMatrix bsc(double crossover);  // binary symmetric channel

    std::size_t input_size() const { return rows_.size(); }
    std::size_t output_size() const { return output_size_; }
    const FinitePMF& row(std::size_t v) const { return rows_[v]; }
    double at(std::size_t v, std::size_t y) const { return rows_[v][y]; }

private:
    std::vector<FinitePMF> rows_;
    std::size_t output_size_;
};

struct GaussianScalar {
    double mean;
    double variance;
    GaussianScalar(double mean, double variance);  // variance must be > 0
};

// Builders for internally computed tables: nonnegative entries whose total is
// mathematically 1 but may drift past the strict input tolerance through
// accumulated rounding. These normalize unconditionally. User-supplied input
// must go through the validating constructors instead.
FinitePMF normalized_pmf(std::vector<double> mass);
JointPMF normalized_joint(std::size_t rows, std::size_t cols, std::vector<double> mass);
Joint3PMF normalized_joint3(std::size_t na, std::size_t nb, std::size_t nc,
                            std::vector<double> mass);

double entropy(const FinitePMF& p);
double binary_entropy(double a);

// Unique a in [0, 1/2] with binary_entropy(a) = h, found by bisection (the
// function is monotone there; derivative methods misbehave near the flat
// maximum). Absolute tolerance 1e-12 in a.
double inv_binary_entropy(double h);

double mutual_information(const JointPMF& joint);

// I(A;B|C) = sum_c P(c) I(A;B|C=c), each term computed exactly.
double conditional_mutual_information(const Joint3PMF& joint);

double kl_divergence(const FinitePMF& p, const FinitePMF& q);
double tv_distance(const FinitePMF& p, const FinitePMF& q);
double hellinger_sq(const FinitePMF& p, const FinitePMF& q);
double chi_sq(const FinitePMF& p, const FinitePMF& q);

// Equal variances required; the general-variance form is out of scope.
double gaussian_kl(const GaussianScalar& a, const GaussianScalar& b);

// a ln(a/b) + (1-a) ln((1-a)/(1-b)) with the usual zero-mass conventions.
double binary_kl(double a, double b);

// Reporting-layer conversion; the library itself works in nats only.
double nats_to_bits(double nats);

}  // namespace converse
