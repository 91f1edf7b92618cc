#include "converse/fano.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace converse {

namespace {
constexpr double ln2 = std::numbers::ln2;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

RecoveryCriterion::RecoveryCriterion(std::size_t v_size, std::size_t vhat_size,
                                     std::vector<double> distance, double threshold)
    : v_size(v_size), vhat_size(vhat_size), distance(std::move(distance)), threshold(threshold) {
    if (v_size == 0 || vhat_size == 0 || this->distance.size() != v_size * vhat_size) {
        throw std::invalid_argument("RecoveryCriterion: dimension mismatch");
    }
}

RecoveryCriterion RecoveryCriterion::equality(std::size_t n) {
    std::vector<double> d(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    return RecoveryCriterion(n, n, std::move(d), 0.0);
}

NeighborhoodCounts neighborhood_counts(const RecoveryCriterion& rc) {
    NeighborhoodCounts out;
    out.per_vhat.resize(rc.vhat_size, 0);
    for (std::size_t vhat = 0; vhat < rc.vhat_size; ++vhat) {
        std::size_t c = 0;
        for (std::size_t v = 0; v < rc.v_size; ++v) {
            if (rc.at(v, vhat) <= rc.threshold) ++c;
        }
        out.per_vhat[vhat] = c;
    }
    out.n_max = *std::max_element(out.per_vhat.begin(), out.per_vhat.end());
    out.n_min = *std::min_element(out.per_vhat.begin(), out.per_vhat.end());
    return out;
}

double fano_entropy_rhs(double pe, std::size_t m) {
    if (m < 2) throw std::invalid_argument("fano_entropy_rhs: alphabet size must be >= 2");
    return binary_entropy(pe) + pe * std::log(static_cast<double>(m - 1));
}

double fano_pe_lower(double mi, std::size_t m) {
    if (m < 2) throw std::invalid_argument("fano_pe_lower: alphabet size must be >= 2");
    if (mi < 0.0) throw std::invalid_argument("fano_pe_lower: negative mutual information");
    return clamp01(1.0 - (mi + ln2) / std::log(static_cast<double>(m)));
}

double fano_pe_lower_binary(double mi) {
    if (mi < 0.0) throw std::invalid_argument("fano_pe_lower_binary: negative mutual information");
    return inv_binary_entropy(std::clamp(ln2 - mi, 0.0, ln2));
}

double approx_fano_pe_lower(double mi, std::size_t m, std::size_t n_max) {
    if (n_max < 1 || n_max >= m) {
        throw std::invalid_argument("approx_fano_pe_lower: need 1 <= n_max < m");
    }
    if (mi < 0.0) throw std::invalid_argument("approx_fano_pe_lower: negative mutual information");
    const double log_ratio = std::log(static_cast<double>(m) / static_cast<double>(n_max));
    return clamp01(1.0 - (mi + ln2) / log_ratio);
}

double approx_fano_entropy_rhs(double pe_t, std::size_t m, std::size_t n_max, std::size_t n_min) {
    if (n_max == 0) throw std::invalid_argument("approx_fano_entropy_rhs: n_max must be >= 1");
    if (n_min > n_max || n_max > m) {
        throw std::invalid_argument("approx_fano_entropy_rhs: need n_min <= n_max <= m");
    }
    double rhs = binary_entropy(pe_t) + std::log(static_cast<double>(n_max));
    if (pe_t > 0.0) {
        rhs += pe_t * std::log(static_cast<double>(m - n_min) / static_cast<double>(n_max));
    }
    return rhs;
}

double conditional_fano_pe_lower(const std::vector<ConditionalFanoEntry>& entries) {
    double total_weight = 0.0;
    double bound = 0.0;
    for (const auto& e : entries) {
        if (e.support_size <= 2) {
            throw std::invalid_argument(
                "conditional_fano_pe_lower: block support size must be >= 3; restructure binary "
                "blocks through the binary form");
        }
        if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
            throw std::invalid_argument("conditional_fano_pe_lower: weight outside [0,1]");
        }
        if (e.cond_entropy < 0.0 ||
            e.cond_entropy > std::log(static_cast<double>(e.support_size)) + 1e-9) {
            throw std::invalid_argument(
                "conditional_fano_pe_lower: conditional entropy outside [0, ln support]");
        }
        total_weight += e.weight;
        const double denom = std::log(static_cast<double>(e.support_size - 1));
        bound += e.weight * std::max(0.0, (e.cond_entropy - ln2) / denom);
    }
    if (total_weight > 1.0 + 1e-12) {
        throw std::invalid_argument("conditional_fano_pe_lower: weights sum above 1");
    }
    return clamp01(bound);
}

VolumeRatio::VolumeRatio(double total_volume, double sup_ball_volume)
    : total_volume(total_volume), sup_ball_volume(sup_ball_volume) {
    if (!(total_volume > 0.0) || !(sup_ball_volume > 0.0)) {
        throw std::invalid_argument("VolumeRatio: volumes must be strictly positive");
    }
    if (sup_ball_volume > total_volume) {
        throw std::invalid_argument("VolumeRatio: ball volume exceeds total volume");
    }
}

double continuum_fano_pe_lower(double mi, const VolumeRatio& vr) {
    if (mi < 0.0) throw std::invalid_argument("continuum_fano_pe_lower: negative mutual information");
    if (vr.sup_ball_volume == vr.total_volume) {
        throw std::invalid_argument("continuum_fano_pe_lower: volume ratio 1 gives a zero denominator");
    }
    const double log_ratio = std::log(vr.total_volume / vr.sup_ball_volume);
    return clamp01(1.0 - (mi + ln2) / log_ratio);
}

double box_volume(const std::vector<double>& side_lengths) {
    if (side_lengths.empty()) throw std::invalid_argument("box_volume: empty side list");
    double v = 1.0;
    for (double s : side_lengths) {
        if (!(s > 0.0)) throw std::invalid_argument("box_volume: sides must be positive");
        v *= s;
    }
    return v;
}

double l2_ball_volume(std::size_t dim, double radius) {
    if (dim == 0 || !(radius > 0.0)) throw std::invalid_argument("l2_ball_volume: bad arguments");
    const double p = static_cast<double>(dim);
    return std::exp(0.5 * p * std::log(std::numbers::pi) - std::lgamma(0.5 * p + 1.0) +
                    p * std::log(radius));
}

double linf_ball_volume(std::size_t dim, double radius) {
    if (dim == 0 || !(radius > 0.0)) throw std::invalid_argument("linf_ball_volume: bad arguments");
    return std::pow(2.0 * radius, static_cast<double>(dim));
}

}  // namespace converse
