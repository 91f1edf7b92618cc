#include "converse/mi_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace converse {

HypothesisFamily::HypothesisFamily(FinitePMF prior, ChannelMatrix channel)
    : prior(std::move(prior)), channel(std::move(channel)) {
    if (this->prior.size() != this->channel.input_size()) {
        throw std::invalid_argument("HypothesisFamily: prior length must match channel inputs");
    }
}

AvgMax mi_upper_aux(const HypothesisFamily& fam, const FinitePMF& q) {
    if (q.size() != fam.channel.output_size()) {
        throw std::invalid_argument("mi_upper_aux: auxiliary distribution has wrong length");
    }
    double avg = 0.0, mx = 0.0;
    for (std::size_t v = 0; v < fam.prior.size(); ++v) {
        const double d = kl_divergence(fam.channel.row(v), q);
        avg += fam.prior[v] * d;
        mx = std::max(mx, d);
    }
    return {avg, mx};
}

AvgMax mi_upper_pairwise(const HypothesisFamily& fam) {
    double avg = 0.0, mx = 0.0;
    for (std::size_t v = 0; v < fam.prior.size(); ++v) {
        for (std::size_t w = 0; w < fam.prior.size(); ++w) {
            const double d = kl_divergence(fam.channel.row(v), fam.channel.row(w));
            avg += fam.prior[v] * fam.prior[w] * d;
            mx = std::max(mx, d);
        }
    }
    return {avg, mx};
}

double mi_upper_covering(const HypothesisFamily& fam, const std::vector<FinitePMF>& centers,
                         double eps) {
    if (centers.empty()) throw std::invalid_argument("mi_upper_covering: no centers");
    if (eps < 0.0) throw std::invalid_argument("mi_upper_covering: negative radius");
    for (std::size_t v = 0; v < fam.prior.size(); ++v) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) best = std::min(best, kl_divergence(fam.channel.row(v), c));
        if (!(best <= eps + 1e-12)) {
            throw std::invalid_argument("mi_upper_covering: covering condition violated at v=" +
                                        std::to_string(v) + " with minimal divergence " +
                                        std::to_string(best));
        }
    }
    return std::log(static_cast<double>(centers.size())) + eps;
}

ProductModel::ProductModel(std::vector<ChannelMatrix> channels)
    : per_sample_channels(std::move(channels)) {
    if (per_sample_channels.empty()) throw std::invalid_argument("ProductModel: no channels");
    const std::size_t in = per_sample_channels.front().input_size();
    for (const auto& ch : per_sample_channels) {
        if (ch.input_size() != in) {
            throw std::invalid_argument("ProductModel: channels must share input size");
        }
    }
}

TensorizationBound tensorization_upper(const ProductModel& pm, const FinitePMF& prior) {
    if (prior.size() != pm.input_size()) {
        throw std::invalid_argument("tensorization_upper: prior length mismatch");
    }
    TensorizationBound out;
    for (const auto& ch : pm.per_sample_channels) {
        out.per_sample_sum += mutual_information(JointPMF::from_prior_channel(prior, ch));
    }

    // Expand the full joint over (V, Y_1..Y_n) when it fits.
    std::size_t cells = prior.size();
    for (const auto& ch : pm.per_sample_channels) {
        if (cells > kExhaustiveCellCap / ch.output_size()) return out;  // unverified
        cells *= ch.output_size();
    }
    const std::size_t n_outcomes = cells / prior.size();
    std::vector<double> joint(cells);
    for (std::size_t v = 0; v < prior.size(); ++v) {
        for (std::size_t idx = 0; idx < n_outcomes; ++idx) {
            double prob = prior[v];
            std::size_t rem = idx;
            for (const auto& ch : pm.per_sample_channels) {
                prob *= ch.at(v, rem % ch.output_size());
                rem /= ch.output_size();
            }
            joint[v * n_outcomes + idx] = prob;
        }
    }
    out.exact_joint_mi =
        mutual_information(normalized_joint(prior.size(), n_outcomes, std::move(joint)));
    out.verified = true;
    if (out.exact_joint_mi > out.per_sample_sum + 1e-12) {
        throw std::logic_error("tensorization_upper: exact joint information exceeds the bound");
    }
    return out;
}

AdaptivePolicyTree AdaptivePolicyTree::non_adaptive(std::size_t x_size, std::size_t y_size,
                                                    std::vector<std::vector<FinitePMF>> channels,
                                                    std::vector<std::size_t> inputs) {
    AdaptivePolicyTree tree;
    tree.horizon = inputs.size();
    tree.x_size = x_size;
    tree.y_size = y_size;
    tree.sample_channels = std::move(channels);
    tree.policy = [inputs = std::move(inputs)](
                      const std::vector<std::pair<std::size_t, std::size_t>>& history) {
        return inputs.at(history.size());
    };
    return tree;
}

namespace {

void validate_tree(const AdaptivePolicyTree& tree, const FinitePMF& prior) {
    if (tree.horizon == 0) throw std::invalid_argument("adaptive tree: zero horizon");
    if (tree.sample_channels.size() != prior.size()) {
        throw std::invalid_argument("adaptive tree: one channel row per hypothesis required");
    }
    for (const auto& per_x : tree.sample_channels) {
        if (per_x.size() != tree.x_size) {
            throw std::invalid_argument("adaptive tree: one channel per input required");
        }
        for (const auto& pmf : per_x) {
            if (pmf.size() != tree.y_size) {
                throw std::invalid_argument("adaptive tree: sample alphabet mismatch");
            }
        }
    }
    if (!tree.policy) throw std::invalid_argument("adaptive tree: missing policy");
    std::size_t paths = 1;
    for (std::size_t i = 0; i < tree.horizon; ++i) {
        if (paths > kExhaustiveCellCap / tree.y_size) {
            throw std::invalid_argument("adaptive tree: exhaustion cap exceeded");
        }
        paths *= tree.y_size;
    }
    if (paths * prior.size() > kExhaustiveCellCap) {
        throw std::invalid_argument("adaptive tree: exhaustion cap exceeded");
    }
}

}  // namespace

AdaptiveTensorizationBound adaptive_tensorization_upper(const AdaptivePolicyTree& tree,
                                                        const FinitePMF& prior) {
    validate_tree(tree, prior);
    const std::size_t nv = prior.size(), n = tree.horizon, ny = tree.y_size, nx = tree.x_size;

    std::size_t n_paths = 1;
    for (std::size_t i = 0; i < n; ++i) n_paths *= ny;

    // The input sequence is a deterministic function of the sample path, so
    // the joint over (V, X^n, Y^n) is carried by (v, y-path) alone.
    std::vector<double> path_joint(nv * n_paths, 0.0);
    // Per-step joints over (v, x_i, y_i).
    std::vector<std::vector<double>> step_joint(n, std::vector<double>(nv * nx * ny, 0.0));

    std::vector<std::pair<std::size_t, std::size_t>> history;
    std::vector<std::size_t> path(n);

    // Depth-first over sample paths, carrying per-hypothesis path weights.
    auto descend = [&](auto&& self, std::size_t depth, std::vector<double> weights) -> void {
        if (depth == n) {
            std::size_t idx = 0;
            for (std::size_t i = n; i-- > 0;) idx = idx * ny + path[i];
            for (std::size_t v = 0; v < nv; ++v) path_joint[v * n_paths + idx] += weights[v];
            return;
        }
        const std::size_t x = tree.policy(history);
        if (x >= nx) throw std::invalid_argument("adaptive tree: policy returned invalid input");
        for (std::size_t y = 0; y < ny; ++y) {
            std::vector<double> next(nv);
            for (std::size_t v = 0; v < nv; ++v) {
                next[v] = weights[v] * tree.sample_channels[v][x][y];
                step_joint[depth][(v * nx + x) * ny + y] += next[v];
            }
            path[depth] = y;
            history.emplace_back(x, y);
            self(self, depth + 1, std::move(next));
            history.pop_back();
        }
    };
    std::vector<double> root(nv);
    for (std::size_t v = 0; v < nv; ++v) root[v] = prior[v];
    descend(descend, 0, std::move(root));

    AdaptiveTensorizationBound out;
    for (std::size_t i = 0; i < n; ++i) {
        out.per_step_sum +=
            conditional_mutual_information(normalized_joint3(nv, ny, nx, [&] {
                // Reorder (v,x,y) storage into (v,y,x) so x conditions.
                std::vector<double> m(nv * ny * nx);
                for (std::size_t v = 0; v < nv; ++v)
                    for (std::size_t x = 0; x < nx; ++x)
                        for (std::size_t y = 0; y < ny; ++y)
                            m[(v * ny + y) * nx + x] = step_joint[i][(v * nx + x) * ny + y];
                return m;
            }()));
    }
    out.exact_joint_mi = mutual_information(normalized_joint(nv, n_paths, std::move(path_joint)));
    if (out.exact_joint_mi > out.per_step_sum + 1e-12) {
        throw std::logic_error(
            "adaptive_tensorization_upper: exact joint information exceeds the bound");
    }
    return out;
}

DpiCheck dpi_check(const FinitePMF& prior, const ChannelMatrix& v_to_y,
                   const ChannelMatrix& y_to_vhat) {
    if (prior.size() != v_to_y.input_size() || v_to_y.output_size() != y_to_vhat.input_size()) {
        throw std::invalid_argument("dpi_check: chain dimensions do not compose");
    }
    const std::size_t nv = prior.size(), ny = v_to_y.output_size(),
                      nw = y_to_vhat.output_size();
    std::vector<double> end_joint(nv * nw, 0.0);
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t y = 0; y < ny; ++y) {
            const double pvy = prior[v] * v_to_y.at(v, y);
            for (std::size_t w = 0; w < nw; ++w) end_joint[v * nw + w] += pvy * y_to_vhat.at(y, w);
        }
    }
    DpiCheck out{};
    out.lhs = mutual_information(normalized_joint(nv, nw, std::move(end_joint)));
    out.rhs = mutual_information(JointPMF::from_prior_channel(prior, v_to_y));
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

}  // namespace converse
