#include "converse/specio.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "converse/mi_bounds.hpp"
#include "converse/oracle.hpp"

namespace converse {

using nlohmann::json;

namespace {

// Rejects keys outside the allowed set; strict schema everywhere.
void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& where) {
    if (!obj.is_object()) {
        throw std::invalid_argument(where + ": expected a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw std::invalid_argument(where + ": unknown field \"" + key + "\"");
        }
    }
    for (const auto& key : required) {
        if (!obj.contains(key)) {
            throw std::invalid_argument(where + ": missing field \"" + key + "\"");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw std::invalid_argument(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw std::invalid_argument(where + ": \"" + key + "\" must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line/column for the message.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::invalid_argument(path + ":" + std::to_string(line) + ":" +
                                    std::to_string(col) + ": " + e.what());
    }
}

ProblemMode parse_mode(const json& doc, const std::string& where) {
    if (!doc.contains("mode")) return ProblemMode::exact;
    const std::string m = doc.at("mode").get<std::string>();
    if (m == "exact") return ProblemMode::exact;
    if (m == "approximate") return ProblemMode::approximate;
    if (m == "adaptive") return ProblemMode::adaptive;
    throw std::invalid_argument(where + ": unknown mode \"" + m + "\"");
}

}  // namespace

std::string canonical_digest(const json& doc) {
    // nlohmann stores object keys sorted, so dump() is canonical.
    const std::string canon = doc.dump();
    unsigned char hash[EVP_MAX_MD_SIZE];
    unsigned int hash_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, canon.data(), canon.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, hash, &hash_len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("canonical_digest: hashing failed");
    }
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int i = 0; i < hash_len; ++i) {
        out += hex[hash[i] >> 4];
        out += hex[hash[i] & 0xf];
    }
    return out;
}

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

FinitePMF pmf_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("pmf: expected a nonempty array");
    std::vector<double> mass;
    mass.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw std::invalid_argument("pmf: entries must be numbers");
        mass.push_back(v.get<double>());
    }
    return FinitePMF(std::move(mass));
}

json pmf_to_json(const FinitePMF& p) {
    json j = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) j.push_back(p[i]);
    return j;
}

ChannelMatrix channel_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("channel: expected a nonempty array of rows");
    }
    std::vector<FinitePMF> rows;
    rows.reserve(j.size());
    for (const auto& row : j) rows.push_back(pmf_from_json(row));
    return ChannelMatrix(std::move(rows));
}

json channel_to_json(const ChannelMatrix& ch) {
    json j = json::array();
    for (std::size_t v = 0; v < ch.input_size(); ++v) j.push_back(pmf_to_json(ch.row(v)));
    return j;
}

MetricPointSet metric_point_set_from_json(const json& j) {
    require_keys(j, {"points", "distance_matrix", "is_metric"}, {}, "point set");
    if (j.contains("points") == j.contains("distance_matrix")) {
        throw std::invalid_argument(
            "point set: provide exactly one of \"points\" and \"distance_matrix\"");
    }
    if (j.contains("points")) {
        std::vector<std::array<double, 2>> pts;
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != 2) {
                throw std::invalid_argument("point set: each point must be [x, y]");
            }
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return MetricPointSet::from_planar_points(pts);
    }
    std::vector<std::vector<double>> dist;
    for (const auto& row : j.at("distance_matrix")) {
        dist.push_back(row.get<std::vector<double>>());
    }
    const bool is_metric = j.value("is_metric", false);
    return MetricPointSet::from_distance_matrix(std::move(dist), is_metric);
}

ProblemSpec parse_problem_spec(const json& doc) {
    require_keys(doc, {"kind", "mode", "parameters"}, {"kind", "parameters"}, "spec");
    ProblemSpec spec;
    spec.digest = canonical_digest(doc);
    const std::string kind = doc.at("kind").get<std::string>();
    spec.mode = parse_mode(doc, "spec");
    const json& par = doc.at("parameters");

    if (kind == "group-testing") {
        spec.kind = ProblemKind::group_testing;
        require_keys(par, {"p", "k", "eps", "delta", "L", "alpha"}, {"p", "k", "eps", "delta"},
                     "group-testing");
        GroupTestingSpec g;
        g.p = get_count(par, "p", "group-testing");
        g.k = get_count(par, "k", "group-testing");
        g.eps = get_number(par, "eps", "group-testing");
        g.delta = get_number(par, "delta", "group-testing");
        if (spec.mode == ProblemMode::approximate) {
            require_keys(par, {"p", "k", "eps", "delta", "L", "alpha"}, {"L", "alpha"},
                         "group-testing (approximate)");
            g.list_size = get_count(par, "L", "group-testing");
            g.alpha = get_number(par, "alpha", "group-testing");
        }
        spec.group_testing = g;
    } else if (kind == "ising") {
        spec.kind = ProblemKind::ising;
        require_keys(par, {"p", "lambda", "delta", "alpha"}, {"p", "lambda", "delta"}, "ising");
        IsingSpec is;
        is.p = get_count(par, "p", "ising");
        is.lambda = get_number(par, "lambda", "ising");
        is.delta = get_number(par, "delta", "ising");
        if (spec.mode == ProblemMode::approximate) {
            require_keys(par, {"p", "lambda", "delta", "alpha"}, {"alpha"}, "ising (approximate)");
            is.alpha = get_number(par, "alpha", "ising");
        }
        spec.ising = is;
    } else if (kind == "erdos-renyi") {
        spec.kind = ProblemKind::erdos_renyi;
        require_keys(par, {"p", "q", "delta"}, {"p", "q", "delta"}, "erdos-renyi");
        spec.erdos_renyi = ProblemSpec::ErdosRenyi{get_count(par, "p", "erdos-renyi"),
                                                   get_number(par, "q", "erdos-renyi"),
                                                   get_number(par, "delta", "erdos-renyi")};
    } else if (kind == "sparse-regression") {
        spec.kind = ProblemKind::sparse_regression;
        require_keys(par, {"p", "k", "sigma", "frob_sq", "delta", "n"},
                     {"p", "k", "sigma", "frob_sq"}, "sparse-regression");
        SparseRegressionSpec s;
        s.p = get_count(par, "p", "sparse-regression");
        s.k = get_count(par, "k", "sparse-regression");
        s.sigma = get_number(par, "sigma", "sparse-regression");
        s.frob_sq = get_number(par, "frob_sq", "sparse-regression");
        if (par.contains("delta")) s.delta = get_number(par, "delta", "sparse-regression");
        if (par.contains("n")) s.n = get_count(par, "n", "sparse-regression");
        spec.sparse_regression = s;
    } else if (kind == "density") {
        spec.kind = ProblemKind::density;
        require_keys(par, {"eta", "c_lo", "c_hi", "n", "delta"}, {"eta", "c_lo", "c_hi", "n"},
                     "density");
        DensitySpec d;
        d.eta = get_number(par, "eta", "density");
        d.c_lo = get_number(par, "c_lo", "density");
        d.c_hi = get_number(par, "c_hi", "density");
        d.n = get_count(par, "n", "density");
        if (par.contains("delta")) d.delta = get_number(par, "delta", "density");
        spec.density = d;
    } else if (kind == "convex-opt") {
        spec.kind = ProblemKind::convex_opt;
        require_keys(par, {"sigma", "delta", "eps", "eps_prime"}, {"sigma", "delta"},
                     "convex-opt");
        ConvexOptSpec c;
        c.sigma = get_number(par, "sigma", "convex-opt");
        c.delta = get_number(par, "delta", "convex-opt");
        if (par.contains("eps")) c.eps = get_number(par, "eps", "convex-opt");
        if (par.contains("eps_prime")) c.eps_prime = get_number(par, "eps_prime", "convex-opt");
        if ((c.eps != 0.0 || c.eps_prime != 0.0) &&
            !(0.0 < c.eps && c.eps < c.eps_prime && c.eps_prime < 0.125)) {
            throw std::invalid_argument("convex-opt: need 0 < eps < eps_prime < 1/8");
        }
        spec.convex_opt = c;
    } else if (kind == "generic-hypothesis-test") {
        spec.kind = ProblemKind::generic_hypothesis_test;
        require_keys(par, {"prior", "channel", "criterion"}, {"prior", "channel"},
                     "generic-hypothesis-test");
        ProblemSpec::GenericTest g(pmf_from_json(par.at("prior")),
                                   channel_from_json(par.at("channel")));
        if (g.prior.size() != g.channel.input_size()) {
            throw std::invalid_argument("generic-hypothesis-test: prior/channel size mismatch");
        }
        if (spec.mode == ProblemMode::approximate) {
            require_keys(par, {"prior", "channel", "criterion"}, {"criterion"},
                         "generic-hypothesis-test (approximate)");
            const json& c = par.at("criterion");
            require_keys(c, {"distance", "threshold"}, {"distance", "threshold"}, "criterion");
            std::vector<std::vector<double>> rows;
            for (const auto& r : c.at("distance")) rows.push_back(r.get<std::vector<double>>());
            if (rows.empty() || rows.size() != g.prior.size()) {
                throw std::invalid_argument("criterion: distance table must have one row per v");
            }
            const std::size_t vhat = rows.front().size();
            std::vector<double> flat;
            for (const auto& r : rows) {
                if (r.size() != vhat) throw std::invalid_argument("criterion: ragged table");
                flat.insert(flat.end(), r.begin(), r.end());
            }
            g.criterion = RecoveryCriterion(rows.size(), vhat, std::move(flat),
                                            get_number(c, "threshold", "criterion"));
        } else if (spec.mode == ProblemMode::adaptive) {
            throw std::invalid_argument("generic-hypothesis-test: no adaptive mode");
        }
        spec.generic = std::move(g);
    } else {
        throw std::invalid_argument("spec: unknown kind \"" + kind + "\"");
    }
    return spec;
}

ProblemSpec load_problem_spec(const std::string& path) {
    return parse_problem_spec(load_json_file(path));
}

SimSpec parse_sim_spec(const json& doc) {
    require_keys(doc, {"kind", "parameters", "n_values", "decoder", "trials", "seed"},
                 {"kind", "parameters", "n_values"}, "sim spec");
    if (doc.at("kind").get<std::string>() != "group-testing") {
        throw std::invalid_argument("sim spec: only group-testing simulation is supported");
    }
    SimSpec sim;
    sim.digest = canonical_digest(doc);
    const json& par = doc.at("parameters");
    require_keys(par, {"p", "k", "eps", "nu"}, {"p", "k", "eps"}, "sim parameters");
    sim.gt.p = get_count(par, "p", "sim");
    sim.gt.k = get_count(par, "k", "sim");
    sim.gt.eps = get_number(par, "eps", "sim");
    sim.nu = par.contains("nu") ? get_number(par, "nu", "sim")
                                : 1.0 / static_cast<double>(sim.gt.k);
    for (const auto& n : doc.at("n_values")) {
        if (!n.is_number_unsigned()) throw std::invalid_argument("sim spec: n_values must be counts");
        sim.n_values.push_back(n.get<std::size_t>());
    }
    if (sim.n_values.empty()) throw std::invalid_argument("sim spec: n_values is empty");
    const std::string dec = doc.value("decoder", "map");
    if (dec == "map") {
        sim.decoder = GtDecoder::map;
    } else if (dec == "plug-in") {
        sim.decoder = GtDecoder::plugin;
    } else {
        throw std::invalid_argument("sim spec: unknown decoder \"" + dec + "\"");
    }
    sim.trials = doc.value("trials", std::uint64_t{1000});
    sim.seed = doc.value("seed", std::uint64_t{1});
    if (sim.trials == 0) throw std::invalid_argument("sim spec: trials must be >= 1");
    return sim;
}

SimSpec load_sim_spec(const std::string& path) { return parse_sim_spec(load_json_file(path)); }

BoundReport evaluate_problem_spec(const ProblemSpec& spec) {
    switch (spec.kind) {
        case ProblemKind::group_testing:
            if (spec.mode == ProblemMode::approximate) {
                return gt_approx_tests_lower(*spec.group_testing);
            }
            // The exact-recovery bound covers adaptive designs as well.
            return gt_exact_tests_lower(*spec.group_testing);
        case ProblemKind::ising:
            switch (spec.mode) {
                case ProblemMode::approximate:
                    return ising_approx_samples_lower(*spec.ising);
                case ProblemMode::adaptive:
                    return ising_adaptive_nodes_lower(*spec.ising);
                case ProblemMode::exact:
                    break;
            }
            return ising_exact_samples_lower(*spec.ising);
        case ProblemKind::erdos_renyi:
            return erdos_renyi_samples_lower(spec.erdos_renyi->p, spec.erdos_renyi->q,
                                             spec.erdos_renyi->delta);
        case ProblemKind::sparse_regression:
            return sparse_minimax_risk_lower(*spec.sparse_regression);
        case ProblemKind::density:
            return density_minimax_risk_lower(*spec.density);
        case ProblemKind::convex_opt:
            return scvx_queries_lower(*spec.convex_opt);
        case ProblemKind::generic_hypothesis_test:
            break;
    }

    // Generic hypothesis test: exact information quantities plus the Fano
    // floor and the Bayes-optimal benchmark.
    const auto& g = *spec.generic;
    const double mi = mutual_information(JointPMF::from_prior_channel(g.prior, g.channel));
    BoundReport r;
    r.units = "error probability";
    r.intermediates["exact_mi"] = mi;
    r.intermediates["bayes_optimal_error"] = bayes_optimal_error(g.prior, g.channel);
    const std::size_t m = g.prior.size();
    if (spec.mode == ProblemMode::approximate) {
        const auto counts = neighborhood_counts(*g.criterion);
        r.intermediates["n_max"] = static_cast<double>(counts.n_max);
        r.intermediates["n_min"] = static_cast<double>(counts.n_min);
        if (counts.n_max >= m) {
            r.bound_value = 0.0;
            r.vacuous = true;
            r.notes = {"ambiguity neighborhood covers the whole alphabet; bound is vacuous"};
            return r;
        }
        r.bound_value = approx_fano_pe_lower(mi, m, counts.n_max);
        r.provenance = {"fano-approximate"};
        r.intermediates["bayes_optimal_approx_error"] =
            bayes_optimal_approx_error(g.prior, g.channel, *g.criterion);
    } else if (m == 2) {
        r.bound_value = fano_pe_lower_binary(mi);
        r.provenance = {"fano-binary"};
    } else {
        r.bound_value = fano_pe_lower(mi, m);
        r.provenance = {"fano"};
    }
    r.vacuous = r.bound_value == 0.0;
    return r;
}

namespace {

const char* kind_name(ProblemKind k) {
    switch (k) {
        case ProblemKind::group_testing: return "group-testing";
        case ProblemKind::ising: return "ising";
        case ProblemKind::erdos_renyi: return "erdos-renyi";
        case ProblemKind::sparse_regression: return "sparse-regression";
        case ProblemKind::density: return "density";
        case ProblemKind::convex_opt: return "convex-opt";
        case ProblemKind::generic_hypothesis_test: return "generic-hypothesis-test";
    }
    return "?";
}

const char* mode_name(ProblemMode m) {
    switch (m) {
        case ProblemMode::exact: return "exact";
        case ProblemMode::approximate: return "approximate";
        case ProblemMode::adaptive: return "adaptive";
    }
    return "?";
}

}  // namespace

namespace {

// JSON has no infinity literal; infinite values travel as the string "inf"
// so the JSON and CSV payloads stay in agreement.
json number_or_inf(double x) {
    if (std::isinf(x)) return json(x > 0 ? "inf" : "-inf");
    return json(x);
}

}  // namespace

json report_to_json(const BoundReport& report, const ProblemSpec& spec) {
    json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["report_version"] = kReportVersion;
    j["input_digest"] = spec.digest;
    j["kind"] = kind_name(spec.kind);
    j["mode"] = mode_name(spec.mode);
    j["units"] = report.units;
    j["bound"] = number_or_inf(report.bound_value);
    j["vacuous"] = report.vacuous;
    j["asymptotic_only"] = report.asymptotic_only;
    j["intermediates"] = json::object();
    for (const auto& [k, v] : report.intermediates) {
        j["intermediates"][k] = number_or_inf(v);
    }
    j["provenance"] = report.provenance;
    j["notes"] = report.notes;
    return j;
}

std::string report_to_csv(const BoundReport& report, const ProblemSpec& spec) {
    std::ostringstream out;
    out << "key,value\n";
    out << "tool," << kToolName << " " << kToolVersion << "\n";
    out << "report_version," << kReportVersion << "\n";
    out << "input_digest," << spec.digest << "\n";
    out << "kind," << kind_name(spec.kind) << "\n";
    out << "mode," << mode_name(spec.mode) << "\n";
    out << "units," << report.units << "\n";
    out << "bound," << format_number(report.bound_value) << "\n";
    out << "vacuous," << (report.vacuous ? "true" : "false") << "\n";
    out << "asymptotic_only," << (report.asymptotic_only ? "true" : "false") << "\n";
    for (const auto& [k, v] : report.intermediates) {
        out << "intermediates." << k << "," << format_number(v) << "\n";
    }
    return out.str();
}

namespace {

// Human display rounds to 12 significant digits; the machine formats keep
// full precision so JSON and CSV carry identical payloads.
std::string display_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

std::string report_to_table(const BoundReport& report, const ProblemSpec& spec) {
    std::ostringstream out;
    out << kind_name(spec.kind) << " (" << mode_name(spec.mode) << ")\n";
    out << "  bound: " << display_number(report.bound_value) << " " << report.units;
    if (report.vacuous) out << "  [vacuous]";
    if (report.asymptotic_only) out << "  [asymptotic]";
    out << "\n";
    for (const auto& [k, v] : report.intermediates) {
        out << "  " << k << ": " << display_number(v) << "\n";
    }
    for (const auto& note : report.notes) out << "  note: " << note << "\n";
    return out.str();
}

}  // namespace converse
