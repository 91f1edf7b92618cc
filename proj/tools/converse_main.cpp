// converse: compute information-theoretic converse (lower) bounds from JSON
// problem specs, run the property-verification suites, drive bound-vs-
// simulation sweeps, and evaluate ad-hoc information measures.
//
// Exit codes: 0 success, 1 internal error, 2 validation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "converse/fano.hpp"
#include "converse/measures.hpp"
#include "converse/oracle.hpp"
#include "converse/specio.hpp"
#include "converse/verify.hpp"

namespace {

using converse::BoundReport;
using converse::FinitePMF;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << content;
}

int cmd_bound(const std::string& spec_path, const std::string& format,
              const std::string& out_path) {
    const converse::ProblemSpec spec = converse::load_problem_spec(spec_path);
    const BoundReport report = converse::evaluate_problem_spec(spec);
    std::string payload;
    if (format == "json") {
        payload = converse::report_to_json(report, spec).dump(2) + "\n";
    } else if (format == "csv") {
        payload = converse::report_to_csv(report, spec);
    } else if (format == "table") {
        payload = converse::report_to_table(report, spec);
    } else {
        throw std::invalid_argument("unknown format \"" + format + "\"");
    }
    write_output(out_path, payload);
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t trials, std::uint64_t seed,
               double tolerance) {
    converse::VerifyOptions options{trials, seed, tolerance};
    const auto reports = converse::run_verify(suite, options);
    bool all_ok = true;
    for (const auto& rep : reports) {
        if (rep.failures.empty()) {
            std::cout << "[PASS] suite " << rep.suite << ": " << rep.checks << " checks\n";
            continue;
        }
        all_ok = false;
        std::cout << "[FAIL] suite " << rep.suite << ": " << rep.failures.size() << " of "
                  << rep.checks << " checks failed\n";
        for (const auto& f : rep.failures) {
            std::cout << "  " << f.check << " counterexample: " << f.instance.dump() << "\n";
        }
    }
    return all_ok ? kExitOk : kExitInternal;
}

int cmd_simulate(const std::string& sim_path, std::uint64_t trials_override,
                 std::uint64_t seed_override, bool has_trials, bool has_seed,
                 const std::string& out_path) {
    converse::SimSpec sim = converse::load_sim_spec(sim_path);
    if (has_trials) sim.trials = trials_override;
    if (has_seed) sim.seed = seed_override;
    if (sim.trials == 0) throw std::invalid_argument("simulate: trials must be >= 1");

    const double capacity = converse::gt_capacity(sim.gt.eps);
    const double log_m = converse::log_binomial(sim.gt.p, sim.gt.k);
    std::ostringstream csv;
    csv << "n,empirical_pe,stderr,fano_floor\n";
    for (std::size_t n : sim.n_values) {
        const auto res = converse::gt_simulate(sim.gt, sim.nu, n, sim.decoder, sim.trials,
                                              sim.seed);
        const double floor_pe =
            std::max(0.0, 1.0 - (static_cast<double>(n) * capacity + std::numbers::ln2) / log_m);
        csv << n << "," << converse::format_number(res.estimate) << ","
            << converse::format_number(res.stderror) << "," << converse::format_number(floor_pe)
            << "\n";
    }
    write_output(out_path, csv.str());
    return kExitOk;
}

FinitePMF parse_inline_pmf(const std::string& csv) {
    std::vector<double> mass;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad mass entry \"" + item + "\"");
        mass.push_back(v);
    }
    return FinitePMF(std::move(mass));
}

int cmd_measures(const std::string& p_csv, const std::string& q_csv, bool bits) {
    const FinitePMF p = parse_inline_pmf(p_csv);
    const double unit = bits ? std::numbers::ln2 : 1.0;
    const char* suffix = bits ? "bits" : "nats";
    std::cout << "entropy " << converse::format_number(converse::entropy(p) / unit) << " "
              << suffix << "\n";
    if (q_csv.empty()) return kExitOk;

    const FinitePMF q = parse_inline_pmf(q_csv);
    const double kl = converse::kl_divergence(p, q);
    const double tv = converse::tv_distance(p, q);
    const double h2 = converse::hellinger_sq(p, q);
    const double x2 = converse::chi_sq(p, q);
    std::cout << "kl " << converse::format_number(kl / unit) << " " << suffix << "\n";
    std::cout << "tv " << converse::format_number(tv) << "\n";
    std::cout << "hellinger_sq " << converse::format_number(h2) << "\n";
    std::cout << "chi_sq " << converse::format_number(x2) << "\n";

    // Divergence-relation report for this pair.
    auto line = [](const char* name, bool ok) {
        std::cout << "relation " << name << " " << (ok ? "PASS" : "FAIL") << "\n";
        return ok;
    };
    bool all = true;
    all &= line("kl>=2tv^2", kl >= 2.0 * tv * tv - 1e-12);
    double eta = 1.0;
    bool q_positive = true;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] <= 0.0) q_positive = false;
        eta = std::min(eta, q[i]);
    }
    if (q_positive) all &= line("kl<=(2/eta)tv^2", kl <= 2.0 / eta * tv * tv + 1e-12);
    const double h = std::sqrt(h2);
    all &= line("h^2/2<=tv", 0.5 * h2 <= tv + 1e-12);
    all &= line("tv<=h*sqrt(1-h^2/4)", tv <= h * std::sqrt(1.0 - h2 / 4.0) + 1e-12);
    all &= line("kl<=log(1+chi2)<=chi2",
                kl <= std::log1p(x2) + 1e-12 && std::log1p(x2) <= x2 + 1e-12);
    return all ? kExitOk : kExitInternal;
}

void apply_thread_cap() {
    const char* env = std::getenv("CONVERSE_KIT_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || cap < 1) {
        throw std::invalid_argument("CONVERSE_KIT_THREADS must be a positive integer");
    }
    omp_set_num_threads(static_cast<int>(cap));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-theoretic converse bound toolkit"};
    app.require_subcommand(1);

    std::string spec_path, format = "json", out_path;
    auto* bound = app.add_subcommand("bound", "evaluate the bound a problem spec asks for");
    bound->add_option("spec", spec_path, "path to a JSON problem spec")->required();
    bound->add_option("--format", format, "json, csv or table");
    bound->add_option("--out", out_path, "output file (default stdout)");

    std::string suite = "all";
    std::uint64_t trials = 1000, seed = 1;
    double tolerance = 1e-9;
    auto* verify = app.add_subcommand("verify", "run property-verification suites");
    verify->add_option("--suite", suite, "fano, divergences, tensorization, packing, applications or all");
    verify->add_option("--trials", trials, "sweep size");
    verify->add_option("--seed", seed, "sweep seed");
    verify->add_option("--tolerance", tolerance, "soundness slack");

    std::string sim_path, sim_out;
    std::uint64_t sim_trials = 0, sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "bound-vs-simulation sweep (CSV)");
    simulate->add_option("spec", sim_path, "path to a JSON simulation spec")->required();
    auto* trials_opt = simulate->add_option("--trials", sim_trials, "override trial count");
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "override seed");
    simulate->add_option("--out", sim_out, "output file (default stdout)");

    std::string p_csv, q_csv;
    bool bits = false;
    auto* measures = app.add_subcommand("measures", "ad-hoc information measures");
    measures->add_option("--p", p_csv, "comma-separated masses")->required();
    measures->add_option("--q", q_csv, "second distribution for divergences");
    measures->add_flag("--bits", bits, "report entropies/divergences in bits");

    try {
        app.parse(argc, argv);
        apply_thread_cap();
        if (bound->parsed()) return cmd_bound(spec_path, format, out_path);
        if (verify->parsed()) {
            const auto names = converse::verify_suite_names();
            if (suite != "all" &&
                std::find(names.begin(), names.end(), suite) == names.end()) {
                std::cerr << "error: unknown suite \"" << suite << "\"\n";
                return kExitValidation;
            }
            return cmd_verify(suite, trials, seed, tolerance);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_path, sim_trials, sim_seed, trials_opt->count() > 0,
                                seed_opt->count() > 0, sim_out);
        }
        if (measures->parsed()) return cmd_measures(p_csv, q_csv, bits);
        return kExitValidation;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
