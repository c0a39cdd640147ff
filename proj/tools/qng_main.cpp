#include "qng/channels.hpp"
#include "qng/convex_roof.hpp"
#include "qng/gaussian.hpp"
#include "qng/noisy_photon.hpp"
#include "qng/run.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using qng::cli::format_sig9;
using qng::cli::RunConfig;

int run_ng(const RunConfig& config, const std::string& state_spec) {
    const qng::DensityOperator rho = qng::cli::parse_state_spec(state_spec, config.truncation);
    const qng::GaussianReference ref = qng::gaussian_reference(rho);
    const double ng = qng::non_gaussianity(rho);

    std::cout << "NG = " << format_sig9(ng) << '\n'
              << "n_th = " << format_sig9(ref.n_th) << '\n'
              << "mean_q = " << format_sig9(ref.mean_q) << '\n'
              << "mean_p = " << format_sig9(ref.mean_p) << '\n'
              << "cov_qq = " << format_sig9(ref.cov(0, 0)) << '\n'
              << "cov_qp = " << format_sig9(ref.cov(0, 1)) << '\n'
              << "cov_pp = " << format_sig9(ref.cov(1, 1)) << '\n';
    return qng::cli::kExitSuccess;
}

qng::EnvelopeSolution solve_default_envelope() {
    const qng::FamilyEnvelopeResult result = qng::solve_family_envelope();
    if (!result.solution) {
        throw std::runtime_error("envelope solve failed on the default interval");
    }
    return *result.solution;
}

int run_fig1(const RunConfig& config) {
    const qng::EnvelopeSolution env = solve_default_envelope();
    const std::vector<qng::cli::Fig1Row> rows = qng::cli::fig1_rows(config.grid_points, env);

    std::ofstream file;
    if (!config.output_path.empty()) {
        file.open(config.output_path);
        if (!file) {
            std::cerr << "error: cannot open output file '" << config.output_path << "'\n";
            return qng::cli::kExitUsage;
        }
    }
    std::ostream& os = config.output_path.empty() ? std::cout : file;
    if (config.output_format == "json") {
        qng::cli::write_fig1_json(os, config, rows, env);
    } else {
        qng::cli::write_fig1_csv(os, rows);
    }
    if (!config.output_path.empty() && !file.good()) {
        std::cerr << "error: writing to '" << config.output_path << "' failed\n";
        return qng::cli::kExitUsage;
    }
    return qng::cli::kExitSuccess;
}

int run_envelope(const RunConfig& config, double lo, double hi) {
    const qng::FamilyEnvelopeResult result = qng::solve_family_envelope(lo, hi);
    if (!result.crossover_p) {
        std::cerr << "no r_opt crossover inside [" << format_sig9(lo) << ", " << format_sig9(hi)
                  << "]; M has no common tangent there\n";
        return qng::cli::kExitNumerical;
    }
    std::cout << "crossover = " << format_sig9(*result.crossover_p) << '\n';
    if (!result.solution) {
        std::cerr << "no common tangent found on [" << format_sig9(lo) << ", " << format_sig9(hi)
                  << "]\n";
        return qng::cli::kExitNumerical;
    }
    const qng::EnvelopeSolution& env = *result.solution;

    const double tangency =
        std::abs(env.slope * (env.p2 - env.p1) + env.m_p1 - env.m_p2);
    const double slope_res_p1 = std::abs(qng::m_prime(env.p1) - env.slope);
    const double slope_res_p2 = std::abs(qng::m_prime(env.p2) - env.slope);

    // Assumption-free cross-check: convex hull of 2000 samples of M.
    constexpr int kHullSamples = 2000;
    std::vector<std::pair<double, double>> samples;
    samples.reserve(kHullSamples);
    for (int i = 0; i < kHullSamples; ++i) {
        const double p = static_cast<double>(i) / (kHullSamples - 1);
        samples.push_back({p, qng::m_value(p)});
    }
    const qng::PiecewiseLinear hull = qng::envelope_bruteforce(samples);
    double discrepancy = 0.0;
    for (const auto& [p, unused] : samples) {
        discrepancy = std::max(discrepancy, std::abs(hull(p) - qng::qng_noisy_photon(p, env)));
    }
    // The hull's own tangent segment: the piece that bridges the two convex
    // branches around the crossover.
    double hull_p1 = env.p1;
    double hull_p2 = env.p2;
    double hull_slope = env.slope;
    const double mid = 0.5 * (env.p1 + env.p2);
    const auto& knots = hull.knots();
    for (size_t i = 1; i < knots.size(); ++i) {
        if (knots[i - 1].first <= mid && mid <= knots[i].first) {
            hull_p1 = knots[i - 1].first;
            hull_p2 = knots[i].first;
            hull_slope = (knots[i].second - knots[i - 1].second) / (hull_p2 - hull_p1);
            break;
        }
    }

    std::cout << "p1 = " << format_sig9(env.p1) << '\n'
              << "p2 = " << format_sig9(env.p2) << '\n'
              << "slope = " << format_sig9(env.slope) << '\n'
              << "M_p1 = " << format_sig9(env.m_p1) << '\n'
              << "M_p2 = " << format_sig9(env.m_p2) << '\n'
              << "tangency_residual = " << format_sig9(tangency) << '\n'
              << "slope_residual_p1 = " << format_sig9(slope_res_p1) << '\n'
              << "slope_residual_p2 = " << format_sig9(slope_res_p2) << '\n'
              << "hull_p1 = " << format_sig9(hull_p1) << '\n'
              << "hull_p2 = " << format_sig9(hull_p2) << '\n'
              << "hull_slope = " << format_sig9(hull_slope) << '\n'
              << "hull_max_discrepancy = " << format_sig9(discrepancy) << '\n';

    if (tangency > config.tolerance) {
        std::cerr << "tangency residual " << format_sig9(tangency)
                  << " exceeds the configured tolerance " << format_sig9(config.tolerance)
                  << '\n';
        return qng::cli::kExitNumerical;
    }
    return qng::cli::kExitSuccess;
}

void print_report(const qng::PropertyReport& report) {
    std::cout << report.name << ": " << (report.passed() ? "PASS" : "FAIL")
              << " trials=" << report.trials << " violations=" << report.violations
              << " worst_residual=" << format_sig9(report.worst_residual)
              << " tolerance=" << format_sig9(report.tolerance) << '\n';
    for (const std::string& failure : report.failures) {
        std::cout << "  - " << failure << '\n';
    }
}

int run_properties(std::uint64_t seed, const std::vector<std::string>& only,
                   std::optional<int> trials) {
    auto selected = [&](const std::string& name) {
        return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
    };
    qng::PropertySuiteConfig config;
    config.seed = seed;
    if (trials) {
        config.n0_trials = *trials;
        config.n2_samples = *trials;
        config.n3_trials = *trials;
        config.n4_ng_trials = *trials;
    }

    std::optional<qng::EnvelopeSolution> env;
    if (selected("n2") || selected("n4")) {
        env = solve_default_envelope();
    }

    std::vector<qng::PropertyReport> reports;
    if (selected("n0")) reports.push_back(qng::check_n0_nonnegativity(config.n0_trials, config.seed));
    if (selected("n1")) reports.push_back(qng::check_n1_faithfulness());
    if (selected("n2")) {
        reports.push_back(qng::check_n2_convexity(config.n2_samples, config.seed + 1, *env));
    }
    if (selected("n3")) reports.push_back(qng::check_n3_suite(config.n3_trials, config.seed + 2));
    if (selected("n4")) {
        reports.push_back(qng::check_n4_monotonicity(config.n4_p_values, config.n4_eta_values,
                                                     *env, config.n4_ng_trials, config.seed + 3));
    }

    bool all_passed = true;
    for (const qng::PropertyReport& report : reports) {
        print_report(report);
        all_passed = all_passed && report.passed();
    }
    std::cout << "seed = " << seed << '\n';
    std::cout << "overall: " << (all_passed ? "PASS" : "FAIL") << '\n';
    return all_passed ? qng::cli::kExitSuccess : qng::cli::kExitViolation;
}

void add_config_file_option(CLI::App* cmd) {
    cmd->add_option("--config", "Plain-text 'key = value' configuration file");
}

std::string trim_blanks(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    const auto end = text.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return std::string();
    return text.substr(begin, end - begin + 1);
}

// Applies `key = value` lines from the subcommand's --config file to every
// option the command line left untouched, so flags keep precedence over the
// file and the file keeps precedence over built-in defaults.
void apply_config_file(CLI::App* cmd) {
    CLI::Option* config_opt = cmd->get_option_no_throw("--config");
    if (config_opt == nullptr || config_opt->count() == 0) return;
    const auto path = config_opt->as<std::string>();
    std::ifstream in(path);
    if (!in) {
        throw qng::cli::parse_error("cannot open config file '" + path + "'", 1, 1);
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim_blanks(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw qng::cli::parse_error("expected 'key = value'", line_no, 1);
        }
        const std::string key = trim_blanks(stripped.substr(0, eq));
        const std::string value = trim_blanks(stripped.substr(eq + 1));
        if (key.empty() || key == "config") {
            throw qng::cli::parse_error("bad configuration key '" + key + "'", line_no, 1);
        }
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw qng::cli::parse_error("unknown configuration key '" + key + "'", line_no, 1);
        }
        if (opt->count() > 0) continue;  // explicit flags win
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::ParseError& err) {
            throw qng::cli::parse_error(
                std::string(err.what()) + " (configuration key '" + key + "')", line_no, 1);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative-entropy non-Gaussianity (NG) and convex-roof quantum "
                 "non-Gaussianity (QNG) of single-mode bosonic states"};
    app.require_subcommand(1);

    RunConfig config;
    std::string state_spec;
    std::pair<double, double> interval{1e-4, 0.15};
    std::uint64_t seed = qng::PropertySuiteConfig{}.seed;
    std::vector<std::string> only;
    std::optional<int> trials;

    CLI::App* ng_cmd = app.add_subcommand("ng", "Non-Gaussianity of a single state");
    ng_cmd->add_option("--state", state_spec,
                       "State: vacuum | fock:N | coherent:RE[,IM] | thermal:NBAR | "
                       "family:p=..[,r=..][,theta=..] | file:PATH")
        ->required();
    ng_cmd->add_option("--truncation", config.truncation, "Fock-space dimension");
    add_config_file_option(ng_cmd);

    CLI::App* fig1_cmd =
        app.add_subcommand("fig1", "Sweep of p -> (M, r_opt, QNG) over a uniform grid");
    fig1_cmd->add_option("--grid-points", config.grid_points, "Number of grid points");
    fig1_cmd->add_option("--output", config.output_path, "Output path (stdout when omitted)");
    fig1_cmd->add_option("--format", config.output_format, "Output format: csv or json");
    fig1_cmd->add_option("--truncation", config.truncation, "Fock-space dimension");
    fig1_cmd->add_option("--tolerance", config.tolerance, "Numerical tolerance");
    add_config_file_option(fig1_cmd);

    CLI::App* env_cmd =
        app.add_subcommand("envelope", "Common tangent of M(p) plus the hull cross-check");
    env_cmd->add_option("--interval", interval, "Search interval LO HI for the crossover");
    env_cmd->add_option("--tolerance", config.tolerance, "Accepted tangency residual");
    add_config_file_option(env_cmd);

    CLI::App* prop_cmd = app.add_subcommand("properties", "Run the N0-N4 property checks");
    prop_cmd->add_option("--seed", seed, "Pseudo-random seed");
    prop_cmd->add_option("--only", only, "Restrict to these properties")
        ->check(CLI::IsMember({"n0", "n1", "n2", "n3", "n4"}));
    int trials_value = 0;
    CLI::Option* trials_opt =
        prop_cmd->add_option("--trials", trials_value, "Trial count override");
    add_config_file_option(prop_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForAllHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return qng::cli::kExitUsage;
    }
    try {
        for (CLI::App* cmd : {ng_cmd, fig1_cmd, env_cmd, prop_cmd}) {
            if (cmd->parsed()) apply_config_file(cmd);
        }
        if (trials_opt->count() > 0) trials = trials_value;
        config.validate();
        if (*ng_cmd) return run_ng(config, state_spec);
        if (*fig1_cmd) return run_fig1(config);
        if (*env_cmd) return run_envelope(config, interval.first, interval.second);
        if (*prop_cmd) return run_properties(seed, only, trials);
        std::cerr << "error: no subcommand given\n";
        return qng::cli::kExitUsage;
    } catch (const qng::cli::parse_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return qng::cli::kExitUsage;
    } catch (const qng::truncation_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return qng::cli::kExitNumerical;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return qng::cli::kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return qng::cli::kExitNumerical;
    }
}
