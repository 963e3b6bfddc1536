// steer: evaluates steering-inequality gaps from correlation matrices, extracts
// thresholds, and regenerates the figure data sets as CSV.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steerlab/criteria.hpp"
#include "steerlab/observables.hpp"
#include "steerlab/solvers.hpp"
#include "steerlab/states.hpp"

namespace {

using nlohmann::json;
using namespace steerlab;

constexpr int exit_ok = 0;
constexpr int exit_not_steerable = 1;
constexpr int exit_input_error = 2;
constexpr int exit_bracket_error = 3;

struct ScenarioConfig {
    std::string scenario;
    std::optional<StateFamily> family;  // set unless the state is inline
    std::optional<DensityMatrix> inline_state;
    double xi = 0.0;
    std::optional<Weights> weights;
    std::string basis = "gell_mann";
    std::uint64_t seed = 0;
};

StateFamily parse_family(const json& state) {
    const std::string name = state.at("family").get<std::string>();
    StateFamily f;
    if (name == "singlet") {
        f.kind = StateFamily::Kind::singlet;
    } else if (name == "asymmetric") {
        f.kind = StateFamily::Kind::asymmetric;
        f.p = state.at("p").get<double>();
    } else if (name == "ghz") {
        f.kind = StateFamily::Kind::ghz;
        f.theta = state.at("theta").get<double>();
    } else if (name == "ghz_d") {
        f.kind = StateFamily::Kind::ghz_d;
        f.d = state.at("d").get<int>();
    } else if (name == "max_entangled") {
        f.kind = StateFamily::Kind::max_entangled;
        f.d = state.at("d").get<int>();
    } else {
        throw std::invalid_argument("config field 'state.family': unknown family '" + name + "'");
    }
    return f;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("config file '" + path + "' cannot be opened");
    json j;
    try {
        j = json::parse(file);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    ScenarioConfig cfg;
    try {
        cfg.scenario = j.at("scenario").get<std::string>();
        const json& state = j.at("state");
        if (state.contains("family"))
            cfg.family = parse_family(state);
        else
            cfg.inline_state = density_matrix_from_json(state.dump());
        cfg.xi = j.at("xi").get<double>();
        if (j.contains("weights")) cfg.weights = j.at("weights").get<Weights>();
        if (j.contains("basis")) cfg.basis = j.at("basis").get<std::string>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field missing or mistyped: ") + e.what());
    }
    if (cfg.xi < 0.0) throw std::invalid_argument("config field 'xi': must be >= 0");
    if (cfg.basis != "gell_mann" && cfg.basis != "pauli")
        throw std::invalid_argument("config field 'basis': expected 'gell_mann' or 'pauli'");
    return cfg;
}

DensityMatrix config_state(const ScenarioConfig& cfg) {
    return cfg.inline_state ? *cfg.inline_state : make_state(*cfg.family);
}

ObservableBasis named_basis(const std::string& name, int dim) {
    if (name == "pauli") {
        if (dim != 2)
            throw std::invalid_argument("config field 'basis': 'pauli' requires dimension 2");
        return pauli_loo_qubit();
    }
    return gell_mann_loo(dim);
}

GapReport evaluate_scenario(const ScenarioConfig& cfg, const DensityMatrix& state, double xi) {
    const bool bipartite =
        cfg.scenario == "bipartite_A_to_B" || cfg.scenario == "bipartite_B_to_A";
    const bool tripartite =
        cfg.scenario == "tripartite_A_to_BC" || cfg.scenario == "tripartite_BC_to_A";
    if (!bipartite && !tripartite)
        throw std::invalid_argument("config field 'scenario': unknown tag '" + cfg.scenario + "'");
    if (bipartite) {
        if (state.dims().size() != 2)
            throw std::invalid_argument("config field 'scenario': '" + cfg.scenario +
                                        "' requires a state with 2 subsystems");
        const DensityMatrix oriented =
            cfg.scenario == "bipartite_B_to_A" ? swap_roles(state) : state;
        const ObservableBasis basis_a = named_basis(cfg.basis, oriented.dims()[0]);
        const ObservableBasis basis_b = named_basis(cfg.basis, oriented.dims()[1]);
        const ErrorModel model{xi, oriented.dims()[1]};
        if (cfg.weights) return weighted_gap_imprecise(oriented, basis_a, basis_b, model, *cfg.weights);
        return bipartite_gap_imprecise(oriented, basis_a, basis_b, model);
    }
    if (state.dims().size() != 3)
        throw std::invalid_argument("config field 'scenario': '" + cfg.scenario +
                                    "' requires a state with 3 subsystems");
    if (cfg.weights)
        throw std::invalid_argument("config field 'weights': only bipartite scenarios take weights");
    const ErrorModel model{xi, state.dims()[0]};
    return cfg.scenario == "tripartite_A_to_BC" ? tripartite_gap_a_to_bc(state, model)
                                                : tripartite_gap_bc_to_a(state, model);
}

void emit(const std::string& text, const std::string& out_path) {
    std::cout << text << "\n";
    if (out_path.empty()) return;
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
    file << text << "\n";
    if (!file) throw std::runtime_error("write failed for '" + out_path + "'");
}

int run_check(const std::string& config_path, const std::string& out_path) {
    const ScenarioConfig cfg = load_config(config_path);
    const GapReport report = evaluate_scenario(cfg, config_state(cfg), cfg.xi);
    emit(to_json(report), out_path);
    return report.steerable ? exit_ok : exit_not_steerable;
}

double asymmetric_gap(double p, bool b_to_a, double xi) {
    const DensityMatrix state = make_asymmetric(p);
    const ObservableBasis basis = pauli_loo_qubit();
    const ErrorModel model{xi, 2};
    return bipartite_gap_imprecise(b_to_a ? swap_roles(state) : state, basis, basis, model).gap;
}

int run_threshold(const std::string& family, const std::string& direction, double xi, double tol,
                  const std::string& out_path) {
    if (family != "asymmetric")
        throw std::invalid_argument("--family: only 'asymmetric' has a scalar steering parameter");
    if (direction != "a-to-b" && direction != "b-to-a")
        throw std::invalid_argument("--direction: expected 'a-to-b' or 'b-to-a'");
    if (xi < 0.0) throw std::invalid_argument("--xi: must be >= 0");
    const bool b_to_a = direction == "b-to-a";
    const ThresholdResult result = bisect_threshold(
        [&](double p) { return asymmetric_gap(p, b_to_a, xi); }, 0.0, 1.0, tol, "p");
    emit(to_json(result), out_path);
    return exit_ok;
}

struct GridAxes {
    AxisSpec axis1;
    AxisSpec axis2;
};

GridAxes parse_grid(const std::string& spec) {
    std::vector<AxisSpec> axes;
    std::stringstream stream(spec);
    std::string part;
    while (std::getline(stream, part, ',')) {
        std::stringstream fields(part);
        std::string name, start, stop, count;
        if (!std::getline(fields, name, ':') || !std::getline(fields, start, ':') ||
            !std::getline(fields, stop, ':') || !std::getline(fields, count))
            throw std::invalid_argument("--grid: expected name:start:stop:count[,...], got '" +
                                        part + "'");
        try {
            axes.push_back(AxisSpec{name, std::stod(start), std::stod(stop), std::stoi(count)});
        } catch (const std::exception&) {
            throw std::invalid_argument("--grid: numbers do not parse in '" + part + "'");
        }
    }
    if (axes.size() != 2)
        throw std::invalid_argument("--grid: exactly two axes are required");
    return GridAxes{axes[0], axes[1]};
}

StateFamily family_at(StateFamily base, const std::string& axis, double value) {
    if (axis == "p")
        base.p = value;
    else if (axis == "theta")
        base.theta = value;
    else if (axis == "d")
        base.d = static_cast<int>(std::lround(value));
    else if (axis != "xi")
        throw std::invalid_argument("--grid: unknown axis '" + axis + "' (use xi, p, theta, or d)");
    return base;
}

int run_sweep(const std::string& config_path, const std::string& grid_spec,
              const std::string& out_path) {
    const ScenarioConfig cfg = load_config(config_path);
    if (!cfg.family)
        throw std::invalid_argument("sweep requires a parametric state family in the config");
    const GridAxes axes = parse_grid(grid_spec);
    auto eval = [&](double v1, double v2) {
        StateFamily f = family_at(*cfg.family, axes.axis1.name, v1);
        f = family_at(f, axes.axis2.name, v2);
        double xi = cfg.xi;
        if (axes.axis1.name == "xi") xi = v1;
        if (axes.axis2.name == "xi") xi = v2;
        return evaluate_scenario(cfg, make_state(f), xi);
    };
    const SweepGrid grid = sweep(cfg.scenario, eval, axes.axis1, axes.axis2);
    write_sweep_csv(out_path, grid);
    std::cout << "wrote " << out_path << " (" << grid.reports.size() << " points)\n";
    return exit_ok;
}

double clamped_threshold(bool b_to_a, double xi) {
    // where even p = 1 fails the criterion, the threshold saturates at 1
    if (asymmetric_gap(1.0, b_to_a, xi) <= 0.0) return 1.0;
    return bisect_threshold([&](double p) { return asymmetric_gap(p, b_to_a, xi); }, 0.0, 1.0,
                            1e-6, "p")
        .critical;
}

void write_fig1(const std::filesystem::path& dir) {
    const AxisSpec xi_axis{"xi", 0.0, 1e-4, 101};
    const std::vector<double> xis = axis_values(xi_axis);
    std::vector<double> to_b(xis.size()), to_a(xis.size());
    parallel_for(static_cast<int>(xis.size()), [&](int i) {
        to_b[static_cast<std::size_t>(i)] = clamped_threshold(false, xis[static_cast<std::size_t>(i)]);
        to_a[static_cast<std::size_t>(i)] = clamped_threshold(true, xis[static_cast<std::size_t>(i)]);
    });
    const std::filesystem::path path = dir / "fig1.csv";
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path.string());
    file << "xi,p_a_to_b,p_b_to_a\n";
    char line[256];
    for (std::size_t i = 0; i < xis.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", xis[i], to_b[i], to_a[i]);
        file << line;
    }
    if (!file) throw std::runtime_error("write failed for " + path.string());
}

void write_fig2(const std::filesystem::path& dir) {
    const AxisSpec theta{"theta", 0.0, std::numbers::pi / 2, 200};
    const AxisSpec xi{"xi", 0.0, 1e-4, 200};
    auto eval = [](double th, double x) {
        return tripartite_gap_a_to_bc(make_ghz(th), ErrorModel{x, 2});
    };
    write_sweep_csv((dir / "fig2.csv").string(), sweep("tripartite_A_to_BC", eval, theta, xi));
}

void write_fig3(const std::filesystem::path& dir) {
    const AxisSpec d_axis{"d", 2.0, 3.0, 2};
    const AxisSpec xi_axis{"xi", 0.0, 1e-4, 101};
    auto bip = [](double dv, double x) {
        const int d = static_cast<int>(std::lround(dv));
        const ObservableBasis basis = gell_mann_loo(d);
        return bipartite_gap_imprecise(make_max_entangled(d), basis, basis, ErrorModel{x, d});
    };
    auto tri_ab = [](double dv, double x) {
        const int d = static_cast<int>(std::lround(dv));
        return tripartite_gap_a_to_bc(make_ghz_d(d), ErrorModel{x, d});
    };
    auto tri_ba = [](double dv, double x) {
        const int d = static_cast<int>(std::lround(dv));
        return tripartite_gap_bc_to_a(make_ghz_d(d), ErrorModel{x, d});
    };
    write_sweep_csv((dir / "fig3a.csv").string(), sweep("bipartite_A_to_B", bip, d_axis, xi_axis));
    write_sweep_csv((dir / "fig3b.csv").string(), sweep("tripartite_A_to_BC", tri_ab, d_axis, xi_axis));
    write_sweep_csv((dir / "fig3c.csv").string(), sweep("tripartite_BC_to_A", tri_ba, d_axis, xi_axis));
}

int run_figure(int which, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::invalid_argument("output directory '" + out_dir + "' cannot be created");
    switch (which) {
        case 1: write_fig1(dir); break;
        case 2: write_fig2(dir); break;
        case 3: write_fig3(dir); break;
        default: throw std::invalid_argument("figure number must be 1, 2, or 3");
    }
    std::cout << "wrote figure " << which << " data to " << out_dir << "\n";
    return exit_ok;
}

int run_verify_bound(int d, double xi, int samples, std::uint64_t seed, const std::string& out_path) {
    if (d < 2) throw std::invalid_argument("--d: must be >= 2");
    if (xi < 0.0) throw std::invalid_argument("--xi: must be >= 0");
    if (samples < 0) throw std::invalid_argument("--samples: must be >= 0");
    if (samples == 0) {
        if (!out_path.empty()) {
            std::ofstream file(out_path);
            if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
            file << "d,xi,sample,max_coeff_dev,bound\n";
        }
        std::cout << "violations=0\n";
        return exit_ok;
    }
    const BoundCheck check = verify_coeff_bound(d, xi, samples, seed);
    if (!out_path.empty()) write_bound_csv(out_path, check);
    std::cout << "violations=" << check.violations << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steering-inequality evaluation from correlation matrices"};
    app.require_subcommand(1);

    std::string config_path, out_path, grid_spec, family = "asymmetric", direction = "a-to-b";
    std::string out_dir = ".";
    double xi = 0.0, tol = 1e-4;
    int figure_number = 0, d = 2, samples = 1000;
    std::uint64_t seed = 0;

    CLI::App* check = app.add_subcommand("check", "evaluate one scenario config");
    check->add_option("--config", config_path, "scenario config JSON")->required();
    check->add_option("--out", out_path, "report output path");

    CLI::App* threshold = app.add_subcommand("threshold", "bisect the steerability threshold");
    threshold->add_option("--family", family, "state family (asymmetric)");
    threshold->add_option("--direction", direction, "a-to-b or b-to-a");
    threshold->add_option("--xi", xi, "imprecision budget");
    threshold->add_option("--tol", tol, "bracket tolerance");
    threshold->add_option("--out", out_path, "result output path");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a scenario over a grid");
    sweep_cmd->add_option("--config", config_path, "scenario config JSON")->required();
    sweep_cmd->add_option("--grid", grid_spec, "axes as name:start:stop:count[,name:start:stop:count]")
        ->required();
    sweep_cmd->add_option("--out", out_path, "CSV output path")->required();

    CLI::App* figure = app.add_subcommand("figure", "regenerate figure data CSVs");
    figure->add_option("number", figure_number, "figure number (1, 2, or 3)")->required();
    figure->add_option("--out-dir", out_dir, "output directory");

    CLI::App* verify = app.add_subcommand("verify-bound", "Monte-Carlo check of the coefficient bound");
    verify->add_option("--d", d, "local dimension");
    verify->add_option("--xi", xi, "imprecision budget");
    verify->add_option("--samples", samples, "number of samples");
    verify->add_option("--seed", seed, "master seed");
    verify->add_option("--out", out_path, "per-sample CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (check->parsed()) return run_check(config_path, out_path);
        if (threshold->parsed()) return run_threshold(family, direction, xi, tol, out_path);
        if (sweep_cmd->parsed()) return run_sweep(config_path, grid_spec, out_path);
        if (figure->parsed()) return run_figure(figure_number, out_dir);
        if (verify->parsed()) return run_verify_bound(d, xi, samples, seed, out_path);
    } catch (const bracket_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bracket_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_input_error;
}
