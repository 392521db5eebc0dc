// levmap command-line front end: leverage, simulate, sweep, option-match,
// detect. Scalar results print as JSON, sequences as CSV, grids as CSV/SVG;
// all numeric output carries 12 significant digits and identical inputs
// produce byte-identical output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levmap/impact.hpp"
#include "levmap/kelly.hpp"
#include "levmap/levy.hpp"
#include "levmap/meta.hpp"
#include "levmap/normal.hpp"
#include "levmap/option.hpp"
#include "levmap/phase.hpp"

namespace {

using nlohmann::json;

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Applies config-file values to options the user did not pass on the
// command line; flags always win. Unknown keys are usage errors.
class ConfigMerge {
public:
    ConfigMerge(CLI::App* sub, const std::string& path) : sub_(sub) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) {
            throw levmap::InvalidParameterError("cannot open config file: " + path);
        }
        try {
            in >> cfg_;
        } catch (const json::exception& e) {
            throw levmap::InvalidParameterError(std::string("malformed JSON config: ") +
                                                e.what());
        }
        if (!cfg_.is_object()) {
            throw levmap::InvalidParameterError("config must be a JSON object");
        }
    }

    template <typename T>
    void take(const std::string& flag, const std::string& key, T& out) {
        allowed_.insert(key);
        if (cfg_.contains(key) && sub_->count(flag) == 0) {
            try {
                out = cfg_.at(key).get<T>();
            } catch (const json::exception& e) {
                throw levmap::InvalidParameterError("config key '" + key +
                                                    "' has the wrong type: " + e.what());
            }
        }
    }

    void finish() const {
        for (const auto& item : cfg_.items()) {
            if (allowed_.find(item.key()) == allowed_.end()) {
                throw levmap::InvalidParameterError("unknown config key: " + item.key());
            }
        }
    }

private:
    CLI::App* sub_;
    json cfg_;
    std::set<std::string> allowed_;
};

void require_present(double v, const char* name) {
    if (std::isnan(v)) {
        throw levmap::InvalidParameterError(std::string("missing required parameter: ") +
                                            name);
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw levmap::Error("cannot open output file: " + path);
    }
    out << content;
}

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- leverage

struct LeverageArgs {
    double lambda{kUnset};
    double sigma{kUnset};
    double r{0.0};
    std::string model;
    double intensity{1.0};
    std::string config;
};

int run_leverage(CLI::App* sub, LeverageArgs& a) {
    ConfigMerge cfg(sub, a.config);
    cfg.take("--lambda", "lambda", a.lambda);
    cfg.take("--sigma", "sigma", a.sigma);
    cfg.take("--r", "r", a.r);
    cfg.take("--model", "model", a.model);
    cfg.take("--m", "m", a.intensity);
    cfg.finish();
    require_present(a.lambda, "--lambda");
    require_present(a.sigma, "--sigma");
    if (a.model.empty()) {
        const double lev =
            levmap::optimal_leverage({a.lambda, a.sigma, a.r});
        std::cout << "{\"leverage\":" << fmt_num(lev) << "}\n";
        return 0;
    }
    const levmap::LevyModel model = levmap::model_by_name(a.model, a.intensity);
    const double lev = levmap::glm_optimal_leverage(model, a.lambda, a.sigma);
    std::cout << "{\"model\":\"" << model.name() << "\",\"leverage\":" << fmt_num(lev)
              << "}\n";
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string mode{"frozen"};
    double leverage{2.0};
    double gamma{0.5};
    double kappa{1.0};
    double scale{1.0};
    double x0{0.5};
    int steps{100};
    double sigma{0.2};
    double r{0.0};
    double dt{1.0};
    double S0{1.0};
    double V0{1.0};
    std::string out;
    std::string config;
};

int run_simulate(CLI::App* sub, SimulateArgs& a) {
    ConfigMerge cfg(sub, a.config);
    cfg.take("--mode", "mode", a.mode);
    cfg.take("--leverage", "leverage", a.leverage);
    cfg.take("--gamma", "gamma", a.gamma);
    cfg.take("--kappa", "kappa", a.kappa);
    cfg.take("--A", "A", a.scale);
    cfg.take("--x0", "x0", a.x0);
    cfg.take("--steps", "steps", a.steps);
    cfg.take("--sigma", "sigma", a.sigma);
    cfg.take("--r", "r", a.r);
    cfg.take("--dt", "dt", a.dt);
    cfg.take("--S0", "S0", a.S0);
    cfg.take("--V0", "V0", a.V0);
    cfg.take("--out", "out", a.out);
    cfg.finish();

    levmap::PortfolioState state;
    state.S = a.S0;
    state.B = 1.0;
    state.V = a.V0;
    state.theta = a.leverage * a.V0 / a.S0;
    state.phi = (1.0 - a.leverage) * a.V0;

    levmap::Trajectory trajectory;
    if (a.mode == "frozen") {
        if (sub->count("--r") || sub->count("--dt") || sub->count("--sigma")) {
            throw levmap::InvalidParameterError(
                "--sigma, --r and --dt apply to full mode only");
        }
        const levmap::FeedbackMap map =
            levmap::frozen_map(a.leverage, {a.gamma, a.kappa}, a.scale);
        trajectory = levmap::simulate(map, a.x0, a.steps, state);
    } else if (a.mode == "full") {
        if (sub->count("--A")) {
            throw levmap::InvalidParameterError(
                "--A applies to frozen mode; full mode derives A from the state");
        }
        const levmap::MarketParams market{a.leverage * a.sigma, a.sigma, a.r};
        const levmap::FeedbackMap map =
            levmap::full_map(market, {a.gamma, a.kappa}, a.dt);
        trajectory = levmap::simulate(map, a.x0, a.steps, state);
    } else {
        throw levmap::InvalidParameterError("--mode must be frozen or full");
    }
    write_output(a.out, levmap::to_csv(trajectory));
    return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    double lambda_min{0.0};
    double lambda_max{3.0};
    int lambda_res{41};
    double gamma_min{0.3};
    double gamma_max{0.9};
    int gamma_res{41};
    double x0{0.01};
    double scale{1.0};
    double kappa{1.0};
    std::string csv;
    std::string svg;
    std::string config;
};

int run_sweep(CLI::App* sub, SweepArgs& a) {
    ConfigMerge cfg(sub, a.config);
    cfg.take("--lambda-min", "lambda-min", a.lambda_min);
    cfg.take("--lambda-max", "lambda-max", a.lambda_max);
    cfg.take("--lambda-res", "lambda-res", a.lambda_res);
    cfg.take("--gamma-min", "gamma-min", a.gamma_min);
    cfg.take("--gamma-max", "gamma-max", a.gamma_max);
    cfg.take("--gamma-res", "gamma-res", a.gamma_res);
    cfg.take("--x0", "x0", a.x0);
    cfg.take("--A", "A", a.scale);
    cfg.take("--kappa", "kappa", a.kappa);
    cfg.take("--csv", "csv", a.csv);
    cfg.take("--svg", "svg", a.svg);
    cfg.finish();

    const levmap::PhaseGrid grid =
        levmap::sweep({a.lambda_min, a.lambda_max, a.lambda_res},
                      {a.gamma_min, a.gamma_max, a.gamma_res}, a.x0, a.scale, a.kappa);
    write_output(a.csv, levmap::to_csv(grid));
    if (!a.svg.empty()) {
        write_output(a.svg, levmap::to_svg(grid));
    }
    return 0;
}

// ------------------------------------------------------------ option-match

struct OptionMatchArgs {
    bool atm{false};
    double lambda{kUnset};
    double sigma{kUnset};
    double S{100.0};
    double r{0.0};
    std::string config;
};

int run_option_match(CLI::App* sub, OptionMatchArgs& a) {
    ConfigMerge cfg(sub, a.config);
    bool cfg_atm = a.atm;
    cfg.take("--atm", "atm", cfg_atm);
    a.atm = cfg_atm;
    cfg.take("--lambda", "lambda", a.lambda);
    cfg.take("--sigma", "sigma", a.sigma);
    cfg.take("--S", "S", a.S);
    cfg.take("--r", "r", a.r);
    cfg.finish();
    require_present(a.lambda, "--lambda");
    require_present(a.sigma, "--sigma");

    if (a.atm) {
        try {
            const levmap::AtmSolution sol = levmap::atm_match(a.lambda, a.sigma);
            if (!sol.bounded) {
                std::cout << "{\"solution\":\"unbounded\",\"cap\":"
                          << fmt_num(levmap::kAtmRootCap) << "}\n";
                return 0;
            }
            const double n_d1 = levmap::norm_cdf(0.5 * sol.sigma_root_tau);
            const double target = 1.0 / (2.0 - a.sigma / a.lambda);
            std::cout << "{\"sigma_root_tau\":" << fmt_num(sol.sigma_root_tau)
                      << ",\"n_d1\":" << fmt_num(n_d1)
                      << ",\"residual\":" << fmt_num(std::abs(n_d1 - target)) << "}\n";
        } catch (const levmap::NoSolutionError&) {
            std::cout << "{\"solution\":null}\n";
        }
        return 0;
    }

    const auto result = levmap::general_match({a.S, a.sigma, a.r, a.lambda});
    if (!result) {
        std::cout << "{\"solution\":null}\n";
        return 0;
    }
    std::cout << "{\"K\":" << fmt_num(result->K) << ",\"tau\":" << fmt_num(result->tau)
              << ",\"n_d1\":" << fmt_num(result->n_d1)
              << ",\"n_d2\":" << fmt_num(result->n_d2)
              << ",\"resid_stock\":" << fmt_num(result->resid_stock)
              << ",\"resid_bond\":" << fmt_num(result->resid_bond) << "}\n";
    return 0;
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
    std::string input{"-"};
    std::string column{"x"};
    int min_len{8};
    std::string config;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(text, &used);
        while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
            ++used;
        return used == text.size();
    } catch (...) {
        return false;
    }
}

std::vector<double> read_return_column(std::istream& in, const std::string& column) {
    std::vector<double> xs;
    std::string line;
    std::size_t col = 0;
    bool saw_header = false;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (first) {
            first = false;
            bool all_numeric = true;
            double ignored;
            for (const auto& f : fields) {
                if (!parse_double(f, ignored)) {
                    all_numeric = false;
                    break;
                }
            }
            if (!all_numeric) {
                saw_header = true;
                bool found = false;
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (fields[i] == column) {
                        col = i;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    throw levmap::InvalidParameterError("input has no column named '" +
                                                        column + "'");
                }
                continue;
            }
        }
        if (fields.size() <= col) {
            throw levmap::InvalidParameterError("CSV row has too few fields");
        }
        double value;
        if (!parse_double(fields[col], value)) {
            throw levmap::InvalidParameterError("non-numeric value in return column: " +
                                                fields[col]);
        }
        xs.push_back(value);
    }
    (void)saw_header;
    return xs;
}

int run_detect(CLI::App* sub, DetectArgs& a) {
    ConfigMerge cfg(sub, a.config);
    cfg.take("--input", "input", a.input);
    cfg.take("--column", "column", a.column);
    cfg.take("--min-len", "min-len", a.min_len);
    cfg.finish();

    std::vector<double> xs;
    if (a.input.empty() || a.input == "-") {
        xs = read_return_column(std::cin, a.column);
    } else {
        std::ifstream in(a.input);
        if (!in) {
            throw levmap::InvalidParameterError("cannot open input file: " + a.input);
        }
        xs = read_return_column(in, a.column);
    }
    const auto phase = levmap::detect_phase(xs, a.min_len);
    if (!phase) {
        std::cout << "inconclusive,NONE\n";
        return 0;
    }
    const levmap::StrategyAdvice advice = levmap::advise(*phase);
    std::cout << levmap::to_string(*phase) << "," << levmap::to_string(advice.action)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic Kelly-rebalancing / price-impact feedback toolkit"};
    app.require_subcommand(1);

    LeverageArgs lev_args;
    CLI::App* lev = app.add_subcommand(
        "leverage", "Kelly-optimal leverage (GBM beliefs or a geometric Levy model)");
    lev->add_option("--lambda", lev_args.lambda, "market price of risk");
    lev->add_option("--sigma", lev_args.sigma, "volatility (> 0)");
    lev->add_option("--r", lev_args.r, "short rate (default 0)");
    lev->add_option("--model", lev_args.model,
                    "Levy model: brownian, poisson-jump, jump-diffusion");
    lev->add_option("--m", lev_args.intensity, "jump intensity for jump models");
    lev->add_option("--config", lev_args.config, "JSON config file");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "iterate the rebalance/impact feedback map, CSV trajectory out");
    sim->add_option("--mode", sim_args.mode, "frozen (pure 1-D map) or full");
    sim->add_option("--leverage", sim_args.leverage, "leverage ratio (default 2)");
    sim->add_option("--gamma", sim_args.gamma, "impact exponent (default 0.5)");
    sim->add_option("--kappa", sim_args.kappa, "impact coefficient (default 1)");
    sim->add_option("--A", sim_args.scale, "frozen rebalance scale (default 1)");
    sim->add_option("--x0", sim_args.x0, "initial relative price change (default 0.5)");
    sim->add_option("--steps", sim_args.steps, "number of map applications (default 100)");
    sim->add_option("--sigma", sim_args.sigma, "full mode: volatility (default 0.2)");
    sim->add_option("--r", sim_args.r, "full mode: short rate (default 0)");
    sim->add_option("--dt", sim_args.dt, "full mode: time per step (default 1)");
    sim->add_option("--S0", sim_args.S0, "initial price (default 1)");
    sim->add_option("--V0", sim_args.V0, "initial portfolio value (default 1)");
    sim->add_option("--out", sim_args.out, "output CSV path (default stdout)");
    sim->add_option("--config", sim_args.config, "JSON config file");

    SweepArgs sweep_args;
    CLI::App* swp = app.add_subcommand(
        "sweep", "phase-classify a (leverage, gamma) grid; CSV and optional SVG");
    swp->add_option("--lambda-min", sweep_args.lambda_min, "leverage axis start");
    swp->add_option("--lambda-max", sweep_args.lambda_max, "leverage axis end");
    swp->add_option("--lambda-res", sweep_args.lambda_res, "leverage axis nodes");
    swp->add_option("--gamma-min", sweep_args.gamma_min, "gamma axis start");
    swp->add_option("--gamma-max", sweep_args.gamma_max, "gamma axis end");
    swp->add_option("--gamma-res", sweep_args.gamma_res, "gamma axis nodes");
    swp->add_option("--x0", sweep_args.x0, "fixed initial change (default 0.01)");
    swp->add_option("--A", sweep_args.scale, "frozen rebalance scale (default 1)");
    swp->add_option("--kappa", sweep_args.kappa, "impact coefficient (default 1)");
    swp->add_option("--csv", sweep_args.csv, "CSV output path (default stdout)");
    swp->add_option("--svg", sweep_args.svg, "SVG heatmap output path");
    swp->add_option("--config", sweep_args.config, "JSON config file");

    OptionMatchArgs om_args;
    CLI::App* om = app.add_subcommand(
        "option-match", "find the call whose replicating weights are Kelly-optimal");
    om->add_flag("--atm", om_args.atm, "at-the-money closed form (r = 0)");
    om->add_option("--lambda", om_args.lambda, "market price of risk");
    om->add_option("--sigma", om_args.sigma, "volatility (> 0)");
    om->add_option("--S", om_args.S, "spot price (default 100)");
    om->add_option("--r", om_args.r, "rate (default 0)");
    om->add_option("--config", om_args.config, "JSON config file");

    DetectArgs det_args;
    CLI::App* det = app.add_subcommand(
        "detect", "detect the phase of a CSV return column, print phase,action");
    det->add_option("--input", det_args.input, "CSV path or - for stdin (default -)");
    det->add_option("--column", det_args.column, "column name when a header is present");
    det->add_option("--min-len", det_args.min_len, "minimum sequence length (default 8)");
    det->add_option("--config", det_args.config, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (lev->parsed()) return run_leverage(lev, lev_args);
        if (sim->parsed()) return run_simulate(sim, sim_args);
        if (swp->parsed()) return run_sweep(swp, sweep_args);
        if (om->parsed()) return run_option_match(om, om_args);
        if (det->parsed()) return run_detect(det, det_args);
    } catch (const levmap::InvalidParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const levmap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
