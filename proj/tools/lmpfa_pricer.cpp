// Command line front end: price, table, dump-matrix.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lmpfa/harness.hpp"
#include "lmpfa/reference.hpp"
#include "lmpfa/surface_io.hpp"

namespace {

using lmpfa::RunConfig;

const std::map<std::string, std::string> kHelp{
    {"grid", "interior unknowns per axis, N[,N...] (a table label LxL is N = L-1)"},
    {"steps", "time steps M[,M...]"},
    {"theta", "theta of the time scheme (0.5 = Crank-Nicolson)"},
    {"scheme", "fitted-fv | lmpfa-up1 | lmpfa-up2 | fitted-lmpfa-up1 | fitted-lmpfa-up2, comma list or all"},
    {"option", "european | american"},
    {"beta", "penalty parameter"},
    {"kpow", "penalty k; the bracket is raised to 1/k"},
    {"epsilon", "smoothing radius of the penalty bracket (negative = 1e-8 K)"},
    {"payoff", "basket-put | call-on-max"},
    {"boundary", "call-far-field | strike-near-field (default follows the payoff)"},
    {"reference", "analytic | stored:<path> | self:<Nref>,<Mref>"},
    {"reference-scheme", "scheme of a self-refined reference"},
    {"out", "output directory"},
    {"seed", "Monte Carlo seed"},
    {"mc-paths", "price: Monte Carlo check at S1 = S2 = K with this many paths"},
    {"threads", "worker threads for table (0 = all cores)"},
    {"sigma1", "volatility of asset 1"},
    {"sigma2", "volatility of asset 2"},
    {"rho", "correlation"},
    {"r", "interest rate"},
    {"strike", "strike K"},
    {"maturity", "maturity T"},
    {"alpha1", "basket weight of asset 1"},
    {"alpha2", "basket weight of asset 2"},
    {"xmax", "domain extent in x"},
    {"ymax", "domain extent in y"},
    {"solver", "auto | direct | krylov"},
    {"newton-tol", "Newton tolerance on ||R||_inf / (1 + ||V||_inf)"},
    {"newton-max-iter", "Newton iteration cap per step"},
    {"linear-tol", "Krylov relative tolerance"},
};

std::filesystem::path prepare_out(const RunConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    return config.out_dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
}

// Bilinear value of the surface at (x, y).
double value_at(const lmpfa::PriceSurface& s, double x, double y) {
    const lmpfa::Grid2D from = lmpfa::build_uniform_grid(s.n(), s.x_max, s.y_max);
    const lmpfa::Grid2D point = lmpfa::build_grid({0.0, x, 0.5 * (x + s.x_max), s.x_max}, {0.0, y, 0.5 * (y + s.y_max), s.y_max});
    return lmpfa::resample(s.values, from, point)(1, 1);
}

int cmd_price(const RunConfig& config) {
    const auto dir = prepare_out(config);
    std::ostringstream diag;
    diag << "step\titers\tresidual\tmin_excess\n";
    const lmpfa::PriceSurface s = lmpfa::run_price(config, &diag);
    lmpfa::dump_surface(s, dir / "surface.txt");
    write_file(dir / "steps.tsv", diag.str());
    std::ostringstream manifest;
    lmpfa::write_manifest(manifest, config, nullptr);
    write_file(dir / "manifest.json", manifest.str());

    const double K = config.spec.market.K;
    std::cout << "scheme " << lmpfa::to_string(config.schemes.front()) << ", N=" << s.n() << ", M="
              << config.steps.front() << '\n';
    std::cout << "V(K, K) = " << value_at(s, K, K) << '\n';
    if (config.mc_paths > 0) {
        const auto in = lmpfa::AnalyticInputs::from_market(config.spec.market, K, K, config.spec.market.T);
        const auto mc = lmpfa::mc_price(in, config.spec.payoff, config.mc_paths, config.seed);
        std::cout << "Monte Carlo (European) = " << mc.price << " +- " << mc.standard_error << '\n';
        if (config.spec.payoff == lmpfa::PayoffKind::CallOnMax) {
            std::cout << "closed form = " << lmpfa::analytic_price(in) << '\n';
        }
    }
    std::cout << "surface written to " << (dir / "surface.txt").string() << '\n';
    return 0;
}

int cmd_table(const RunConfig& config) {
    const auto dir = prepare_out(config);
    const lmpfa::ErrorTable table = lmpfa::run_table(config, &std::cerr);
    std::ostringstream csv;
    lmpfa::write_table_csv(csv, table);
    write_file(dir / "table.csv", csv.str());
    std::ostringstream manifest;
    lmpfa::write_manifest(manifest, config, &table);
    write_file(dir / "manifest.json", manifest.str());
    std::cout << csv.str();
    bool failed = false;
    for (const auto& row : table.rows) {
        for (const auto& cell : row.cells) {
            failed = failed || !cell.error;
        }
    }
    return failed ? 2 : 0;
}

int cmd_dump(const RunConfig& config) {
    config.validate();
    const auto dir = prepare_out(config);
    const lmpfa::Grid2D grid = lmpfa::build_uniform_grid(config.grids.front(), config.spec.x_max, config.spec.y_max);
    const lmpfa::Scheme scheme = config.schemes.front();
    const lmpfa::SpatialDiscretization disc(scheme, grid, config.spec);
    const auto path = dir / ("matrix_N" + std::to_string(grid.n()) + "_" + std::string(lmpfa::to_string(scheme)) +
                             ".txt");
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    lmpfa::write_matrix_dump(out, disc.op(), scheme);
    std::cout << "matrix written to " << path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitted L-MPFA finite-volume pricer for two-asset options"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file; keys are the flag names, flags override it");
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    for (const auto& key : lmpfa::setting_keys()) {
        options[key] = app.add_option("--" + key, values[key], kHelp.at(key));
    }

    auto* price = app.add_subcommand("price", "solve one surface (first grid, step count and scheme)");
    auto* table = app.add_subcommand("table", "error study over grids, step counts and schemes");
    auto* dump = app.add_subcommand("dump-matrix", "write the interior operator as 1-based triplets");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config;
        if (!config_path.empty()) {
            for (const auto& [key, value] : lmpfa::read_config_file(config_path)) {
                lmpfa::apply_setting(config, key, value);
            }
        }
        // fixed order so payoff/boundary interplay does not depend on argv order
        for (const auto& key : lmpfa::setting_keys()) {
            if (options[key]->count() > 0) {
                lmpfa::apply_setting(config, key, values[key]);
            }
        }
        if (price->parsed()) {
            return cmd_price(config);
        }
        if (table->parsed()) {
            return cmd_table(config);
        }
        if (dump->parsed()) {
            return cmd_dump(config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
