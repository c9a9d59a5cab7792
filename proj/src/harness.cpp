#include "lmpfa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "lmpfa/reference.hpp"
#include "lmpfa/surface_io.hpp"

namespace lmpfa {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw std::invalid_argument("bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return v;
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

template <class T>
std::string join(const std::vector<T>& items) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k > 0) {
            out += ',';
        }
        if constexpr (std::is_same_v<T, Scheme>) {
            out += to_string(items[k]);
        } else {
            out += std::to_string(items[k]);
        }
    }
    return out;
}

std::string setting_value(const RunConfig& c, const std::string& key) {
    const MarketParams& m = c.spec.market;
    if (key == "grid") return join(c.grids);
    if (key == "steps") return join(c.steps);
    if (key == "theta") return fmt(c.solver.theta);
    if (key == "scheme") return join(c.schemes);
    if (key == "option") return std::string(to_string(c.spec.style));
    if (key == "beta") return fmt(c.spec.penalty.beta);
    if (key == "kpow") return fmt(c.spec.penalty.k);
    if (key == "epsilon") return fmt(c.spec.penalty.epsilon);
    if (key == "payoff") return std::string(to_string(c.spec.payoff));
    if (key == "boundary") return std::string(to_string(c.spec.boundary));
    if (key == "reference") return to_string(c.reference);
    if (key == "reference-scheme") return std::string(to_string(c.reference_scheme));
    if (key == "out") return c.out_dir.string();
    if (key == "seed") return std::to_string(c.seed);
    if (key == "mc-paths") return std::to_string(c.mc_paths);
    if (key == "threads") return std::to_string(c.threads);
    if (key == "sigma1") return fmt(m.sigma1);
    if (key == "sigma2") return fmt(m.sigma2);
    if (key == "rho") return fmt(m.rho);
    if (key == "r") return fmt(m.r);
    if (key == "strike") return fmt(m.K);
    if (key == "maturity") return fmt(m.T);
    if (key == "alpha1") return fmt(m.alpha1);
    if (key == "alpha2") return fmt(m.alpha2);
    if (key == "xmax") return fmt(c.spec.x_max);
    if (key == "ymax") return fmt(c.spec.y_max);
    if (key == "solver") return std::string(to_string(c.solver.linear.kind));
    if (key == "newton-tol") return fmt(c.solver.newton_tol);
    if (key == "newton-max-iter") return std::to_string(c.solver.newton_max_iter);
    if (key == "linear-tol") return fmt(c.solver.linear.tolerance);
    throw std::invalid_argument("unknown setting '" + key + "'");
}

// Position of x on the axis as (k, w): value = (1 - w) f_k + w f_{k+1}.
std::pair<int, double> locate(const Axis1D& axis, double x) {
    const auto& nodes = axis.nodes();
    const double tol = 1e-12 * axis.extent();
    if (x < nodes.front() - tol || x > nodes.back() + tol) {
        throw std::invalid_argument("resample: target node outside the source domain");
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int k = static_cast<int>(it - nodes.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(nodes.size()) - 1);
    if (std::abs(x - nodes[static_cast<std::size_t>(k)]) <= tol) {
        return {k, 0.0};
    }
    if (k + 1 < static_cast<int>(nodes.size()) && std::abs(x - nodes[static_cast<std::size_t>(k) + 1]) <= tol) {
        return {k + 1, 0.0};
    }
    const double xl = nodes[static_cast<std::size_t>(k)];
    const double xr = nodes[static_cast<std::size_t>(k) + 1];
    return {k, (x - xl) / (xr - xl)};
}

bool axis_nested(const Axis1D& coarse, const Axis1D& fine) {
    for (double x : coarse.nodes()) {
        if (locate(fine, x).second != 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace

ReferenceMode parse_reference(std::string_view text) {
    const std::string t = trim(text);
    ReferenceMode mode;
    if (t == "analytic") {
        return mode;
    }
    if (t.rfind("stored:", 0) == 0) {
        mode.kind = ReferenceKind::Stored;
        mode.path = t.substr(7);
        if (mode.path.empty()) {
            throw std::invalid_argument("reference stored:<path> needs a path");
        }
        return mode;
    }
    if (t.rfind("self:", 0) == 0) {
        const auto parts = split(std::string_view(t).substr(5), ',');
        if (parts.size() != 2) {
            throw std::invalid_argument("reference self:<Nref>,<Mref> needs two integers");
        }
        mode.kind = ReferenceKind::SelfRefined;
        mode.n_ref = parse_number<int>("reference", parts[0]);
        mode.m_ref = parse_number<int>("reference", parts[1]);
        if (mode.n_ref < 1 || mode.m_ref < 1) {
            throw std::invalid_argument("reference grid and step count must be positive");
        }
        return mode;
    }
    throw std::invalid_argument("unknown reference mode '" + t + "' (analytic | stored:<path> | self:<Nref>,<Mref>)");
}

std::string to_string(const ReferenceMode& mode) {
    switch (mode.kind) {
        case ReferenceKind::Analytic:
            return "analytic";
        case ReferenceKind::Stored:
            return "stored:" + mode.path;
        case ReferenceKind::SelfRefined:
            return "self:" + std::to_string(mode.n_ref) + "," + std::to_string(mode.m_ref);
    }
    return "analytic";
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_number<int>("list", item));
    }
    return out;
}

std::vector<Scheme> parse_scheme_list(std::string_view text) {
    if (trim(text) == "all") {
        return all_schemes();
    }
    std::vector<Scheme> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_scheme(item));
    }
    return out;
}

const std::vector<std::string>& setting_keys() {
    static const std::vector<std::string> keys{
        "grid",     "steps",  "theta",  "scheme",   "option",     "beta",   "kpow",   "epsilon",
        "payoff",   "boundary", "reference", "reference-scheme", "out", "seed", "mc-paths", "threads",
        "sigma1",   "sigma2", "rho",    "r",        "strike",     "maturity", "alpha1", "alpha2",
        "xmax",     "ymax",   "solver", "newton-tol", "newton-max-iter", "linear-tol"};
    return keys;
}

void apply_setting(RunConfig& c, std::string_view key_in, std::string_view value_in) {
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    MarketParams& m = c.spec.market;
    if (key == "grid") {
        c.grids = parse_int_list(value);
    } else if (key == "steps") {
        c.steps = parse_int_list(value);
    } else if (key == "theta") {
        c.solver.theta = parse_number<double>(key, value);
    } else if (key == "scheme") {
        c.schemes = parse_scheme_list(value);
    } else if (key == "option") {
        c.spec.style = parse_option_style(value);
    } else if (key == "beta") {
        c.spec.penalty.beta = parse_number<double>(key, value);
    } else if (key == "kpow") {
        c.spec.penalty.k = parse_number<double>(key, value);
    } else if (key == "epsilon") {
        c.spec.penalty.epsilon = parse_number<double>(key, value);
    } else if (key == "payoff") {
        c.spec.payoff = parse_payoff(value);
        if (!c.boundary_set) {
            c.spec.boundary = default_boundary(c.spec.payoff);
        }
    } else if (key == "boundary") {
        c.spec.boundary = parse_boundary(value);
        c.boundary_set = true;
    } else if (key == "reference") {
        c.reference = parse_reference(value);
    } else if (key == "reference-scheme") {
        c.reference_scheme = parse_scheme(value);
    } else if (key == "out") {
        c.out_dir = value;
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "mc-paths") {
        c.mc_paths = parse_number<std::int64_t>(key, value);
    } else if (key == "threads") {
        c.threads = parse_number<unsigned>(key, value);
    } else if (key == "sigma1") {
        m.sigma1 = parse_number<double>(key, value);
    } else if (key == "sigma2") {
        m.sigma2 = parse_number<double>(key, value);
    } else if (key == "rho") {
        m.rho = parse_number<double>(key, value);
    } else if (key == "r") {
        m.r = parse_number<double>(key, value);
    } else if (key == "strike") {
        m.K = parse_number<double>(key, value);
    } else if (key == "maturity") {
        m.T = parse_number<double>(key, value);
    } else if (key == "alpha1") {
        m.alpha1 = parse_number<double>(key, value);
    } else if (key == "alpha2") {
        m.alpha2 = parse_number<double>(key, value);
    } else if (key == "xmax") {
        c.spec.x_max = parse_number<double>(key, value);
    } else if (key == "ymax") {
        c.spec.y_max = parse_number<double>(key, value);
    } else if (key == "solver") {
        c.solver.linear.kind = parse_linear_solver(value);
    } else if (key == "newton-tol") {
        c.solver.newton_tol = parse_number<double>(key, value);
    } else if (key == "newton-max-iter") {
        c.solver.newton_max_iter = parse_number<int>(key, value);
    } else if (key == "linear-tol") {
        c.solver.linear.tolerance = parse_number<double>(key, value);
    } else {
        throw std::invalid_argument("unknown setting '" + key + "'");
    }
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

void RunConfig::validate() const {
    spec.validate();
    solver.validate();
    if (grids.empty()) {
        throw std::invalid_argument("grid list is empty");
    }
    if (steps.empty()) {
        throw std::invalid_argument("step list is empty");
    }
    if (schemes.empty()) {
        throw std::invalid_argument("scheme list is empty");
    }
    for (int n : grids) {
        if (n < 2) {
            throw std::invalid_argument("grid sizes must be at least 2");
        }
    }
    for (int m : steps) {
        if (m < 1) {
            throw std::invalid_argument("step counts must be positive");
        }
    }
}

double l2_relative_error(const NodeField& numeric, const NodeField& reference, const Grid2D& grid) {
    if (numeric.nodes_per_axis() != grid.nodes_per_axis() || reference.nodes_per_axis() != grid.nodes_per_axis()) {
        throw std::invalid_argument("l2_relative_error: surfaces are not on the given grid");
    }
    double num = 0.0;
    double den = 0.0;
    for (int i = 1; i <= grid.n(); ++i) {
        for (int j = 1; j <= grid.n(); ++j) {
            const double w = grid.measure(i, j);
            const double d = numeric(i, j) - reference(i, j);
            num += w * d * d;
            den += w * reference(i, j) * reference(i, j);
        }
    }
    if (!(den > 0.0)) {
        throw std::invalid_argument("l2_relative_error: reference has zero norm");
    }
    return std::sqrt(num) / std::sqrt(den);
}

double l2_relative_error(const PriceSurface& numeric, const PriceSurface& reference, const Grid2D& grid) {
    return l2_relative_error(numeric.values, reference.values, grid);
}

bool nodes_nested(const Grid2D& coarse, const Grid2D& fine) {
    if (coarse.x().extent() != fine.x().extent() || coarse.y().extent() != fine.y().extent()) {
        return false;
    }
    return axis_nested(coarse.x(), fine.x()) && axis_nested(coarse.y(), fine.y());
}

NodeField resample(const NodeField& field, const Grid2D& from, const Grid2D& to) {
    if (field.nodes_per_axis() != from.nodes_per_axis()) {
        throw std::invalid_argument("resample: field does not live on the source grid");
    }
    const int m = to.nodes_per_axis();
    std::vector<std::pair<int, double>> px(static_cast<std::size_t>(m));
    std::vector<std::pair<int, double>> py(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        px[static_cast<std::size_t>(k)] = locate(from.x(), to.x().node(k));
        py[static_cast<std::size_t>(k)] = locate(from.y(), to.y().node(k));
    }
    NodeField out(m);
    for (int i = 0; i < m; ++i) {
        const auto [a, wx] = px[static_cast<std::size_t>(i)];
        for (int j = 0; j < m; ++j) {
            const auto [b, wy] = py[static_cast<std::size_t>(j)];
            double v = (1.0 - wx) * (1.0 - wy) * field(a, b);
            if (wx != 0.0) v += wx * (1.0 - wy) * field(a + 1, b);
            if (wy != 0.0) v += (1.0 - wx) * wy * field(a, b + 1);
            if (wx != 0.0 && wy != 0.0) v += wx * wy * field(a + 1, b + 1);
            out(i, j) = v;
        }
    }
    return out;
}

ReferenceSource prepare_reference(const RunConfig& config, std::ostream* log) {
    ReferenceSource src;
    src.kind = config.reference.kind;
    const ProblemSpec& spec = config.spec;
    switch (config.reference.kind) {
        case ReferenceKind::Analytic:
            break;
        case ReferenceKind::Stored: {
            PriceSurface s = load_surface(config.reference.path);
            Grid2D g = build_uniform_grid(s.n(), s.x_max, s.y_max);
            if (s.x_max != spec.x_max || s.y_max != spec.y_max) {
                throw GridMismatchError("stored reference covers [0," + fmt(s.x_max) + "]x[0," + fmt(s.y_max) +
                                        "], the problem covers [0," + fmt(spec.x_max) + "]x[0," +
                                        fmt(spec.y_max) + "]");
            }
            if (s.payoff != spec.payoff) {
                throw std::invalid_argument("stored reference payoff differs from the configured payoff");
            }
            if (std::abs(s.tau - spec.market.T) > 1e-12 * spec.market.T) {
                throw std::invalid_argument("stored reference is not at tau = T");
            }
            src.surface = std::move(s);
            src.grid = std::move(g);
            break;
        }
        case ReferenceKind::SelfRefined: {
            Grid2D g = build_uniform_grid(config.reference.n_ref, spec.x_max, spec.y_max);
            if (log != nullptr) {
                *log << "reference: " << to_string(config.reference_scheme) << " N=" << config.reference.n_ref
                     << " M=" << config.reference.m_ref << '\n';
            }
            src.surface = solve(spec, config.reference_scheme, g, TimeGrid{config.reference.m_ref, spec.market.T},
                                config.solver);
            src.grid = std::move(g);
            break;
        }
    }
    return src;
}

NodeField reference_on(const ReferenceSource& source, const ProblemSpec& spec, const Grid2D& grid,
                       bool* interpolated) {
    if (interpolated != nullptr) {
        *interpolated = false;
    }
    if (source.kind == ReferenceKind::Analytic) {
        return analytic_surface(spec, grid).values;
    }
    if (!source.surface || !source.grid) {
        throw std::logic_error("reference source not prepared");
    }
    if (interpolated != nullptr) {
        *interpolated = !nodes_nested(grid, *source.grid);
    }
    return resample(source.surface->values, *source.grid, grid);
}

ErrorTable run_table(const RunConfig& config, std::ostream* log) {
    config.validate();
    using clock = std::chrono::steady_clock;
    std::mutex log_mutex;

    ErrorTable table;
    table.schemes = config.schemes;
    const auto t0 = clock::now();
    const ReferenceSource source = prepare_reference(config, log);
    table.reference_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    struct GridRef {
        Grid2D grid;
        NodeField values;
        bool interpolated;
    };
    std::vector<GridRef> refs;
    for (int n : config.grids) {
        Grid2D g = build_uniform_grid(n, config.spec.x_max, config.spec.y_max);
        bool interp = false;
        NodeField v = reference_on(source, config.spec, g, &interp);
        refs.push_back({std::move(g), std::move(v), interp});
    }

    for (int n : config.grids) {
        for (int m : config.steps) {
            table.rows.push_back({n, m, std::vector<ErrorCell>(config.schemes.size())});
        }
    }

    const std::size_t ncols = config.schemes.size();
    const std::size_t ntasks = table.rows.size() * ncols;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < ntasks; t = next++) {
            const std::size_t r = t / ncols;
            const std::size_t c = t % ncols;
            ErrorRow& row = table.rows[r];
            ErrorCell& cell = row.cells[c];
            const GridRef& ref = refs[r / config.steps.size()];
            const Scheme scheme = config.schemes[c];
            const auto start = clock::now();
            try {
                const PriceSurface s =
                    solve(config.spec, scheme, ref.grid, TimeGrid{row.steps, config.spec.market.T}, config.solver);
                const double e = l2_relative_error(s.values, ref.values, ref.grid);
                if (!std::isfinite(e)) {
                    throw std::runtime_error("non-finite error");
                }
                cell.error = e;
            } catch (const std::exception& ex) {
                cell.failure = ex.what();
            }
            cell.interpolated = ref.interpolated;
            cell.seconds = std::chrono::duration<double>(clock::now() - start).count();
            if (log != nullptr) {
                std::lock_guard<std::mutex> lock(log_mutex);
                *log << "N=" << row.n << " M=" << row.steps << ' ' << to_string(scheme) << ": "
                     << (cell.error ? fmt(*cell.error) : "FAIL (" + cell.failure + ")") << " [" << cell.seconds
                     << " s]\n";
            }
        }
    };
    unsigned nthreads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, ntasks));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nthreads; ++k) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return table;
}

void write_table_csv(std::ostream& out, const ErrorTable& table) {
    out << "grid,N,M";
    for (Scheme s : table.schemes) {
        out << ',' << to_string(s);
    }
    out << '\n';
    for (const ErrorRow& row : table.rows) {
        out << row.n + 1 << 'x' << row.n + 1 << ',' << row.n << ',' << row.steps;
        for (const ErrorCell& cell : row.cells) {
            out << ',' << (cell.error ? fmt(*cell.error) : std::string("FAIL"));
        }
        out << '\n';
    }
}

void write_manifest(std::ostream& out, const RunConfig& config, const ErrorTable* table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json settings;
    for (const auto& key : setting_keys()) {
        settings[key] = setting_value(config, key);
    }
    j["settings"] = settings;

    const PenaltyParams eff = config.spec.effective_penalty();
    nlohmann::ordered_json defaults;
    defaults["grid_reading"] = "grid entries are interior-unknown counts N; table label is (N+1)x(N+1)";
    defaults["effective_beta"] = eff.beta;
    defaults["penalty_exponent"] = eff.exponent();
    defaults["effective_epsilon"] = eff.epsilon;
    defaults["newton_max_iter"] = config.solver.newton_max_iter;
    defaults["linear_solver"] = std::string(to_string(config.solver.linear.kind));
    defaults["direct_solver_limit_N"] = config.solver.linear.direct_limit;
    defaults["krylov_max_iterations"] = config.solver.linear.max_iterations;
    defaults["boundary"] = std::string(to_string(config.spec.boundary));
    defaults["lambda"] = -3.0 * config.spec.market.r + config.spec.market.sigma1 * config.spec.market.sigma1 +
                         config.spec.market.sigma2 * config.spec.market.sigma2 +
                         config.spec.market.rho * config.spec.market.sigma1 * config.spec.market.sigma2;
    j["defaults"] = defaults;

    if (table != nullptr) {
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (const ErrorRow& row : table->rows) {
            for (std::size_t c = 0; c < row.cells.size(); ++c) {
                const ErrorCell& cell = row.cells[c];
                nlohmann::ordered_json e;
                e["N"] = row.n;
                e["M"] = row.steps;
                e["scheme"] = std::string(to_string(table->schemes[c]));
                if (cell.error) {
                    e["error"] = *cell.error;
                } else {
                    e["error"] = nullptr;
                    e["failure"] = cell.failure;
                }
                e["reference_interpolated"] = cell.interpolated;
                e["seconds"] = cell.seconds;
                cells.push_back(e);
            }
        }
        j["cells"] = cells;
        j["reference_seconds"] = table->reference_seconds;
    }
    out << j.dump(2) << '\n';
}

PriceSurface run_price(const RunConfig& config, std::ostream* diagnostics, SolveReport* report) {
    config.validate();
    const Grid2D grid = build_uniform_grid(config.grids.front(), config.spec.x_max, config.spec.y_max);
    return solve(config.spec, config.schemes.front(), grid, TimeGrid{config.steps.front(), config.spec.market.T},
                 config.solver, diagnostics, report);
}

}  // namespace lmpfa
