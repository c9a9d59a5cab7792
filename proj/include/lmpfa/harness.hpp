#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lmpfa/assembly.hpp"
#include "lmpfa/model.hpp"
#include "lmpfa/timestepper.hpp"

namespace lmpfa {

enum class ReferenceKind { Analytic, Stored, SelfRefined };

/// analytic | stored:<path> | self:<Nref>,<Mref>
struct ReferenceMode {
    ReferenceKind kind = ReferenceKind::Analytic;
    std::string path;
    int n_ref = 0;
    int m_ref = 0;
};

ReferenceMode parse_reference(std::string_view text);
std::string to_string(const ReferenceMode& mode);

/// "49,69,84" -> {49, 69, 84}. Entries are interior-unknown counts N; a grid
/// labelled L x L in a table has N = L - 1.
std::vector<int> parse_int_list(std::string_view text);
/// Comma-separated scheme names, or "all".
std::vector<Scheme> parse_scheme_list(std::string_view text);

struct RunConfig {
    ProblemSpec spec;
    std::vector<Scheme> schemes{Scheme::LMPFA_Up1};
    std::vector<int> grids{49};
    std::vector<int> steps{64};
    SolverSettings solver;
    ReferenceMode reference;
    /// Scheme used to build a self-refined reference.
    Scheme reference_scheme = Scheme::FittedLMPFA_Up2;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 20240601;
    std::int64_t mc_paths = 0;  ///< price: Monte Carlo check at the strike point when > 0
    unsigned threads = 0;       ///< 0 = hardware concurrency
    bool boundary_set = false;  ///< boundary given explicitly, else follows the payoff

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Applies one `key=value` setting; keys are the CLI flag names without
/// dashes. Throws std::invalid_argument on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat `key=value` lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Keys understood by apply_setting, in manifest order.
const std::vector<std::string>& setting_keys();

/// Relative L2 error over interior cells weighted by the cell measures.
/// Throws std::invalid_argument on shape mismatch or a zero reference.
double l2_relative_error(const NodeField& numeric, const NodeField& reference, const Grid2D& grid);
double l2_relative_error(const PriceSurface& numeric, const PriceSurface& reference, const Grid2D& grid);

/// True when every node of `coarse` is (to rounding) a node of `fine`.
bool nodes_nested(const Grid2D& coarse, const Grid2D& fine);

/// Values of `field` (on `from`) at the nodes of `to`: injection where nodes
/// coincide, bilinear interpolation elsewhere.
NodeField resample(const NodeField& field, const Grid2D& from, const Grid2D& to);

struct ErrorCell {
    std::optional<double> error;
    std::string failure;   ///< empty on success
    bool interpolated = false;  ///< reference was interpolated onto this grid
    double seconds = 0.0;
};

struct ErrorRow {
    int n = 0;
    int steps = 0;
    std::vector<ErrorCell> cells;  ///< one per scheme, in table order
};

struct ErrorTable {
    std::vector<Scheme> schemes;
    std::vector<ErrorRow> rows;  ///< ordered by (N, M) as configured
    double reference_seconds = 0.0;
};

/// Solves every (N, M, scheme) cell and compares against the configured
/// reference. Cells run in parallel; a failing cell is recorded and the run
/// continues. Progress lines go to `log` when given.
ErrorTable run_table(const RunConfig& config, std::ostream* log = nullptr);

/// Reference surface on `grid` for the configured mode. `self_reference` is
/// the precomputed fine solution for SelfRefined.
struct ReferenceSource {
    ReferenceKind kind = ReferenceKind::Analytic;
    std::optional<PriceSurface> surface;  ///< Stored / SelfRefined
    std::optional<Grid2D> grid;
};
ReferenceSource prepare_reference(const RunConfig& config, std::ostream* log = nullptr);
NodeField reference_on(const ReferenceSource& source, const ProblemSpec& spec, const Grid2D& grid,
                       bool* interpolated = nullptr);

/// Columns: grid,N,M,<scheme names...>; failing cells hold `FAIL`.
void write_table_csv(std::ostream& out, const ErrorTable& table);
/// Every config value and default in effect, plus per-cell timings.
void write_manifest(std::ostream& out, const RunConfig& config, const ErrorTable* table);

/// `price` subcommand: one surface for the first grid, step count and scheme.
PriceSurface run_price(const RunConfig& config, std::ostream* diagnostics = nullptr, SolveReport* report = nullptr);

}  // namespace lmpfa
