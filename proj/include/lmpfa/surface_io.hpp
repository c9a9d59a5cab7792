#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "lmpfa/grid.hpp"
#include "lmpfa/model.hpp"

namespace lmpfa {

class SurfaceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Header `# lmpfa-surface N=<N> xmax=<v> ymax=<v> tau=<v> payoff=<name>`
/// followed by N+2 lines of N+2 values; line i holds x index i, ascending y.
/// Values are written with enough digits to read back bitwise.
void write_surface(std::ostream& out, const PriceSurface& surface);
PriceSurface read_surface(std::istream& in);

void dump_surface(const PriceSurface& surface, const std::filesystem::path& path);
PriceSurface load_surface(const std::filesystem::path& path);

/// Loads and checks N and the extents against `grid`.
PriceSurface load_surface(const std::filesystem::path& path, const Grid2D& grid);

/// Throws GridMismatchError unless the surface was written for `grid`.
void check_surface_grid(const PriceSurface& surface, const Grid2D& grid);

}  // namespace lmpfa
