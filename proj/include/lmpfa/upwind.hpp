#pragma once

#include "lmpfa/grid.hpp"
#include "lmpfa/model.hpp"
#include "lmpfa/stencil.hpp"

namespace lmpfa {

enum class UpwindOrder { First, Second };

/// Outward convective flux (f.n) V through one face of C_ij with the
/// first-order upwind value: own cell when f.n >= 0, neighbour otherwise.
StencilRow upwind1_face(const Grid2D& grid, const ConvectionField& field, int i, int j, Face face);

/// Same face with the linearly extrapolated upwind value (3 V_up - V_upup) / 2.
/// Does not apply the boundary fallback; see upwind2_row.
StencilRow upwind2_face(const Grid2D& grid, const ConvectionField& field, int i, int j, Face face);

StencilRow upwind1_row(const Grid2D& grid, const ConvectionField& field, int i, int j);

/// Second-order row. Cells touching the boundary (i or j in {1, N}) use
/// upwind1_row unchanged.
StencilRow upwind2_row(const Grid2D& grid, const ConvectionField& field, int i, int j);

StencilRow upwind_row(UpwindOrder order, const Grid2D& grid, const ConvectionField& field, int i, int j);

/// True when upwind2_row falls back to the first-order row at (i, j).
bool upwind2_falls_back(const Grid2D& grid, int i, int j);

}  // namespace lmpfa
