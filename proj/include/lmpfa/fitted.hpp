#pragma once

#include "lmpfa/grid.hpp"
#include "lmpfa/model.hpp"
#include "lmpfa/stencil.hpp"
#include "lmpfa/transmissibility.hpp"
#include "lmpfa/upwind.hpp"

namespace lmpfa {

/// Flux along +x (west edge of C_1j) or +y (south edge of C_i1) through a
/// degenerate edge, diffusion and convection together.
struct FittedEdgeFlux {
    double boundary = 0.0;  ///< weight on V_{0,j} (west) or V_{i,0} (south)
    double first = 0.0;     ///< weight on V_{1,j} or V_{i,1}
    double diagonal = 0.0;  ///< weight on V_{1,j+1} or V_{i+1,1}

    double apply(double v_boundary, double v_first, double v_diagonal) const {
        return boundary * v_boundary + first * v_first + diagonal * v_diagonal;
    }
};

/// Coefficients of the one-dimensional flux x (a x V_x + b V) along x.
struct DegenerateCoefficients {
    double a = 0.0;
    double b = 0.0;
    double d_factor = 0.0;  ///< rho sigma1 sigma2 / 2; the cross weight is d_factor times the other coordinate
};

DegenerateCoefficients west_coefficients(const MarketParams& market);
DegenerateCoefficients south_coefficients(const MarketParams& market);

/// Flux through the west edge of C_1j from the linear solution of the local
/// two-point problem on (0, x_1), with a forward difference for V_y.
FittedEdgeFlux fitted_west_flux(const MarketParams& market, const Grid2D& grid, int j);
/// Mirror of fitted_west_flux for the south edge of C_i1.
FittedEdgeFlux fitted_south_flux(const MarketParams& market, const Grid2D& grid, int i);

/// Outward flux through the degenerate face (West with i = 1 or South with
/// j = 1) as a stencil row.
StencilRow fitted_face(const MarketParams& market, const Grid2D& grid, int i, int j, Face face);

/// Whether face `face` of C_ij lies on the degenerate boundary x = 0 or y = 0.
bool is_degenerate_face(int i, int j, Face face);

/// Flux balance of C_ij in the degenerate band (i = 1 or j = 1): degenerate
/// faces fitted, the others L-MPFA diffusion plus first-order upwind
/// convection (second-order rows fall back to first order next to the
/// boundary, so `order` does not change the result). No reaction, no scaling.
StencilRow fitted_row(const Grid2D& grid, const MarketParams& market, const TransmissibilityField& transmissibilities,
                      const ConvectionField& convection, UpwindOrder order, int i, int j);

/// Face flux of the fitted finite volume scheme: exponentially fitted
/// diffusion-convection along the face normal, forward-difference cross term
/// averaged over the two cells sharing the face, fitted linear flux on
/// degenerate faces. Outward sign.
StencilRow fitted_fv_face(const MarketParams& market, const Grid2D& grid, int i, int j, Face face);

/// Full flux balance of C_ij for the fitted finite volume scheme.
StencilRow fitted_fv_row(const MarketParams& market, const Grid2D& grid, int i, int j);

/// Weights (w_hi, w_lo) with x_m (a x V_x + b V) ~ x_m (w_hi V(x_hi) - w_lo V(x_lo))
/// from the exact solution of a x V' + b V = const on [x_lo, x_hi], x_lo > 0.
std::pair<double, double> exponential_fit_weights(double a, double b, double x_lo, double x_hi);

}  // namespace lmpfa
