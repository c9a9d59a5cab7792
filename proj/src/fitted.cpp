#include "lmpfa/fitted.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lmpfa {

DegenerateCoefficients west_coefficients(const MarketParams& m) {
    const double s12 = m.rho * m.sigma1 * m.sigma2;
    return {0.5 * m.sigma1 * m.sigma1, m.r - m.sigma1 * m.sigma1 - 0.5 * s12, 0.5 * s12};
}

DegenerateCoefficients south_coefficients(const MarketParams& m) {
    const double s12 = m.rho * m.sigma1 * m.sigma2;
    return {0.5 * m.sigma2 * m.sigma2, m.r - m.sigma2 * m.sigma2 - 0.5 * s12, 0.5 * s12};
}

namespace {

// Flux along the degenerate axis through the face at (first node)/2 of the
// normal axis: `normal` is the axis crossing the face, `along` the face axis.
FittedEdgeFlux degenerate_flux(const DegenerateCoefficients& c, const Axis1D& normal, const Axis1D& along, int k) {
    if (k < 1 || k > along.interior()) {
        throw std::out_of_range("degenerate edge index outside 1..N");
    }
    const double x1 = normal.node(1);
    const double xh = normal.face_right(0);
    const double len = along.width(k);
    const double d = c.d_factor * along.node(k);
    const double dy = along.node(k + 1) - along.node(k);
    const double s = xh / x1;  // relative position of the face inside (0, x_1)
    FittedEdgeFlux f;
    f.boundary = len * xh * (-c.a * s + c.b * (1.0 - s));
    f.first = len * xh * (c.a + c.b) * s - xh * d * len / dy;
    f.diagonal = xh * d * len / dy;
    return f;
}

}  // namespace

FittedEdgeFlux fitted_west_flux(const MarketParams& market, const Grid2D& grid, int j) {
    return degenerate_flux(west_coefficients(market), grid.x(), grid.y(), j);
}

FittedEdgeFlux fitted_south_flux(const MarketParams& market, const Grid2D& grid, int i) {
    return degenerate_flux(south_coefficients(market), grid.y(), grid.x(), i);
}

bool is_degenerate_face(int i, int j, Face face) {
    return (face == Face::West && i == 1) || (face == Face::South && j == 1);
}

StencilRow fitted_face(const MarketParams& market, const Grid2D& grid, int i, int j, Face face) {
    StencilRow row;
    if (face == Face::West && i == 1) {
        const FittedEdgeFlux f = fitted_west_flux(market, grid, j);
        row.add({-1, 0}, -f.boundary);
        row.add({0, 0}, -f.first);
        row.add({0, 1}, -f.diagonal);
        return row;
    }
    if (face == Face::South && j == 1) {
        const FittedEdgeFlux f = fitted_south_flux(market, grid, i);
        row.add({0, -1}, -f.boundary);
        row.add({0, 0}, -f.first);
        row.add({1, 0}, -f.diagonal);
        return row;
    }
    throw std::invalid_argument("face is not on the degenerate boundary");
}

StencilRow fitted_row(const Grid2D& grid, const MarketParams& market, const TransmissibilityField& transmissibilities,
                      const ConvectionField& convection, UpwindOrder /*order*/, int i, int j) {
    if (i < 1 || j < 1 || i > grid.n() || j > grid.n()) {
        throw std::out_of_range("fitted row index outside 1..N");
    }
    if (i != 1 && j != 1) {
        throw std::invalid_argument("fitted row requested outside the degenerate band");
    }
    StencilRow row;
    for (Face f : {Face::East, Face::North, Face::West, Face::South}) {
        if (is_degenerate_face(i, j, f)) {
            row += fitted_face(market, grid, i, j, f);
        } else {
            row += diffusion_face(transmissibilities, i, j, f);
            row += upwind1_face(grid, convection, i, j, f);
        }
    }
    return row;
}

std::pair<double, double> exponential_fit_weights(double a, double b, double x_lo, double x_hi) {
    if (!(x_lo > 0.0) || !(x_hi > x_lo)) {
        throw std::invalid_argument("exponential fit needs 0 < x_lo < x_hi");
    }
    if (a == 0.0) {
        // pure convection limit of the local solution
        if (b > 0.0) return {b, 0.0};
        if (b < 0.0) return {0.0, -b};
        return {0.0, 0.0};
    }
    const double log_ratio = std::log(x_lo / x_hi);
    const double z = (b / a) * log_ratio;
    if (std::abs(z) < 1e-10) {
        const double w = -a / log_ratio;
        return {w, w};
    }
    return {-b / std::expm1(z), b / std::expm1(-z)};
}

StencilRow fitted_fv_face(const MarketParams& market, const Grid2D& grid, int i, int j, Face face) {
    if (i < 1 || j < 1 || i > grid.n() || j > grid.n()) {
        throw std::out_of_range("fitted finite volume index outside 1..N");
    }
    if (is_degenerate_face(i, j, face)) {
        return fitted_face(market, grid, i, j, face);
    }
    const bool x_dir = face == Face::East || face == Face::West;
    const bool positive = face == Face::East || face == Face::North;
    const Axis1D& normal = x_dir ? grid.x() : grid.y();
    const Axis1D& along = x_dir ? grid.y() : grid.x();
    const DegenerateCoefficients c = x_dir ? west_coefficients(market) : south_coefficients(market);
    const int k = x_dir ? i : j;       // index along the normal
    const int m = x_dir ? j : i;       // index along the face
    const int lo = positive ? k : k - 1;
    const double x_lo = normal.node(lo);
    const double x_hi = normal.node(lo + 1);
    const double xm = normal.face_right(lo);
    const double len = along.width(m);
    const auto [w_hi, w_lo] = exponential_fit_weights(c.a, c.b, x_lo, x_hi);
    const double cross = xm * c.d_factor * along.node(m) * len / (along.node(m + 1) - along.node(m));

    // Offsets in (normal, along) coordinates, mapped to (di, dj).
    auto off = [x_dir](int dn, int da) { return x_dir ? Offset{dn, da} : Offset{da, dn}; };
    const int lo_rel = lo - k;
    const double sign = positive ? 1.0 : -1.0;
    StencilRow row;
    row.add(off(lo_rel + 1, 0), sign * xm * len * w_hi);
    row.add(off(lo_rel, 0), -sign * xm * len * w_lo);
    for (int side : {lo_rel, lo_rel + 1}) {
        row.add(off(side, 1), sign * 0.5 * cross);
        row.add(off(side, 0), -sign * 0.5 * cross);
    }
    return row;
}

StencilRow fitted_fv_row(const MarketParams& market, const Grid2D& grid, int i, int j) {
    StencilRow row;
    for (Face f : {Face::East, Face::North, Face::West, Face::South}) {
        row += fitted_fv_face(market, grid, i, j, f);
    }
    return row;
}

}  // namespace lmpfa
