#include "lmpfa/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace lmpfa {

void MarketParams::validate() const {
    if (sigma1 < 0.0 || sigma2 < 0.0) {
        throw std::invalid_argument("volatilities must be non-negative");
    }
    if (std::abs(rho) > 1.0) {
        throw std::invalid_argument("correlation must lie in [-1, 1]");
    }
    if (!(T > 0.0)) {
        throw std::invalid_argument("maturity must be positive");
    }
    if (!(K > 0.0)) {
        throw std::invalid_argument("strike must be positive");
    }
}

void PenaltyParams::validate() const {
    if (beta < 0.0) {
        throw std::invalid_argument("penalty parameter beta must be non-negative");
    }
    if (!(k > 0.0)) {
        throw std::invalid_argument("penalty power k must be positive");
    }
    if (!std::isfinite(epsilon)) {
        throw std::invalid_argument("smoothing radius must be finite");
    }
}

std::string_view to_string(PayoffKind p) {
    switch (p) {
        case PayoffKind::BasketPut: return "basket-put";
        case PayoffKind::CallOnMax: return "call-on-max";
    }
    throw std::invalid_argument("unknown payoff");
}

std::string_view to_string(OptionStyle s) {
    switch (s) {
        case OptionStyle::European: return "european";
        case OptionStyle::American: return "american";
    }
    throw std::invalid_argument("unknown option style");
}

std::string_view to_string(BoundaryKind b) {
    switch (b) {
        case BoundaryKind::CallFarField: return "call-far-field";
        case BoundaryKind::StrikeNearField: return "strike-near-field";
    }
    throw std::invalid_argument("unknown boundary kind");
}

std::string_view to_string(Edge e) {
    switch (e) {
        case Edge::West: return "west";
        case Edge::South: return "south";
        case Edge::East: return "east";
        case Edge::North: return "north";
    }
    throw std::invalid_argument("unknown edge tag");
}

PayoffKind parse_payoff(std::string_view name) {
    if (name == "basket-put") return PayoffKind::BasketPut;
    if (name == "call-on-max") return PayoffKind::CallOnMax;
    throw std::invalid_argument("unknown payoff '" + std::string(name) + "'");
}

OptionStyle parse_option_style(std::string_view name) {
    if (name == "european") return OptionStyle::European;
    if (name == "american") return OptionStyle::American;
    throw std::invalid_argument("unknown option style '" + std::string(name) + "'");
}

BoundaryKind parse_boundary(std::string_view name) {
    if (name == "call-far-field") return BoundaryKind::CallFarField;
    if (name == "strike-near-field") return BoundaryKind::StrikeNearField;
    throw std::invalid_argument("unknown boundary kind '" + std::string(name) + "'");
}

Edge parse_edge(std::string_view name) {
    if (name == "west") return Edge::West;
    if (name == "south") return Edge::South;
    if (name == "east") return Edge::East;
    if (name == "north") return Edge::North;
    throw std::invalid_argument("unknown edge tag '" + std::string(name) + "'");
}

BoundaryKind default_boundary(PayoffKind p) {
    return p == PayoffKind::CallOnMax ? BoundaryKind::CallFarField : BoundaryKind::StrikeNearField;
}

CellTensor averaged_tensor(const MarketParams& market, double xl, double xr, double yl, double yr) {
    if (!(xr > xl) || !(yr > yl)) {
        throw std::invalid_argument("control volume has zero width");
    }
    if (xl < 0.0 || yl < 0.0) {
        throw std::invalid_argument("control volume bounds must be non-negative");
    }
    // (b^3 - a^3) / (b - a) = a^2 + ab + b^2
    const double cx = xl * xl + xl * xr + xr * xr;
    const double cy = yl * yl + yl * yr + yr * yr;
    const double s12 = market.rho * market.sigma1 * market.sigma2;
    return {market.sigma1 * market.sigma1 / 6.0 * cx, s12 / 8.0 * (xr + xl) * (yr + yl),
            market.sigma2 * market.sigma2 / 6.0 * cy};
}

TensorField::TensorField(int nodes_per_axis, CellTensor fill)
    : m_(nodes_per_axis),
      cells_(static_cast<std::size_t>(nodes_per_axis) * static_cast<std::size_t>(nodes_per_axis), fill) {}

namespace {

// Averaging interval of control volume i. The far boundary node gets a cell
// mirrored across the edge, centred on the node.
std::pair<double, double> averaging_bounds(const Axis1D& axis, int i) {
    const double left = axis.face_left(i);
    if (i == axis.node_count() - 1) {
        return {left, 2.0 * axis.node(i) - left};
    }
    return {left, axis.face_right(i)};
}

}  // namespace

TensorField::TensorField(const MarketParams& market, const Grid2D& grid) : TensorField(grid.nodes_per_axis()) {
    for (int i = 0; i < m_; ++i) {
        const auto [xl, xr] = averaging_bounds(grid.x(), i);
        for (int j = 0; j < m_; ++j) {
            const auto [yl, yr] = averaging_bounds(grid.y(), j);
            at(i, j) = averaged_tensor(market, xl, xr, yl, yr);
        }
    }
}

std::size_t TensorField::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= m_ || j >= m_) {
        throw std::out_of_range("tensor index outside the grid");
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j);
}

namespace {

std::vector<double> scaled_faces(const Axis1D& axis, double c) {
    // index k holds c * x_{k-1/2} for k = 0 .. N+2
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(axis.node_count()) + 1);
    f.push_back(c * axis.face_left(0));
    for (int i = 0; i < axis.node_count(); ++i) {
        f.push_back(c * axis.face_right(i));
    }
    return f;
}

}  // namespace

ConvectionField::ConvectionField(const MarketParams& m, const Grid2D& grid)
    : ConvectionField(m.r - m.sigma1 * m.sigma1 - 0.5 * m.rho * m.sigma1 * m.sigma2,
                      m.r - m.sigma2 * m.sigma2 - 0.5 * m.rho * m.sigma1 * m.sigma2,
                      -3.0 * m.r + m.sigma1 * m.sigma1 + m.sigma2 * m.sigma2 + m.rho * m.sigma1 * m.sigma2, grid) {}

ConvectionField::ConvectionField(double cx, double cy, double lambda, const Grid2D& grid)
    : ConvectionField(scaled_faces(grid.x(), cx), scaled_faces(grid.y(), cy), lambda) {}

ConvectionField::ConvectionField(std::vector<double> fx_faces, std::vector<double> fy_faces, double lambda)
    : lambda_(lambda), fx_(std::move(fx_faces)), fy_(std::move(fy_faces)) {
    if (fx_.size() != fy_.size() || fx_.size() < 5) {
        throw std::invalid_argument("face velocity vectors must both hold N+3 samples");
    }
}

double ProblemSpec::payoff_value(double x, double y) const {
    switch (payoff) {
        case PayoffKind::BasketPut: return std::max(market.K - market.alpha1 * x - market.alpha2 * y, 0.0);
        case PayoffKind::CallOnMax: return std::max(std::max(x, y) - market.K, 0.0);
    }
    throw std::invalid_argument("unknown payoff");
}

PenaltyParams ProblemSpec::effective_penalty() const {
    PenaltyParams p = penalty;
    if (style == OptionStyle::European) {
        p.beta = 0.0;
    }
    if (p.epsilon < 0.0) {
        p.epsilon = 1e-8 * market.K;
    }
    return p;
}

void ProblemSpec::validate() const {
    market.validate();
    penalty.validate();
    if (!(x_max > 0.0) || !(y_max > 0.0)) {
        throw std::invalid_argument("domain extents must be positive");
    }
    if (payoff == PayoffKind::BasketPut && std::abs(market.alpha1 + market.alpha2 - 1.0) > 1e-12) {
        throw std::invalid_argument("basket weights must sum to one");
    }
}

double boundary_value(const ProblemSpec& spec, Edge edge, double position, double tau) {
    if (tau < 0.0 || tau > spec.market.T * (1.0 + 1e-12)) {
        throw std::invalid_argument("boundary time outside [0, T]");
    }
    if (spec.custom_boundary) {
        return spec.custom_boundary(edge, position, tau);
    }
    const bool near = edge == Edge::West || edge == Edge::South;
    if (edge != Edge::West && edge != Edge::South && edge != Edge::East && edge != Edge::North) {
        throw std::invalid_argument("unknown edge tag");
    }
    switch (spec.boundary) {
        case BoundaryKind::CallFarField: {
            if (near) {
                return 0.0;
            }
            const double extent = edge == Edge::East ? spec.x_max : spec.y_max;
            return extent - spec.market.K * std::exp(-spec.market.r * tau);
        }
        case BoundaryKind::StrikeNearField:
            return near ? spec.market.K : 0.0;
    }
    throw std::invalid_argument("unknown boundary kind");
}

PriceSurface payoff_surface(const ProblemSpec& spec, const Grid2D& grid) {
    PriceSurface s{NodeField(grid.nodes_per_axis()), grid.x().extent(), grid.y().extent(), 0.0, spec.payoff};
    for (int i = 0; i < grid.nodes_per_axis(); ++i) {
        for (int j = 0; j < grid.nodes_per_axis(); ++j) {
            const Vec2 p = grid.node(i, j);
            s.values(i, j) = spec.payoff_value(p.x, p.y);
        }
    }
    return s;
}

NodeField boundary_field(const ProblemSpec& spec, const Grid2D& grid, double tau) {
    const int m = grid.nodes_per_axis();
    const int last = m - 1;
    NodeField f(m);
    for (int k = 0; k < m; ++k) {
        const double xk = grid.x().node(k);
        const double yk = grid.y().node(k);
        f(0, k) = boundary_value(spec, Edge::West, yk, tau);
        f(k, 0) = boundary_value(spec, Edge::South, xk, tau);
    }
    f(0, 0) = boundary_value(spec, Edge::West, 0.0, tau);
    for (int k = 0; k < m; ++k) {
        f(k, last) = boundary_value(spec, Edge::North, grid.x().node(k), tau);
        f(last, k) = boundary_value(spec, Edge::East, grid.y().node(k), tau);
    }
    return f;
}

}  // namespace lmpfa
