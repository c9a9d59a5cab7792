#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lmpfa/grid.hpp"
#include "lmpfa/stencil.hpp"

namespace lmpfa {

/// Market data of the two-asset problem.
struct MarketParams {
    double sigma1 = 0.3;
    double sigma2 = 0.3;
    double rho = 0.3;
    double r = 0.08;
    double K = 100.0;
    double T = 1.0 / 12.0;
    double alpha1 = 0.5;  ///< basket weight on asset 1
    double alpha2 = 0.5;  ///< basket weight on asset 2

    /// Throws std::invalid_argument on out-of-range values. Volatilities may
    /// be zero (degenerate limit used in tests); negative values are rejected.
    void validate() const;
};

/// Penalty term beta * [max_eps(V* - V)]^(1/k).
struct PenaltyParams {
    double beta = 0.0;
    double k = 0.5;
    double epsilon = -1.0;  ///< smoothing radius of the bracket; 0 = exact max, negative = 1e-8 K

    double exponent() const { return 1.0 / k; }
    void validate() const;
};

enum class PayoffKind { BasketPut, CallOnMax };
enum class OptionStyle { European, American };

/// Dirichlet data families. CallFarField: 0 on x=0 and y=0, x_max - K e^{-r tau}
/// and y_max - K e^{-r tau} on the far edges. StrikeNearField: K on the near
/// edges, 0 on the far edges.
enum class BoundaryKind { CallFarField, StrikeNearField };

/// Domain edges. West: x = 0, South: y = 0, East: x = x_max, North: y = y_max.
enum class Edge { West, South, East, North };

std::string_view to_string(PayoffKind p);
std::string_view to_string(OptionStyle s);
std::string_view to_string(BoundaryKind b);
std::string_view to_string(Edge e);
PayoffKind parse_payoff(std::string_view name);
OptionStyle parse_option_style(std::string_view name);
BoundaryKind parse_boundary(std::string_view name);
Edge parse_edge(std::string_view name);

/// Boundary family matching the payoff: call-like data for the call on the
/// maximum, strike data for the basket put.
BoundaryKind default_boundary(PayoffKind p);

/// Cell-averaged diffusion tensor of one control volume.
struct CellTensor {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    double determinant() const { return m11 * m22 - m12 * m12; }
    /// M * v
    Vec2 apply(Vec2 v) const { return {m11 * v.x + m12 * v.y, m12 * v.x + m22 * v.y}; }
};

/// Average of the Black-Scholes diffusion tensor over [xl, xr] x [yl, yr].
CellTensor averaged_tensor(const MarketParams& market, double xl, double xr, double yl, double yr);

/// Averaged tensors for every control volume of the grid, boundary half
/// cells included.
class TensorField {
public:
    TensorField(int nodes_per_axis, CellTensor fill = {});
    TensorField(const MarketParams& market, const Grid2D& grid);

    const CellTensor& at(int i, int j) const { return cells_[index(i, j)]; }
    CellTensor& at(int i, int j) { return cells_[index(i, j)]; }
    int nodes_per_axis() const { return m_; }

private:
    std::size_t index(int i, int j) const;
    int m_;
    std::vector<CellTensor> cells_;
};

/// Convection field f sampled on control-volume faces, plus the reaction
/// coefficient lambda of the divergence form. The market field is
/// f = (cx x, cy y).
class ConvectionField {
public:
    ConvectionField(const MarketParams& market, const Grid2D& grid);
    /// f = (cx x, cy y) with a given lambda.
    ConvectionField(double cx, double cy, double lambda, const Grid2D& grid);
    /// Arbitrary face samples; entry k of each vector is the velocity on face
    /// k - 1/2 for k = 0 .. N+2.
    ConvectionField(std::vector<double> fx_faces, std::vector<double> fy_faces, double lambda);

    /// fx on the east face of column i, i.e. at x_{i+1/2}.
    double fx_at(int i) const { return fx_.at(static_cast<std::size_t>(i + 1)); }
    /// fy on the north face of row j, i.e. at y_{j+1/2}.
    double fy_at(int j) const { return fy_.at(static_cast<std::size_t>(j + 1)); }
    double lambda() const { return lambda_; }

private:
    double lambda_;
    std::vector<double> fx_;
    std::vector<double> fy_;
};

/// Full problem description.
struct ProblemSpec {
    MarketParams market;
    PenaltyParams penalty;
    PayoffKind payoff = PayoffKind::CallOnMax;
    OptionStyle style = OptionStyle::European;
    BoundaryKind boundary = BoundaryKind::CallFarField;
    double x_max = 300.0;
    double y_max = 300.0;
    /// Optional override of the Dirichlet data: (edge, position, tau) -> value.
    std::function<double(Edge, double, double)> custom_boundary;

    double payoff_value(double x, double y) const;
    /// Penalty actually applied: beta forced to zero for European options and
    /// a negative epsilon replaced by 1e-8 K.
    PenaltyParams effective_penalty() const;
    void validate() const;
};

/// Dirichlet datum on `edge` at the given coordinate along the edge.
double boundary_value(const ProblemSpec& spec, Edge edge, double position, double tau);

/// Option values on all grid nodes with their metadata.
struct PriceSurface {
    NodeField values;
    double x_max = 0.0;
    double y_max = 0.0;
    double tau = 0.0;
    PayoffKind payoff = PayoffKind::CallOnMax;

    int n() const { return values.nodes_per_axis() - 2; }
};

/// Payoff sampled on every node, boundary included.
PriceSurface payoff_surface(const ProblemSpec& spec, const Grid2D& grid);

/// Dirichlet values at time tau on the boundary nodes (interior nodes zero).
/// At corners shared by a near and a far edge the far edge wins; (0,0) uses
/// the west edge and (x_max, y_max) the east edge.
NodeField boundary_field(const ProblemSpec& spec, const Grid2D& grid, double tau);

}  // namespace lmpfa
