#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace lmpfa {

/// Plain 2D vector used for points, normals and gradients.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Rotation by -pi/2: (x, y) -> (y, -x).
constexpr Vec2 rotate(Vec2 v) { return {v.y, -v.x}; }

/// One coordinate axis of the truncated domain.
///
/// Nodes x_0 = 0 < x_1 < ... < x_{N+1} = x_max. Control-volume faces sit at the
/// node midpoints x_{i+1/2}; the two outermost faces collapse onto the end
/// nodes (x_{-1/2} = x_0, x_{N+3/2} = x_{N+1}), so the end cells are half cells.
class Axis1D {
public:
    /// Takes the full node vector including both end nodes.
    explicit Axis1D(std::vector<double> nodes);

    /// Number of interior unknowns N (nodes minus the two end nodes).
    int interior() const { return static_cast<int>(nodes_.size()) - 2; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    double extent() const { return nodes_.back(); }

    double node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    const std::vector<double>& nodes() const { return nodes_; }

    /// x_{i-1/2}, with x_{-1/2} = x_0.
    double face_left(int i) const;
    /// x_{i+1/2}, with x_{N+3/2} = x_{N+1}.
    double face_right(int i) const;
    /// h_i = x_{i+1/2} - x_{i-1/2}.
    double width(int i) const { return face_right(i) - face_left(i); }

private:
    std::vector<double> nodes_;
};

/// Tensor-product grid of the truncated domain [0, x_max] x [0, y_max].
///
/// Interior unknowns are the nodes (i, j) with 1 <= i, j <= N; nodes with an
/// index in {0, N+1} carry Dirichlet data.
class Grid2D {
public:
    Grid2D(Axis1D x, Axis1D y);

    const Axis1D& x() const { return x_; }
    const Axis1D& y() const { return y_; }
    int n() const { return x_.interior(); }
    int nodes_per_axis() const { return n() + 2; }

    Vec2 node(int i, int j) const { return {x_.node(i), y_.node(j)}; }
    double measure(int i, int j) const { return x_.width(i) * y_.width(j); }
    bool is_boundary(int i, int j) const;

private:
    Axis1D x_;
    Axis1D y_;
};

/// Uniform grid with N interior unknowns per axis and spacing extent/(N+1).
Grid2D build_uniform_grid(int n, double x_max, double y_max);

/// Grid from user-supplied node vectors (both including the end nodes).
Grid2D build_grid(std::vector<double> x_nodes, std::vector<double> y_nodes);

/// Geometry of the interaction volume R_ij = [x_{i-1}, x_i] x [y_{j-1}, y_j].
///
/// Corner numbering: 1 = (i-1, j-1), 2 = (i, j-1), 3 = (i, j), 4 = (i-1, j).
/// Half-edges: 1 separates corners 1|2, 2 separates 2|3, 3 separates 4|3,
/// 4 separates 1|4. Half-edge p runs from edge_mid[p] to the centre point;
/// normals[p] points along +x (half-edges 1, 3) or +y (2, 4) and has the
/// half-edge's length. Arrays are indexed 0..3 for p = 1..4.
struct InteractionVolumeGeometry {
    int i = 0;
    int j = 0;
    std::array<Vec2, 4> corners{};
    std::array<std::array<int, 2>, 4> corner_nodes{};
    std::array<Vec2, 4> edge_mid{};
    Vec2 centre{};
    std::array<Vec2, 4> normals{};

    /// Corner indices (0-based) separated by half-edge p (0-based): {from, to},
    /// where the normal points from `from` into `to`.
    static constexpr std::array<std::array<int, 2>, 4> half_edge_cells{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};
};

/// Builds R_ij for 1 <= i, j <= N+1. Throws std::out_of_range otherwise.
InteractionVolumeGeometry interaction_volume(const Grid2D& grid, int i, int j);

}  // namespace lmpfa
