#include "lmpfa/grid.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace lmpfa {

Axis1D::Axis1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 4) {
        throw std::invalid_argument("axis needs at least two interior nodes");
    }
    if (nodes_.front() != 0.0) {
        throw std::invalid_argument("axis must start at 0");
    }
    for (std::size_t k = 1; k < nodes_.size(); ++k) {
        if (!(nodes_[k] > nodes_[k - 1])) {
            throw std::invalid_argument("axis nodes must be strictly increasing");
        }
    }
}

double Axis1D::face_left(int i) const {
    if (i <= 0) {
        return nodes_.front();
    }
    return 0.5 * (node(i - 1) + node(i));
}

double Axis1D::face_right(int i) const {
    if (i >= node_count() - 1) {
        return nodes_.back();
    }
    return 0.5 * (node(i) + node(i + 1));
}

Grid2D::Grid2D(Axis1D x, Axis1D y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.interior() != y_.interior()) {
        throw std::invalid_argument("both axes must carry the same number of interior nodes");
    }
}

bool Grid2D::is_boundary(int i, int j) const {
    const int last = n() + 1;
    return i == 0 || j == 0 || i == last || j == last;
}

namespace {

std::vector<double> uniform_nodes(int n, double extent) {
    std::vector<double> nodes(static_cast<std::size_t>(n) + 2);
    const double h = extent / static_cast<double>(n + 1);
    for (int k = 0; k <= n + 1; ++k) {
        nodes[static_cast<std::size_t>(k)] = h * k;
    }
    nodes.back() = extent;
    return nodes;
}

}  // namespace

Grid2D build_uniform_grid(int n, double x_max, double y_max) {
    if (n < 2) {
        throw std::invalid_argument("grid needs N >= 2 interior nodes per axis, got " + std::to_string(n));
    }
    if (!(x_max > 0.0) || !(y_max > 0.0)) {
        throw std::invalid_argument("domain extents must be positive");
    }
    return Grid2D(Axis1D(uniform_nodes(n, x_max)), Axis1D(uniform_nodes(n, y_max)));
}

Grid2D build_grid(std::vector<double> x_nodes, std::vector<double> y_nodes) {
    return Grid2D(Axis1D(std::move(x_nodes)), Axis1D(std::move(y_nodes)));
}

InteractionVolumeGeometry interaction_volume(const Grid2D& grid, int i, int j) {
    const int last = grid.n() + 1;
    if (i < 1 || j < 1 || i > last || j > last) {
        throw std::out_of_range("interaction volume (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside 1.." + std::to_string(last));
    }
    InteractionVolumeGeometry g;
    g.i = i;
    g.j = j;
    g.corner_nodes = {{{i - 1, j - 1}, {i, j - 1}, {i, j}, {i - 1, j}}};
    for (int c = 0; c < 4; ++c) {
        g.corners[c] = grid.node(g.corner_nodes[c][0], g.corner_nodes[c][1]);
    }

    const double x0 = grid.x().node(i - 1);
    const double x1 = grid.x().node(i);
    const double y0 = grid.y().node(j - 1);
    const double y1 = grid.y().node(j);
    const double xm = grid.x().face_right(i - 1);
    const double ym = grid.y().face_right(j - 1);

    g.centre = {xm, ym};
    g.edge_mid = {Vec2{xm, y0}, Vec2{x1, ym}, Vec2{xm, y1}, Vec2{x0, ym}};
    g.normals = {Vec2{ym - y0, 0.0}, Vec2{0.0, x1 - xm}, Vec2{y1 - ym, 0.0}, Vec2{0.0, xm - x0}};
    return g;
}

}  // namespace lmpfa
