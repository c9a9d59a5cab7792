#include "lmpfa/upwind.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmpfa {

namespace {

void check_index(const Grid2D& grid, int i, int j) {
    if (i < 1 || j < 1 || i > grid.n() || j > grid.n()) {
        throw std::out_of_range("upwind row index outside 1..N");
    }
}

struct FaceData {
    double s;      // velocity component along the face's coordinate axis
    double sign;   // +1 for east/north (outward = +axis), -1 for west/south
    double length;
    Offset ahead;  // neighbour across the face
};

FaceData face_data(const Grid2D& grid, const ConvectionField& field, int i, int j, Face face) {
    switch (face) {
        case Face::East: return {field.fx_at(i), 1.0, grid.y().width(j), {1, 0}};
        case Face::West: return {field.fx_at(i - 1), -1.0, grid.y().width(j), {-1, 0}};
        case Face::North: return {field.fy_at(j), 1.0, grid.x().width(i), {0, 1}};
        case Face::South: return {field.fy_at(j - 1), -1.0, grid.x().width(i), {0, -1}};
    }
    throw std::invalid_argument("unknown face");
}

Offset scaled(Offset o, int k) { return {o.di * k, o.dj * k}; }

}  // namespace

StencilRow upwind1_face(const Grid2D& grid, const ConvectionField& field, int i, int j, Face face) {
    check_index(grid, i, j);
    const FaceData d = face_data(grid, field, i, j, face);
    const double flux = d.sign * d.s * d.length;  // (f.n) |face|
    StencilRow row;
    if (flux >= 0.0) {
        row.add({0, 0}, flux);
    } else {
        row.add(d.ahead, flux);
    }
    return row;
}

StencilRow upwind2_face(const Grid2D& grid, const ConvectionField& field, int i, int j, Face face) {
    check_index(grid, i, j);
    const FaceData d = face_data(grid, field, i, j, face);
    const double flux = d.sign * d.s * d.length;
    // Upwind side is taken along f: for s >= 0 the cell with the smaller index.
    const bool lower_side = d.s >= 0.0;
    const int dir = d.sign > 0.0 ? 1 : -1;  // +1 if `ahead` has the larger index
    Offset up;
    Offset upup;
    if (lower_side == (dir > 0)) {
        up = {0, 0};
        upup = scaled(d.ahead, -1);
    } else {
        up = d.ahead;
        upup = scaled(d.ahead, 2);
    }
    StencilRow row;
    row.add(up, 1.5 * flux);
    row.add(upup, -0.5 * flux);
    return row;
}

StencilRow upwind1_row(const Grid2D& grid, const ConvectionField& field, int i, int j) {
    StencilRow row;
    for (Face f : {Face::East, Face::North, Face::West, Face::South}) {
        row += upwind1_face(grid, field, i, j, f);
    }
    return row;
}

bool upwind2_falls_back(const Grid2D& grid, int i, int j) {
    const int n = grid.n();
    return i == 1 || j == 1 || i == n || j == n;
}

StencilRow upwind2_row(const Grid2D& grid, const ConvectionField& field, int i, int j) {
    check_index(grid, i, j);
    if (upwind2_falls_back(grid, i, j)) {
        return upwind1_row(grid, field, i, j);
    }
    StencilRow row;
    for (Face f : {Face::East, Face::North, Face::West, Face::South}) {
        row += upwind2_face(grid, field, i, j, f);
    }
    return row;
}

StencilRow upwind_row(UpwindOrder order, const Grid2D& grid, const ConvectionField& field, int i, int j) {
    return order == UpwindOrder::First ? upwind1_row(grid, field, i, j) : upwind2_row(grid, field, i, j);
}

}  // namespace lmpfa
