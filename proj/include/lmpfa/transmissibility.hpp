#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmpfa/grid.hpp"
#include "lmpfa/model.hpp"
#include "lmpfa/stencil.hpp"

namespace lmpfa {

/// Raised when a local flux-continuity system cannot be inverted.
class SingularLocalSystem : public std::runtime_error {
public:
    SingularLocalSystem(int i, int j, const std::string& what);
    int i() const { return i_; }
    int j() const { return j_; }

private:
    int i_;
    int j_;
};

/// Gradient of the affine function taking values g1, g2, g3 at x1, x2, x3.
/// Throws std::invalid_argument for collinear corners.
Vec2 gradient_of_linear(Vec2 x1, Vec2 x2, Vec2 x3, double g1, double g2, double g3);

enum class Triangle { T1, T2 };

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat23 = std::array<std::array<double, 3>, 2>;

/// Flux continuity on one L-shaped triangle of an interaction volume.
///
/// Cell values W = (V_centre, V_p, V_q) and auxiliary edge values u = (u_p, u_q).
/// Half-edge fluxes are f = C u + D W and continuity reads A u = B W, so that
/// f = (C A^{-1} B + D) W.
///
/// T1: centre corner 2, p = corner 1 across half-edge 1, q = corner 3 across
/// half-edge 2. T2: centre corner 4, p = corner 3 across half-edge 3, q =
/// corner 1 across half-edge 4.
struct LocalTriangleSystem {
    Triangle triangle = Triangle::T1;
    std::array<int, 3> cells{};       ///< corner indices (0-based) of centre, p, q
    std::array<int, 2> half_edges{};  ///< half-edge indices (0-based) of p, q
    Mat2 C{};
    Mat23 D{};
    Mat2 A{};
    Mat23 B{};
    double condition = 0.0;  ///< 1-norm condition estimate of A
    bool ill_conditioned = false;

    /// Flux weights on (centre, p, q); throws SingularLocalSystem if A is singular.
    Mat23 flux_weights(int i, int j) const;
};

LocalTriangleSystem triangle_local_system(const InteractionVolumeGeometry& geom,
                                          const std::array<CellTensor, 4>& tensors, Triangle triangle);

/// Row p: flux through half-edge p (along its normal) as a combination of the
/// corner values (V_{i-1,j-1}, V_{i,j-1}, V_{ij}, V_{i-1,j}).
struct Transmissibility {
    std::array<std::array<double, 4>, 4> T{};

    std::array<double, 4> apply(const std::array<double, 4>& corner_values) const;
};

Transmissibility transmissibility(const InteractionVolumeGeometry& geom, const std::array<CellTensor, 4>& tensors);

/// Transmissibilities of every interaction volume R_ij, 1 <= i, j <= N+1.
class TransmissibilityField {
public:
    TransmissibilityField(const Grid2D& grid, const TensorField& tensors);

    const Transmissibility& at(int i, int j) const;
    int n() const { return n_; }

private:
    int n_;
    std::vector<Transmissibility> volumes_;
};

/// Outward diffusive flux through one face of control volume C_ij, as a
/// stencil over the (up to six) corner values of the two interaction volumes
/// sharing that face. Exact zero weights are omitted.
StencilRow diffusion_face(const TransmissibilityField& field, int i, int j, Face face);

/// Tensors of the four corner cells of R_ij in corner order.
std::array<CellTensor, 4> corner_tensors(const TensorField& tensors, int i, int j);

}  // namespace lmpfa
