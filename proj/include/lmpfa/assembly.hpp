#pragma once

#include <ostream>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "lmpfa/grid.hpp"
#include "lmpfa/model.hpp"
#include "lmpfa/stencil.hpp"
#include "lmpfa/transmissibility.hpp"
#include "lmpfa/upwind.hpp"

namespace lmpfa {

enum class Scheme { FittedFiniteVolume, LMPFA_Up1, LMPFA_Up2, FittedLMPFA_Up1, FittedLMPFA_Up2 };

/// CLI names: fitted-fv, lmpfa-up1, lmpfa-up2, fitted-lmpfa-up1, fitted-lmpfa-up2.
std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

/// L-MPFA schemes with the fitted band rows.
bool is_fitted_lmpfa(Scheme s);
UpwindOrder upwind_order(Scheme s);

/// Diffusion flux balance (7-point stencil per row), not scaled by cell measure.
StencilOperator assemble_diffusion(const Grid2D& grid, const TensorField& tensors);
StencilOperator assemble_diffusion(const Grid2D& grid, const TransmissibilityField& transmissibilities);

/// Convection flux balance, not scaled by cell measure.
StencilOperator assemble_convection(const Grid2D& grid, const ConvectionField& field, UpwindOrder order);

/// Semi-discrete operator dV/dtau = A V + F(tau) (+ penalty) of one scheme.
///
/// A = L^{-1} (flux balance) + lambda I, with L the diagonal of cell measures.
/// Boundary couplings stay in the rows and are applied to the Dirichlet data
/// in forcing().
class SpatialDiscretization {
public:
    SpatialDiscretization(Scheme scheme, const Grid2D& grid, const ProblemSpec& spec);

    Scheme scheme() const { return scheme_; }
    const Grid2D& grid() const { return grid_; }
    const ProblemSpec& spec() const { return spec_; }

    /// Rows of A including the boundary couplings.
    const StencilOperator& op() const { return op_; }
    /// Unscaled flux balance (diffusion + convection), no reaction.
    const StencilOperator& flux_balance() const { return flux_; }

    /// Interior part of A as a sparse matrix.
    Eigen::SparseMatrix<double> matrix() const { return op_.interior_matrix(); }
    /// F(tau) = L^{-1} times the boundary couplings applied to the Dirichlet data.
    std::vector<double> forcing(double tau) const;
    std::vector<double> forcing(const NodeField& boundary) const;

private:
    Scheme scheme_;
    Grid2D grid_;
    ProblemSpec spec_;
    StencilOperator flux_;
    StencilOperator op_;
};

struct AssembledSystem {
    StencilOperator A;
    std::vector<double> F;
};

AssembledSystem assemble_system(Scheme scheme, const Grid2D& grid, const ProblemSpec& spec, double tau);

/// Triplet dump `row col value` (1-based, interior part) after the header line
/// `# lmpfa-pricer matrix N=<N> scheme=<name>`.
void write_matrix_dump(std::ostream& out, const StencilOperator& op, Scheme scheme);

}  // namespace lmpfa
