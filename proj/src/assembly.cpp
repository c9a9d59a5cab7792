#include "lmpfa/assembly.hpp"

#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

#include "lmpfa/fitted.hpp"

namespace lmpfa {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::FittedFiniteVolume: return "fitted-fv";
        case Scheme::LMPFA_Up1: return "lmpfa-up1";
        case Scheme::LMPFA_Up2: return "lmpfa-up2";
        case Scheme::FittedLMPFA_Up1: return "fitted-lmpfa-up1";
        case Scheme::FittedLMPFA_Up2: return "fitted-lmpfa-up2";
    }
    throw std::invalid_argument("unknown scheme");
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : all_schemes()) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes{Scheme::FittedFiniteVolume, Scheme::LMPFA_Up1, Scheme::LMPFA_Up2,
                                             Scheme::FittedLMPFA_Up1, Scheme::FittedLMPFA_Up2};
    return schemes;
}

bool is_fitted_lmpfa(Scheme s) { return s == Scheme::FittedLMPFA_Up1 || s == Scheme::FittedLMPFA_Up2; }

UpwindOrder upwind_order(Scheme s) {
    return s == Scheme::LMPFA_Up2 || s == Scheme::FittedLMPFA_Up2 ? UpwindOrder::Second : UpwindOrder::First;
}

namespace {

StencilRow diffusion_row(const TransmissibilityField& t, int i, int j) {
    StencilRow row;
    for (Face f : {Face::East, Face::North, Face::West, Face::South}) {
        row += diffusion_face(t, i, j, f);
    }
    return row;
}

}  // namespace

StencilOperator assemble_diffusion(const Grid2D& grid, const TransmissibilityField& transmissibilities) {
    StencilOperator op(grid.n());
    for (int i = 1; i <= grid.n(); ++i) {
        for (int j = 1; j <= grid.n(); ++j) {
            op.row(i, j) = diffusion_row(transmissibilities, i, j);
        }
    }
    return op;
}

StencilOperator assemble_diffusion(const Grid2D& grid, const TensorField& tensors) {
    return assemble_diffusion(grid, TransmissibilityField(grid, tensors));
}

StencilOperator assemble_convection(const Grid2D& grid, const ConvectionField& field, UpwindOrder order) {
    StencilOperator op(grid.n());
    for (int i = 1; i <= grid.n(); ++i) {
        for (int j = 1; j <= grid.n(); ++j) {
            op.row(i, j) = upwind_row(order, grid, field, i, j);
        }
    }
    return op;
}

SpatialDiscretization::SpatialDiscretization(Scheme scheme, const Grid2D& grid, const ProblemSpec& spec)
    : scheme_(scheme), grid_(grid), spec_(spec), flux_(grid.n()), op_(grid.n()) {
    spec_.validate();
    if (grid.x().extent() != spec.x_max || grid.y().extent() != spec.y_max) {
        throw std::invalid_argument("grid extents do not match the problem domain");
    }
    const int n = grid.n();
    const ConvectionField convection(spec.market, grid);

    if (scheme == Scheme::FittedFiniteVolume) {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                flux_.row(i, j) = fitted_fv_row(spec.market, grid, i, j);
            }
        }
    } else {
        const TransmissibilityField transmissibilities(grid, TensorField(spec.market, grid));
        const UpwindOrder order = upwind_order(scheme);
        const bool fitted = is_fitted_lmpfa(scheme);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                if (fitted && (i == 1 || j == 1)) {
                    flux_.row(i, j) = fitted_row(grid, spec.market, transmissibilities, convection, order, i, j);
                } else {
                    StencilRow row = diffusion_row(transmissibilities, i, j);
                    row += upwind_row(order, grid, convection, i, j);
                    flux_.row(i, j) = std::move(row);
                }
            }
        }
    }

    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            StencilRow row = flux_.row(i, j);
            row *= 1.0 / grid.measure(i, j);
            row.add({0, 0}, convection.lambda());
            op_.row(i, j) = std::move(row);
        }
    }
}

std::vector<double> SpatialDiscretization::forcing(const NodeField& boundary) const {
    return op_.boundary_vector(boundary);
}

std::vector<double> SpatialDiscretization::forcing(double tau) const {
    return forcing(boundary_field(spec_, grid_, tau));
}

AssembledSystem assemble_system(Scheme scheme, const Grid2D& grid, const ProblemSpec& spec, double tau) {
    SpatialDiscretization d(scheme, grid, spec);
    return {d.op(), d.forcing(tau)};
}

void write_matrix_dump(std::ostream& out, const StencilOperator& op, Scheme scheme) {
    out << "# lmpfa-pricer matrix N=" << op.n() << " scheme=" << to_string(scheme) << '\n';
    const Eigen::SparseMatrix<double, Eigen::RowMajor> m = op.interior_matrix();
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, r); it; ++it) {
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace lmpfa
