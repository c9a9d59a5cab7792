#include "lmpfa/transmissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lmpfa {

SingularLocalSystem::SingularLocalSystem(int i, int j, const std::string& what)
    : std::runtime_error("interaction volume R(" + std::to_string(i) + "," + std::to_string(j) + "): " + what),
      i_(i),
      j_(j) {}

Vec2 gradient_of_linear(Vec2 x1, Vec2 x2, Vec2 x3, double g1, double g2, double g3) {
    const Vec2 e2 = x2 - x1;
    const Vec2 e3 = x3 - x1;
    const double det = e2.x * e3.y - e2.y * e3.x;
    if (det == 0.0) {
        throw std::invalid_argument("triangle corners are collinear");
    }
    return (1.0 / det) * ((g2 - g1) * rotate(e3) - (g3 - g1) * rotate(e2));
}

namespace {

// Linear forms over z = (V_centre, V_p, V_q, u_p, u_q).
constexpr int kForm = 5;
using Form = std::array<double, kForm>;

struct VecForm {
    Form x{};
    Form y{};
};

Form unit(int k) {
    Form f{};
    f[static_cast<std::size_t>(k)] = 1.0;
    return f;
}

Form axpy(double a, const Form& u, const Form& v) {
    Form w{};
    for (int k = 0; k < kForm; ++k) {
        w[k] = a * u[k] + v[k];
    }
    return w;
}

VecForm gradient_form(Vec2 x1, Vec2 x2, Vec2 x3, const Form& g1, const Form& g2, const Form& g3) {
    const Vec2 e2 = x2 - x1;
    const Vec2 e3 = x3 - x1;
    const double det = e2.x * e3.y - e2.y * e3.x;
    if (det == 0.0) {
        throw std::invalid_argument("triangle corners are collinear");
    }
    const Vec2 a = (1.0 / det) * rotate(e3);
    const Vec2 b = (-1.0 / det) * rotate(e2);
    VecForm g;
    for (int k = 0; k < kForm; ++k) {
        const double d2 = g2[k] - g1[k];
        const double d3 = g3[k] - g1[k];
        g.x[k] = a.x * d2 + b.x * d3;
        g.y[k] = a.y * d2 + b.y * d3;
    }
    return g;
}

// n^T M g as a linear form.
Form normal_flux(Vec2 n, const CellTensor& m, const VecForm& g) {
    const Vec2 mn = m.apply(n);  // M is symmetric
    Form f{};
    for (int k = 0; k < kForm; ++k) {
        f[k] = mn.x * g.x[k] + mn.y * g.y[k];
    }
    return f;
}

Form point_value(const Form& base, const VecForm& g, Vec2 shift) {
    Form f = base;
    for (int k = 0; k < kForm; ++k) {
        f[k] += g.x[k] * shift.x + g.y[k] * shift.y;
    }
    return f;
}

double norm1(const Mat2& a) {
    return std::max(std::abs(a[0][0]) + std::abs(a[1][0]), std::abs(a[0][1]) + std::abs(a[1][1]));
}

}  // namespace

LocalTriangleSystem triangle_local_system(const InteractionVolumeGeometry& geom,
                                          const std::array<CellTensor, 4>& tensors, Triangle triangle) {
    LocalTriangleSystem s;
    s.triangle = triangle;
    if (triangle == Triangle::T1) {
        s.cells = {1, 0, 2};
        s.half_edges = {0, 1};
    } else {
        s.cells = {3, 2, 0};
        s.half_edges = {2, 3};
    }
    const auto c = static_cast<std::size_t>(s.cells[0]);
    const auto p = static_cast<std::size_t>(s.cells[1]);
    const auto q = static_cast<std::size_t>(s.cells[2]);
    const auto hp = static_cast<std::size_t>(s.half_edges[0]);
    const auto hq = static_cast<std::size_t>(s.half_edges[1]);

    const Vec2 xc = geom.corners[c];
    const Vec2 xp = geom.corners[p];
    const Vec2 xq = geom.corners[q];
    const Vec2 mp = geom.edge_mid[hp];
    const Vec2 mq = geom.edge_mid[hq];
    const Vec2 x5 = geom.centre;
    const Vec2 np = geom.normals[hp];
    const Vec2 nq = geom.normals[hq];

    const VecForm gc = gradient_form(xc, mp, mq, unit(0), unit(3), unit(4));
    const Form v5 = point_value(unit(0), gc, x5 - xc);
    const VecForm gp = gradient_form(xp, mp, x5, unit(1), unit(3), v5);
    const VecForm gq = gradient_form(xq, mq, x5, unit(2), unit(4), v5);

    const Form fp = normal_flux(np, tensors[c], gc);
    const Form fq = normal_flux(nq, tensors[c], gc);
    const Form cp = axpy(-1.0, fp, normal_flux(np, tensors[p], gp));
    const Form cq = axpy(-1.0, fq, normal_flux(nq, tensors[q], gq));

    const std::array<const Form*, 2> flux{&fp, &fq};
    const std::array<const Form*, 2> cont{&cp, &cq};
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t k = 0; k < 2; ++k) {
            s.C[r][k] = (*flux[r])[3 + k];
            s.A[r][k] = (*cont[r])[3 + k];
        }
        for (std::size_t k = 0; k < 3; ++k) {
            s.D[r][k] = (*flux[r])[k];
            s.B[r][k] = -(*cont[r])[k];
        }
    }

    const double det = s.A[0][0] * s.A[1][1] - s.A[0][1] * s.A[1][0];
    if (det != 0.0) {
        const Mat2 inv{{{s.A[1][1] / det, -s.A[0][1] / det}, {-s.A[1][0] / det, s.A[0][0] / det}}};
        s.condition = norm1(s.A) * norm1(inv);
    } else {
        s.condition = std::numeric_limits<double>::infinity();
    }
    s.ill_conditioned = s.condition > 1e12;
    return s;
}

Mat23 LocalTriangleSystem::flux_weights(int i, int j) const {
    Mat23 out{};
    const bool no_flux = std::all_of(C.begin(), C.end(), [](const auto& r) { return r[0] == 0.0 && r[1] == 0.0; }) &&
                         std::all_of(D.begin(), D.end(), [](const auto& r) {
                             return r[0] == 0.0 && r[1] == 0.0 && r[2] == 0.0;
                         });
    if (no_flux) {
        return out;  // vanishing centre tensor
    }
    const double fro2 = A[0][0] * A[0][0] + A[0][1] * A[0][1] + A[1][0] * A[1][0] + A[1][1] * A[1][1];
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    if (!(std::abs(det) > 1e-14 * fro2)) {
        throw SingularLocalSystem(i, j,
                                  std::string("singular continuity system on triangle ") +
                                      (triangle == Triangle::T1 ? "T1" : "T2"));
    }
    const Mat2 inv{{{A[1][1] / det, -A[0][1] / det}, {-A[1][0] / det, A[0][0] / det}}};
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t k = 0; k < 3; ++k) {
            double s = D[r][k];
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    s += C[r][a] * inv[a][b] * B[b][k];
                }
            }
            out[r][k] = s;
        }
    }
    return out;
}

std::array<double, 4> Transmissibility::apply(const std::array<double, 4>& v) const {
    std::array<double, 4> f{};
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t k = 0; k < 4; ++k) {
            f[p] += T[p][k] * v[k];
        }
    }
    return f;
}

Transmissibility transmissibility(const InteractionVolumeGeometry& geom, const std::array<CellTensor, 4>& tensors) {
    Transmissibility t;
    for (Triangle tri : {Triangle::T1, Triangle::T2}) {
        const LocalTriangleSystem s = triangle_local_system(geom, tensors, tri);
        const Mat23 w = s.flux_weights(geom.i, geom.j);
        for (std::size_t r = 0; r < 2; ++r) {
            auto& row = t.T[static_cast<std::size_t>(s.half_edges[r])];
            for (std::size_t k = 0; k < 3; ++k) {
                row[static_cast<std::size_t>(s.cells[k])] = w[r][k];
            }
        }
    }
    return t;
}

std::array<CellTensor, 4> corner_tensors(const TensorField& tensors, int i, int j) {
    return {tensors.at(i - 1, j - 1), tensors.at(i, j - 1), tensors.at(i, j), tensors.at(i - 1, j)};
}

TransmissibilityField::TransmissibilityField(const Grid2D& grid, const TensorField& tensors) : n_(grid.n()) {
    if (tensors.nodes_per_axis() != grid.nodes_per_axis()) {
        throw std::invalid_argument("tensor field does not match the grid");
    }
    const int m = n_ + 1;
    volumes_.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            volumes_.push_back(transmissibility(interaction_volume(grid, i, j), corner_tensors(tensors, i, j)));
        }
    }
}

const Transmissibility& TransmissibilityField::at(int i, int j) const {
    const int m = n_ + 1;
    if (i < 1 || j < 1 || i > m || j > m) {
        throw std::out_of_range("interaction volume index outside 1..N+1");
    }
    return volumes_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j - 1)];
}

namespace {

void add_half_edge(StencilRow& row, const TransmissibilityField& field, int a, int b, int half_edge, double sign,
                   int i, int j) {
    static constexpr std::array<std::array<int, 2>, 4> corner_shift{{{-1, -1}, {0, -1}, {0, 0}, {-1, 0}}};
    const auto& t = field.at(a, b).T[static_cast<std::size_t>(half_edge)];
    for (std::size_t k = 0; k < 4; ++k) {
        if (t[k] == 0.0) {
            continue;
        }
        row.add({a + corner_shift[k][0] - i, b + corner_shift[k][1] - j}, sign * t[k]);
    }
}

}  // namespace

StencilRow diffusion_face(const TransmissibilityField& field, int i, int j, Face face) {
    StencilRow row;
    switch (face) {
        case Face::East:
            add_half_edge(row, field, i + 1, j, 2, 1.0, i, j);
            add_half_edge(row, field, i + 1, j + 1, 0, 1.0, i, j);
            break;
        case Face::North:
            add_half_edge(row, field, i + 1, j + 1, 3, 1.0, i, j);
            add_half_edge(row, field, i, j + 1, 1, 1.0, i, j);
            break;
        case Face::West:
            add_half_edge(row, field, i, j, 2, -1.0, i, j);
            add_half_edge(row, field, i, j + 1, 0, -1.0, i, j);
            break;
        case Face::South:
            add_half_edge(row, field, i, j, 1, -1.0, i, j);
            add_half_edge(row, field, i + 1, j, 3, -1.0, i, j);
            break;
    }
    return row;
}

}  // namespace lmpfa
