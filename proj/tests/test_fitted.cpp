#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "lmpfa/assembly.hpp"
#include "lmpfa/fitted.hpp"

using namespace lmpfa;

TEST_SUITE("fitted") {

TEST_CASE("degenerate coefficients at table parameters") {
    MarketParams m;
    const DegenerateCoefficients w = west_coefficients(m);
    CHECK(w.a == doctest::Approx(0.045));
    CHECK(w.b == doctest::Approx(-0.0235));
    CHECK(w.a + w.b == doctest::Approx(0.0215));
    CHECK(w.a - w.b == doctest::Approx(0.0685));
    const DegenerateCoefficients s = south_coefficients(m);
    CHECK(s.a == doctest::Approx(0.045));
    CHECK(s.b == doctest::Approx(-0.0235));
}

TEST_CASE("west flux weights on the 50x50 grid at j = 2") {
    MarketParams m;
    const Grid2D g = build_uniform_grid(49, 300.0, 300.0);  // x_1 = 6, l_j = 6, y_2 = 12
    const FittedEdgeFlux f = fitted_west_flux(m, g, 2);
    const double a = 0.045, b = -0.0235, x1 = 6.0, l = 6.0;
    const double d = 0.5 * 0.3 * 0.09 * 12.0;
    CHECK(f.first == doctest::Approx(0.5 * x1 * (0.5 * l * (a + b) - d)));
    CHECK(f.diagonal == doctest::Approx(0.5 * d * x1));
    CHECK(f.boundary == doctest::Approx(-0.25 * x1 * l * (a - b)));
}

TEST_CASE("west flux against the linear two-point solution") {
    // V linear on (0, x_1) and a forward difference along y, evaluated at the
    // face x_{1/2}: flux = l x (a x V_x + b V + d V_y).
    MarketParams m;
    m.rho = 0.45;
    m.sigma1 = 0.25;
    const Grid2D g = build_grid({0.0, 2.0, 5.0, 9.0, 14.0}, {0.0, 1.0, 3.0, 6.0, 14.0});
    const DegenerateCoefficients c = west_coefficients(m);
    for (int j = 1; j <= 3; ++j) {
        const FittedEdgeFlux f = fitted_west_flux(m, g, j);
        const double v0 = 1.3, v1 = -0.4, vd = 2.1;
        const double x1 = g.x().node(1);
        const double xh = g.x().face_right(0);
        const double vh = v0 + (v1 - v0) * xh / x1;
        const double vy = (vd - v1) / (g.y().node(j + 1) - g.y().node(j));
        const double expected =
            g.y().width(j) * xh * (c.a * xh * (v1 - v0) / x1 + c.b * vh + c.d_factor * g.y().node(j) * vy);
        CHECK(f.apply(v0, v1, vd) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("zero correlation removes the diagonal weight") {
    MarketParams m;
    m.rho = 0.0;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    for (int k = 1; k <= 9; ++k) {
        CHECK(fitted_west_flux(m, g, k).diagonal == 0.0);
        CHECK(fitted_south_flux(m, g, k).diagonal == 0.0);
    }
}

TEST_CASE("symmetric market: south weights mirror west weights") {
    MarketParams m;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    for (int k = 1; k <= 9; ++k) {
        const FittedEdgeFlux w = fitted_west_flux(m, g, k);
        const FittedEdgeFlux s = fitted_south_flux(m, g, k);
        CHECK(w.boundary == s.boundary);
        CHECK(w.first == s.first);
        CHECK(w.diagonal == s.diagonal);
    }
}

TEST_CASE("fitted flux is exact for V = c0 + c1 x when rho = 0") {
    MarketParams m;
    m.rho = 0.0;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    const DegenerateCoefficients c = west_coefficients(m);
    const double c0 = 4.0, c1 = -0.3;
    const double xh = g.x().face_right(0);
    for (int j = 1; j <= 9; ++j) {
        const FittedEdgeFlux f = fitted_west_flux(m, g, j);
        const double exact = g.y().width(j) * xh * (c.a * xh * c1 + c.b * (c0 + c1 * xh));
        CHECK(std::abs(f.apply(c0, c0 + c1 * g.x().node(1), 0.0) - exact) < 1e-12);
    }
}

TEST_CASE("fitted faces and rows") {
    MarketParams m;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    const TransmissibilityField tf(g, TensorField(m, g));
    const ConvectionField cf(m, g);
    CHECK(is_degenerate_face(1, 4, Face::West));
    CHECK(is_degenerate_face(4, 1, Face::South));
    CHECK_FALSE(is_degenerate_face(2, 4, Face::West));
    CHECK_FALSE(is_degenerate_face(1, 4, Face::South));
    CHECK_THROWS_AS(fitted_face(m, g, 2, 2, Face::West), std::invalid_argument);
    CHECK_THROWS_AS(fitted_row(g, m, tf, cf, UpwindOrder::First, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(fitted_row(g, m, tf, cf, UpwindOrder::First, 0, 1), std::out_of_range);

    // the fitted face is the negated west flux (outward normal -x)
    const FittedEdgeFlux w = fitted_west_flux(m, g, 4);
    const StencilRow face = fitted_face(m, g, 1, 4, Face::West);
    CHECK(face.weight({-1, 0}) == -w.boundary);
    CHECK(face.weight({0, 0}) == -w.first);
    CHECK(face.weight({0, 1}) == -w.diagonal);

    // both upwind orders give the same band rows
    for (int k = 1; k <= 9; ++k) {
        CHECK(fitted_row(g, m, tf, cf, UpwindOrder::First, 1, k) == fitted_row(g, m, tf, cf, UpwindOrder::Second, 1, k));
        CHECK(fitted_row(g, m, tf, cf, UpwindOrder::First, k, 1) == fitted_row(g, m, tf, cf, UpwindOrder::Second, k, 1));
    }
}

TEST_CASE("constant field: fitted row equals the sum of its face fluxes") {
    // diffusion of a constant vanishes, so the row reduces to the convective
    // outflow c (f.n) l on ordinary faces plus the fitted degenerate fluxes
    MarketParams m;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    const TransmissibilityField tf(g, TensorField(m, g));
    const ConvectionField cf(m, g);
    const double c = 2.5;
    const NodeField v(g.nodes_per_axis(), c);
    for (int j = 1; j <= 9; ++j) {
        const StencilRow row = fitted_row(g, m, tf, cf, UpwindOrder::First, 1, j);
        double expected = -fitted_west_flux(m, g, j).apply(c, c, c);
        expected += c * g.y().width(j) * cf.fx_at(1);
        expected += c * g.x().width(1) * cf.fy_at(j);
        expected += j > 1 ? -c * g.x().width(1) * cf.fy_at(j - 1) : -fitted_south_flux(m, g, 1).apply(c, c, c);
        CHECK(apply(row, v, 1, j) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("zero correlation, equal volatilities: band rows mirror under x <-> y") {
    MarketParams m;
    m.rho = 0.0;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    const TransmissibilityField tf(g, TensorField(m, g));
    const ConvectionField cf(m, g);
    for (int k = 1; k <= 9; ++k) {
        const StencilRow a = fitted_row(g, m, tf, cf, UpwindOrder::First, 1, k);
        const StencilRow b = fitted_row(g, m, tf, cf, UpwindOrder::First, k, 1);
        CHECK(a.size() == b.size());
        for (const StencilEntry& e : a.entries()) {
            CHECK(b.weight({e.offset.dj, e.offset.di}) == doctest::Approx(e.weight).epsilon(1e-12));
        }
    }
}

TEST_CASE("fitted schemes only touch the degenerate band") {
    ProblemSpec spec;
    const Grid2D g = build_uniform_grid(12, 300.0, 300.0);
    for (auto [fit, plain] : {std::pair{Scheme::FittedLMPFA_Up1, Scheme::LMPFA_Up1},
                              std::pair{Scheme::FittedLMPFA_Up2, Scheme::LMPFA_Up2}}) {
        const SpatialDiscretization a(fit, g, spec);
        const SpatialDiscretization b(plain, g, spec);
        int differing = 0;
        for (int i = 1; i <= 12; ++i) {
            for (int j = 1; j <= 12; ++j) {
                const bool same = a.op().row(i, j) == b.op().row(i, j);
                if (i >= 2 && j >= 2) {
                    CHECK(same);
                } else {
                    differing += same ? 0 : 1;
                    // no reach beyond distance one in the degenerate direction
                    for (const StencilEntry& e : a.op().row(i, j).entries()) {
                        if (i == 1) CHECK(std::abs(e.offset.di) <= 1);
                        if (j == 1) CHECK(std::abs(e.offset.dj) <= 1);
                    }
                }
            }
        }
        CHECK(differing > 0);
    }
}

TEST_CASE("fitted operator on the 50x50 grid has no growing modes") {
    ProblemSpec spec;
    const Grid2D g = build_uniform_grid(49, 300.0, 300.0);
    const SpatialDiscretization d(Scheme::FittedLMPFA_Up1, g, spec);
    const Eigen::MatrixXd A = Eigen::MatrixXd(d.matrix());
    const Eigen::VectorXcd ev = A.eigenvalues();
    double max_re = -1e300;
    for (Eigen::Index k = 0; k < ev.size(); ++k) max_re = std::max(max_re, ev[k].real());
    MESSAGE("max Re(lambda) = " << max_re);
    CHECK(std::isfinite(max_re));
    CHECK(max_re <= 1e-8);
}

TEST_CASE("exponential fit weights") {
    // exact for solutions of a x V' + b V = C: V = C/b + k x^(-b/a)
    for (auto [a, b] : {std::pair{0.045, -0.0235}, std::pair{0.2, 0.7}, std::pair{0.01, 0.3}}) {
        const double C = 1.7, k = -0.6, xl = 40.0, xr = 46.0;
        auto V = [&](double x) { return C / b + k * std::pow(x, -b / a); };
        const auto [wh, wl] = exponential_fit_weights(a, b, xl, xr);
        CHECK(wh * V(xr) - wl * V(xl) == doctest::Approx(C).epsilon(1e-10));
    }
    // b -> 0: both weights a / ln(x_hi / x_lo)
    const auto [w0h, w0l] = exponential_fit_weights(0.3, 0.0, 2.0, 3.0);
    CHECK(w0h == doctest::Approx(0.3 / std::log(1.5)));
    CHECK(w0l == doctest::Approx(0.3 / std::log(1.5)));
    // a = 0: pure convection picks one side
    const auto [ph, pl] = exponential_fit_weights(0.0, 0.5, 2.0, 3.0);
    CHECK(ph == 0.5);
    CHECK(pl == 0.0);
    CHECK_THROWS_AS(exponential_fit_weights(0.1, 0.1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exponential_fit_weights(0.1, 0.1, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("fitted finite volume rows conserve flux between neighbours") {
    MarketParams m;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    for (int i = 1; i < 9; ++i) {
        for (int j = 1; j <= 9; ++j) {
            const StencilRow east = fitted_fv_face(m, g, i, j, Face::East);
            const StencilRow west = fitted_fv_face(m, g, i + 1, j, Face::West);
            for (const StencilEntry& e : east.entries()) {
                CHECK(west.weight({e.offset.di - 1, e.offset.dj}) == doctest::Approx(-e.weight).epsilon(1e-13));
            }
            CHECK(east.size() == west.size());
        }
    }
    // degenerate faces reuse the linear fitted flux
    CHECK(fitted_fv_face(m, g, 1, 3, Face::West) == fitted_face(m, g, 1, 3, Face::West));
}

}  // TEST_SUITE
