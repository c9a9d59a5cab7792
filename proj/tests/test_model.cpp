#include <doctest.h>

#include <cmath>
#include <random>

#include "lmpfa/model.hpp"
#include "oracles.hpp"

using namespace lmpfa;

namespace {

// Exact cell average of a function over [xl,xr] x [yl,yr] by tensor Gauss-Legendre.
double cell_average(const std::function<double(double, double)>& f, double xl, double xr, double yl, double yr) {
    const double integral = oracle::gauss_legendre(
        [&](double x) { return oracle::gauss_legendre([&](double y) { return f(x, y); }, yl, yr); }, xl, xr);
    return integral / ((xr - xl) * (yr - yl));
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("averaged tensor against quadrature") {
    MarketParams m;
    const CellTensor t = averaged_tensor(m, 1.0, 3.0, 1.0, 3.0);
    CHECK(t.m11 == doctest::Approx(0.195).epsilon(1e-14));
    CHECK(t.m12 == doctest::Approx(0.054).epsilon(1e-14));
    const double s12 = m.rho * m.sigma1 * m.sigma2;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 300.0);
    for (int k = 0; k < 50; ++k) {
        double xl = u(rng), xr = u(rng), yl = u(rng), yr = u(rng);
        if (xl > xr) std::swap(xl, xr);
        if (yl > yr) std::swap(yl, yr);
        const CellTensor c = averaged_tensor(m, xl, xr, yl, yr);
        const double m11 = cell_average([&](double x, double) { return 0.5 * m.sigma1 * m.sigma1 * x * x; }, xl, xr, yl, yr);
        const double m12 = cell_average([&](double x, double y) { return 0.5 * s12 * x * y; }, xl, xr, yl, yr);
        const double m22 = cell_average([&](double, double y) { return 0.5 * m.sigma2 * m.sigma2 * y * y; }, xl, xr, yl, yr);
        CHECK(c.m11 == doctest::Approx(m11).epsilon(1e-12));
        CHECK(c.m12 == doctest::Approx(m12).epsilon(1e-12));
        CHECK(c.m22 == doctest::Approx(m22).epsilon(1e-12));
    }
}

TEST_CASE("zero correlation gives no off-diagonal entry") {
    MarketParams m;
    m.rho = 0.0;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    const TensorField f(m, g);
    for (int i = 0; i < g.nodes_per_axis(); ++i) {
        for (int j = 0; j < g.nodes_per_axis(); ++j) {
            CHECK(f.at(i, j).m12 == 0.0);
        }
    }
}

TEST_CASE("averaged tensor errors") {
    MarketParams m;
    CHECK_THROWS_AS(averaged_tensor(m, 2.0, 2.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(averaged_tensor(m, -1.0, 2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("shrinking cells recover the pointwise tensor at second order") {
    MarketParams m;
    const double xh = 120.0;
    const double yh = 80.0;
    const double exact = 0.5 * m.sigma1 * m.sigma1 * xh * xh;
    std::vector<double> errors;
    for (double w : {4.0, 2.0, 1.0}) {
        const CellTensor c = averaged_tensor(m, xh - w / 2, xh + w / 2, yh - w / 2, yh + w / 2);
        errors.push_back(std::abs(c.m11 - exact));
    }
    CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(errors[1] / errors[2] == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("square cells give positive semidefinite tensors") {
    MarketParams m;
    for (double rho : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
        m.rho = rho;
        for (double lo : {0.0, 3.0, 150.0}) {
            const CellTensor c = averaged_tensor(m, lo, lo + 6.0, lo, lo + 6.0);
            CHECK(c.m11 >= 0.0);
            CHECK(c.m22 >= 0.0);
            CHECK(c.determinant() >= -1e-12 * c.m11 * c.m22);
        }
    }
}

TEST_CASE("convection field and reaction") {
    MarketParams m;
    const Grid2D g = build_uniform_grid(49, 300.0, 300.0);
    const ConvectionField f(m, g);
    const double cx = m.r - m.sigma1 * m.sigma1 - 0.5 * m.rho * m.sigma1 * m.sigma2;
    CHECK(cx == doctest::Approx(-0.0235));
    CHECK(f.lambda() == doctest::Approx(-3 * 0.08 + 0.09 + 0.09 + 0.027));
    CHECK(f.fx_at(-1) == 0.0);  // face at x = 0
    for (int i = 0; i <= g.n(); ++i) {
        CHECK(f.fx_at(i) == doctest::Approx(cx * g.x().face_right(i)));
        CHECK(f.fy_at(i) == doctest::Approx(cx * g.y().face_right(i)));
    }
}

TEST_CASE("divergence form expands to the Black-Scholes operator") {
    // Compare div(M grad V) + div(f V) + lambda V with the nondivergence
    // operator on a quadratic, differentiating the fluxes by central differences.
    MarketParams m;
    const double s12 = m.rho * m.sigma1 * m.sigma2;
    const double cx = m.r - m.sigma1 * m.sigma1 - 0.5 * s12;
    const double cy = m.r - m.sigma2 * m.sigma2 - 0.5 * s12;
    const double lambda = -3 * m.r + m.sigma1 * m.sigma1 + m.sigma2 * m.sigma2 + s12;
    auto V = [](double x, double y) { return 3.0 + 0.2 * x - 0.1 * y + 0.01 * x * x + 0.02 * x * y - 0.005 * y * y; };
    auto Vx = [](double x, double y) { return 0.2 + 0.02 * x + 0.02 * y; };
    auto Vy = [](double x, double y) { return -0.1 + 0.02 * x - 0.01 * y; };
    auto flux_x = [&](double x, double y) {
        return 0.5 * m.sigma1 * m.sigma1 * x * x * Vx(x, y) + 0.5 * s12 * x * y * Vy(x, y) + cx * x * V(x, y);
    };
    auto flux_y = [&](double x, double y) {
        return 0.5 * s12 * x * y * Vx(x, y) + 0.5 * m.sigma2 * m.sigma2 * y * y * Vy(x, y) + cy * y * V(x, y);
    };
    const double h = 1e-3;
    for (double x : {10.0, 95.0, 240.0}) {
        for (double y : {5.0, 130.0, 280.0}) {
            const double div = (flux_x(x + h, y) - flux_x(x - h, y)) / (2 * h) +
                               (flux_y(x, y + h) - flux_y(x, y - h)) / (2 * h) + lambda * V(x, y);
            const double direct = 0.5 * m.sigma1 * m.sigma1 * x * x * 0.02 + s12 * x * y * 0.02 +
                                  0.5 * m.sigma2 * m.sigma2 * y * y * (-0.01) + m.r * x * Vx(x, y) +
                                  m.r * y * Vy(x, y) - m.r * V(x, y);
            CHECK(div == doctest::Approx(direct).epsilon(1e-6));
        }
    }
}

TEST_CASE("payoffs") {
    ProblemSpec s;
    s.payoff = PayoffKind::BasketPut;
    CHECK(s.payoff_value(100.0, 100.0) == 0.0);
    CHECK(s.payoff_value(0.0, 0.0) == 100.0);
    s.payoff = PayoffKind::CallOnMax;
    CHECK(s.payoff_value(150.0, 40.0) == 50.0);
    const Grid2D g = build_uniform_grid(2, 300.0, 300.0);
    const PriceSurface p = payoff_surface(s, g);
    CHECK(p.values(3, 0) == 200.0);
    CHECK(p.tau == 0.0);
}

TEST_CASE("boundary values") {
    ProblemSpec s;
    s.boundary = BoundaryKind::CallFarField;
    CHECK(boundary_value(s, Edge::East, 37.0, 0.0) == doctest::Approx(200.0));
    CHECK(boundary_value(s, Edge::North, 37.0, 0.05) == doctest::Approx(300.0 - 100.0 * std::exp(-0.08 * 0.05)));
    CHECK(boundary_value(s, Edge::West, 120.0, 0.05) == 0.0);
    CHECK(boundary_value(s, Edge::South, 120.0, 0.0) == 0.0);
    s.boundary = BoundaryKind::StrikeNearField;
    for (double tau : {0.0, 0.04, 1.0 / 12.0}) {
        CHECK(boundary_value(s, Edge::West, 50.0, tau) == 100.0);
        CHECK(boundary_value(s, Edge::South, 50.0, tau) == 100.0);
        CHECK(boundary_value(s, Edge::East, 50.0, tau) == 0.0);
    }
    CHECK_THROWS_AS(boundary_value(s, Edge::West, 50.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(boundary_value(s, Edge::West, 50.0, -0.1), std::invalid_argument);
}

TEST_CASE("far-edge data of the call configuration matches the payoff at tau = 0") {
    ProblemSpec s;
    const Grid2D g = build_uniform_grid(9, 300.0, 300.0);
    const NodeField b = boundary_field(s, g, 0.0);
    const PriceSurface p = payoff_surface(s, g);
    for (int k = 0; k <= 10; ++k) {
        CHECK(std::abs(b(10, k) - p.values(10, k)) <= 1e-12);
        CHECK(std::abs(b(k, 10) - p.values(k, 10)) <= 1e-12);
    }
}

TEST_CASE("custom boundary hook overrides the families") {
    ProblemSpec s;
    s.custom_boundary = [&s](Edge e, double pos, double) {
        return e == Edge::West ? s.payoff_value(0.0, pos) : e == Edge::South ? s.payoff_value(pos, 0.0) : -1.0;
    };
    CHECK(boundary_value(s, Edge::West, 150.0, 0.01) == 50.0);
    CHECK(boundary_value(s, Edge::East, 150.0, 0.01) == -1.0);
}

TEST_CASE("boundary field corners") {
    ProblemSpec s;
    const Grid2D g = build_uniform_grid(3, 300.0, 300.0);
    const NodeField b = boundary_field(s, g, 0.0);
    CHECK(b(0, 0) == 0.0);
    CHECK(b(4, 0) == doctest::Approx(200.0));  // far edge wins
    CHECK(b(0, 4) == doctest::Approx(200.0));
    CHECK(b(2, 2) == 0.0);
}

TEST_CASE("validation") {
    ProblemSpec s;
    CHECK_NOTHROW(s.validate());
    s.market.rho = 1.2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.market.rho = 0.3;
    s.market.K = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.market.K = 100.0;
    s.payoff = PayoffKind::BasketPut;
    s.market.alpha1 = 0.7;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.market.alpha1 = 0.5;
    s.penalty.beta = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("effective penalty") {
    ProblemSpec s;
    s.penalty.beta = 256.0;
    CHECK(s.effective_penalty().beta == 0.0);  // European
    s.style = OptionStyle::American;
    CHECK(s.effective_penalty().beta == 256.0);
    CHECK(s.effective_penalty().epsilon == doctest::Approx(1e-6));
    CHECK(s.effective_penalty().exponent() == 2.0);
}

TEST_CASE("names round-trip") {
    for (auto p : {PayoffKind::BasketPut, PayoffKind::CallOnMax}) CHECK(parse_payoff(to_string(p)) == p);
    for (auto b : {BoundaryKind::CallFarField, BoundaryKind::StrikeNearField}) CHECK(parse_boundary(to_string(b)) == b);
    for (auto o : {OptionStyle::European, OptionStyle::American}) CHECK(parse_option_style(to_string(o)) == o);
    for (auto e : {Edge::West, Edge::South, Edge::East, Edge::North}) CHECK(parse_edge(to_string(e)) == e);
    CHECK_THROWS_AS(parse_payoff("put"), std::invalid_argument);
    CHECK_THROWS_AS(parse_edge("up"), std::invalid_argument);
}

}  // TEST_SUITE
