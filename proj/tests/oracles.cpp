#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

using lmpfa::Vec2;

Vec2 affine_gradient(Vec2 x1, Vec2 x2, Vec2 x3, double g1, double g2, double g3) {
    Eigen::Matrix3d m;
    m << 1.0, x1.x, x1.y, 1.0, x2.x, x2.y, 1.0, x3.x, x3.y;
    const Eigen::Vector3d c = m.fullPivLu().solve(Eigen::Vector3d(g1, g2, g3));
    return {c[1], c[2]};
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    // nodes by Newton iteration on P_20
    constexpr int n = 20;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int l = 2; l <= n; ++l) {
                const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        sum += w * f(0.5 * (b - a) * x + 0.5 * (a + b));
    }
    return 0.5 * (b - a) * sum;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bivariate_normal(double a, double b, double rho) {
    const double s = std::sqrt(1.0 - rho * rho);
    const double lo = -12.0;
    if (a <= lo) return 0.0;
    auto integrand = [&](double x) {
        const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        return phi * normal_cdf((b - rho * x) / s);
    };
    // split at 0 so the peak of phi is resolved
    if (a <= 0.0) {
        return integrate(integrand, lo, a, 1e-15);
    }
    return integrate(integrand, lo, 0.0, 1e-15) + integrate(integrand, 0.0, a, 1e-15);
}

double black_scholes_call(double S, double K, double T, double r, double sigma) {
    const double sd = sigma * std::sqrt(T);
    const double d1 = (std::log(S / K) + (r + 0.5 * sigma * sigma) * T) / sd;
    return S * normal_cdf(d1) - K * std::exp(-r * T) * normal_cdf(d1 - sd);
}

std::array<double, 2> l_triangle_fluxes(Vec2 xc, Vec2 xp, Vec2 xq, Vec2 mp, Vec2 mq, Vec2 x5, Vec2 np, Vec2 nq,
                                        const lmpfa::CellTensor& mc, const lmpfa::CellTensor& mpt,
                                        const lmpfa::CellTensor& mqt, std::array<double, 3> v) {
    auto flux = [](const lmpfa::CellTensor& m, Vec2 n, Vec2 g) {
        return n.x * (m.m11 * g.x + m.m12 * g.y) + n.y * (m.m12 * g.x + m.m22 * g.y);
    };
    // residual of the continuity equations and the centre gradient for edge values u
    auto evaluate = [&](double up, double uq, Vec2* gc_out) {
        const Vec2 gc = affine_gradient(xc, mp, mq, v[0], up, uq);
        const double v5 = v[0] + gc.x * (x5.x - xc.x) + gc.y * (x5.y - xc.y);
        const Vec2 gp = affine_gradient(xp, mp, x5, v[1], up, v5);
        const Vec2 gq = affine_gradient(xq, mq, x5, v[2], uq, v5);
        if (gc_out != nullptr) *gc_out = gc;
        return Eigen::Vector2d(flux(mpt, np, gp) - flux(mc, np, gc), flux(mqt, nq, gq) - flux(mc, nq, gc));
    };
    const Eigen::Vector2d r0 = evaluate(0.0, 0.0, nullptr);
    Eigen::Matrix2d J;
    J.col(0) = evaluate(1.0, 0.0, nullptr) - r0;
    J.col(1) = evaluate(0.0, 1.0, nullptr) - r0;
    const Eigen::Vector2d u = J.fullPivLu().solve(-r0);
    Vec2 gc;
    evaluate(u[0], u[1], &gc);
    return {flux(mc, np, gc), flux(mc, nq, gc)};
}

Eigen::VectorXd psor(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs, const Eigen::VectorXd& lower,
                     Eigen::VectorXd v, double omega, double tol, int max_iter) {
    const Eigen::SparseMatrix<double, Eigen::RowMajor> R = J;
    for (int it = 0; it < max_iter; ++it) {
        double change = 0.0;
        for (Eigen::Index k = 0; k < R.rows(); ++k) {
            double diag = 0.0;
            double s = rhs[k];
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator e(R, k); e; ++e) {
                if (e.col() == k) {
                    diag = e.value();
                } else {
                    s -= e.value() * v[e.col()];
                }
            }
            const double gs = s / diag;
            const double next = std::max(lower[k], v[k] + omega * (gs - v[k]));
            change = std::max(change, std::abs(next - v[k]));
            v[k] = next;
        }
        if (change < tol * (1.0 + v.lpNorm<Eigen::Infinity>())) {
            return v;
        }
    }
    throw std::runtime_error("PSOR did not converge");
}

Eigen::VectorXd lcp_march(const Eigen::SparseMatrix<double>& A, const std::function<Eigen::VectorXd(double)>& F,
                          const Eigen::VectorXd& payoff, double T, int steps, double theta) {
    const double dt = T / steps;
    Eigen::SparseMatrix<double> I(A.rows(), A.cols());
    I.setIdentity();
    const Eigen::SparseMatrix<double> J = I - (dt * theta) * A;
    Eigen::VectorXd v = payoff;
    for (int m = 0; m < steps; ++m) {
        const double t0 = m * dt;
        const double t1 = m + 1 == steps ? T : (m + 1) * dt;
        const Eigen::VectorXd rhs = v + (dt * (1.0 - theta)) * (A * v + F(t0)) + (dt * theta) * F(t1);
        v = psor(J, rhs, payoff, v);
    }
    return v;
}

}  // namespace oracle
