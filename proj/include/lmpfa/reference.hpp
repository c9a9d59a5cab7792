#pragma once

#include <cstdint>

#include "lmpfa/model.hpp"

namespace lmpfa {

/// Standard normal distribution function.
double normal_cdf(double x);

/// P(X < a, Y < b) for standard normals with correlation rho. Limits may be
/// infinite. |rho| is clamped to 1 - 1e-12 beyond which the limit rho = +-1
/// is used.
double bivariate_cdf(double a, double b, double rho);

/// One-asset European call with cost of carry b.
double bs_call(double S, double K, double T, double r, double b, double sigma);

/// Inputs of the closed-form call on the maximum of two assets.
struct AnalyticInputs {
    double S1 = 100.0;
    double S2 = 100.0;
    double K = 100.0;
    double T = 1.0 / 12.0;
    double sigma1 = 0.3;
    double sigma2 = 0.3;
    double rho = 0.3;
    double r = 0.08;
    double b1 = 0.08;  ///< cost of carry of asset 1
    double b2 = 0.08;
    double alpha1 = 0.5;  ///< basket weights, used by the Monte Carlo basket put
    double alpha2 = 0.5;

    /// Inputs at spot (S1, S2) for a market with cost of carry equal to r.
    static AnalyticInputs from_market(const MarketParams& m, double S1, double S2, double T);

    double sigma() const;  ///< volatility of S1 / S2
    double rho1() const;
    double rho2() const;
    double d() const;
    double y1() const;
    double y2() const;
};

/// Price of the European call on max(S1, S2).
double analytic_price(const AnalyticInputs& in);

/// Closed-form surface on every grid node at tau = T of the market.
PriceSurface analytic_surface(const ProblemSpec& spec, const Grid2D& grid);

struct MonteCarloResult {
    double price = 0.0;
    double standard_error = 0.0;
};

/// Plain Monte Carlo under correlated geometric Brownian motion. Paths are
/// drawn in fixed blocks with per-block seeds, so the result depends only on
/// (inputs, payoff, paths, seed).
MonteCarloResult mc_price(const AnalyticInputs& in, PayoffKind payoff, std::int64_t paths, std::uint64_t seed);

}  // namespace lmpfa
