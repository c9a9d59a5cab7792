#include "lmpfa/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lmpfa {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], positive half, orders 6, 12, 20.
constexpr std::array<double, 3> kW6{0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 3> kX6{0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr std::array<double, 6> kW12{0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                     0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr std::array<double, 6> kX12{0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                     0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 10> kW20{0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                      0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                      0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                      0.1527533871307259};
constexpr std::array<double, 10> kX20{0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                      0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                      0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                      0.07652652113349733};

template <std::size_t L>
double upper_tail(double h, double k, double r, const std::array<double, L>& w, const std::array<double, L>& x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double hk = h * k;
    double bvn = 0.0;
    if (std::abs(r) < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = std::asin(r);
        for (std::size_t i = 0; i < L; ++i) {
            for (double sgn : {1.0, -1.0}) {
                const double sn = std::sin(asr * (sgn * x[i] + 1.0) / 2.0);
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        return bvn * asr / (2.0 * two_pi) + normal_cdf(-h) * normal_cdf(-k);
    }
    double kk = k;
    double hkk = hk;
    if (r < 0.0) {
        kk = -k;
        hkk = -hk;
    }
    if (std::abs(r) < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - kk) * (h - kk);
        const double c = (4.0 - hkk) / 8.0;
        const double d = (12.0 - hkk) / 16.0;
        bvn = a * std::exp(-(bs / as + hkk) / 2.0) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (hkk > -160.0) {
            const double b = std::sqrt(bs);
            bvn -= std::exp(-hkk / 2.0) * std::sqrt(two_pi) * normal_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (std::size_t i = 0; i < L; ++i) {
            for (double sgn : {1.0, -1.0}) {
                const double xs = std::pow(a * (sgn * x[i] + 1.0), 2);
                const double rs = std::sqrt(1.0 - xs);
                bvn += a * w[i] *
                       (std::exp(-bs / (2.0 * xs) - hkk / (1.0 + rs)) / rs -
                        std::exp(-(bs / xs + hkk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
            }
        }
        bvn = -bvn / two_pi;
    }
    if (r > 0.0) {
        return bvn + normal_cdf(-std::max(h, kk));
    }
    return -bvn + std::max(0.0, normal_cdf(-h) - normal_cdf(-kk));
}

// P(X > h, Y > k).
double bvnu(double h, double k, double r) {
    const double ar = std::abs(r);
    if (ar < 0.3) return upper_tail(h, k, r, kW6, kX6);
    if (ar < 0.75) return upper_tail(h, k, r, kW12, kX12);
    return upper_tail(h, k, r, kW20, kX20);
}

}  // namespace

double bivariate_cdf(double a, double b, double rho) {
    if (std::isnan(a) || std::isnan(b) || std::isnan(rho)) {
        throw std::invalid_argument("bivariate_cdf: NaN argument");
    }
    if (a == -INFINITY || b == -INFINITY) return 0.0;
    if (a == INFINITY) return normal_cdf(b);
    if (b == INFINITY) return normal_cdf(a);
    constexpr double limit = 1.0 - 1e-12;
    if (rho >= limit) {
        return normal_cdf(std::min(a, b));
    }
    if (rho <= -limit) {
        return std::max(0.0, normal_cdf(a) - normal_cdf(-b));
    }
    return std::clamp(bvnu(-a, -b, rho), 0.0, 1.0);
}

double bs_call(double S, double K, double T, double r, double b, double sigma) {
    if (S <= 0.0) return 0.0;
    const double carry = std::exp((b - r) * T);
    if (sigma <= 0.0 || T <= 0.0) {
        return std::max(S * carry - K * std::exp(-r * T), 0.0);
    }
    const double st = sigma * std::sqrt(T);
    const double d1 = (std::log(S / K) + (b + 0.5 * sigma * sigma) * T) / st;
    return S * carry * normal_cdf(d1) - K * std::exp(-r * T) * normal_cdf(d1 - st);
}

AnalyticInputs AnalyticInputs::from_market(const MarketParams& m, double S1, double S2, double T) {
    AnalyticInputs in;
    in.S1 = S1;
    in.S2 = S2;
    in.K = m.K;
    in.T = T;
    in.sigma1 = m.sigma1;
    in.sigma2 = m.sigma2;
    in.rho = m.rho;
    in.r = m.r;
    in.b1 = m.r;
    in.b2 = m.r;
    in.alpha1 = m.alpha1;
    in.alpha2 = m.alpha2;
    return in;
}

double AnalyticInputs::sigma() const {
    return std::sqrt(std::max(sigma1 * sigma1 + sigma2 * sigma2 - 2.0 * rho * sigma1 * sigma2, 0.0));
}
double AnalyticInputs::rho1() const { return (sigma1 - rho * sigma2) / sigma(); }
double AnalyticInputs::rho2() const { return (sigma2 - rho * sigma1) / sigma(); }
double AnalyticInputs::d() const {
    const double s = sigma();
    return (std::log(S1 / S2) + (b1 - b2 + 0.5 * s * s) * T) / (s * std::sqrt(T));
}
double AnalyticInputs::y1() const {
    return (std::log(S1 / K) + (b1 + 0.5 * sigma1 * sigma1) * T) / (sigma1 * std::sqrt(T));
}
double AnalyticInputs::y2() const {
    return (std::log(S2 / K) + (b2 + 0.5 * sigma2 * sigma2) * T) / (sigma2 * std::sqrt(T));
}

double analytic_price(const AnalyticInputs& in) {
    if (!(in.T > 0.0)) {
        throw std::invalid_argument("analytic price needs T > 0");
    }
    if (in.S1 < 0.0 || in.S2 < 0.0 || !(in.K > 0.0)) {
        throw std::invalid_argument("analytic price needs S >= 0 and K > 0");
    }
    if (in.S1 == 0.0) return bs_call(in.S2, in.K, in.T, in.r, in.b2, in.sigma2);
    if (in.S2 == 0.0) return bs_call(in.S1, in.K, in.T, in.r, in.b1, in.sigma1);
    const double s = in.sigma();
    if (s <= 1e-12 * std::max(in.sigma1, in.sigma2) || s == 0.0) {
        // S1(T)/S2(T) is deterministic: the larger forward stays larger
        const bool first = in.S1 * std::exp(in.b1 * in.T) >= in.S2 * std::exp(in.b2 * in.T);
        return first ? bs_call(in.S1, in.K, in.T, in.r, in.b1, in.sigma1)
                     : bs_call(in.S2, in.K, in.T, in.r, in.b2, in.sigma2);
    }
    const double sq = std::sqrt(in.T);
    const double d = in.d();
    const double y1 = in.y1();
    const double y2 = in.y2();
    const double rho1 = std::clamp(in.rho1(), -1.0, 1.0);
    const double rho2 = std::clamp(in.rho2(), -1.0, 1.0);
    return in.S1 * std::exp((in.b1 - in.r) * in.T) * bivariate_cdf(y1, d, rho1) +
           in.S2 * std::exp((in.b2 - in.r) * in.T) * bivariate_cdf(y2, -d + s * sq, rho2) -
           in.K * std::exp(-in.r * in.T) *
               (1.0 - bivariate_cdf(-y1 + in.sigma1 * sq, -y2 + in.sigma2 * sq, in.rho));
}

PriceSurface analytic_surface(const ProblemSpec& spec, const Grid2D& grid) {
    PriceSurface s{NodeField(grid.nodes_per_axis()), grid.x().extent(), grid.y().extent(), spec.market.T,
                   PayoffKind::CallOnMax};
    for (int i = 0; i < grid.nodes_per_axis(); ++i) {
        for (int j = 0; j < grid.nodes_per_axis(); ++j) {
            const Vec2 p = grid.node(i, j);
            s.values(i, j) = analytic_price(AnalyticInputs::from_market(spec.market, p.x, p.y, spec.market.T));
        }
    }
    return s;
}

namespace {

constexpr std::int64_t kBlock = 1 << 16;

// Running mean and sum of squared deviations (Welford), merged with the
// pairwise update so identical samples give exactly zero variance.
struct BlockSums {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }
    void merge(const BlockSums& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * o.count / total;
        m2 += o.m2 + delta * delta * count * o.count / total;
        count = total;
    }
};

BlockSums simulate_block(const AnalyticInputs& in, PayoffKind payoff, std::int64_t count, std::uint64_t seed,
                         std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    const double sq = std::sqrt(in.T);
    const double m1 = std::log(in.S1) + (in.b1 - 0.5 * in.sigma1 * in.sigma1) * in.T;
    const double m2 = std::log(in.S2) + (in.b2 - 0.5 * in.sigma2 * in.sigma2) * in.T;
    const double c = std::sqrt(std::max(1.0 - in.rho * in.rho, 0.0));
    const double disc = std::exp(-in.r * in.T);
    BlockSums s;
    for (std::int64_t p = 0; p < count; ++p) {
        const double z1 = normal(rng);
        const double z2 = in.rho * z1 + c * normal(rng);
        const double s1 = in.S1 > 0.0 ? std::exp(m1 + in.sigma1 * sq * z1) : 0.0;
        const double s2 = in.S2 > 0.0 ? std::exp(m2 + in.sigma2 * sq * z2) : 0.0;
        const double v = payoff == PayoffKind::CallOnMax
                             ? std::max(std::max(s1, s2) - in.K, 0.0)
                             : std::max(in.K - in.alpha1 * s1 - in.alpha2 * s2, 0.0);
        s.push(disc * v);
    }
    return s;
}

}  // namespace

MonteCarloResult mc_price(const AnalyticInputs& in, PayoffKind payoff, std::int64_t paths, std::uint64_t seed) {
    if (paths < 2) {
        throw std::invalid_argument("Monte Carlo needs at least two paths");
    }
    const std::int64_t blocks = (paths + kBlock - 1) / kBlock;
    std::vector<BlockSums> sums(static_cast<std::size_t>(blocks));
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(hw, blocks));
    std::vector<std::thread> threads;
    for (std::int64_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::int64_t b = w; b < blocks; b += workers) {
                const std::int64_t count = std::min(kBlock, paths - b * kBlock);
                sums[static_cast<std::size_t>(b)] =
                    simulate_block(in, payoff, count, seed, static_cast<std::uint64_t>(b));
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    BlockSums total;
    for (const auto& s : sums) {
        total.merge(s);
    }
    const double n = total.count;
    return {total.mean, std::sqrt(total.m2 / (n - 1.0) / n)};
}

}  // namespace lmpfa
