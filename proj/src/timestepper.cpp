#include "lmpfa/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace lmpfa {

void TimeGrid::validate() const {
    if (steps < 1) {
        throw std::invalid_argument("time grid needs at least one step");
    }
    if (!(T > 0.0)) {
        throw std::invalid_argument("time horizon must be positive");
    }
}

void SolverSettings::validate() const {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("theta must lie in [0, 1]");
    }
    if (!(newton_tol > 0.0) || !(linear.tolerance > 0.0)) {
        throw std::invalid_argument("solver tolerances must be positive");
    }
    if (newton_max_iter < 1 || linear.max_iterations < 1) {
        throw std::invalid_argument("iteration limits must be positive");
    }
}

namespace {

double smoothed_max(double s, double eps) { return eps > 0.0 ? 0.5 * (s + std::hypot(s, eps)) : std::max(s, 0.0); }

void check_lengths(const Eigen::VectorXd& v, const Eigen::VectorXd& payoff) {
    if (v.size() != payoff.size()) {
        throw std::invalid_argument("state and payoff vectors differ in length");
    }
}

}  // namespace

Eigen::VectorXd penalty_term(const Eigen::VectorXd& v, const Eigen::VectorXd& payoff, const PenaltyParams& penalty) {
    check_lengths(v, payoff);
    if (penalty.beta < 0.0) {
        throw std::invalid_argument("penalty parameter beta must be non-negative");
    }
    Eigen::VectorXd g = Eigen::VectorXd::Zero(v.size());
    if (penalty.beta == 0.0) {
        return g;
    }
    const double p = penalty.exponent();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double m = smoothed_max(payoff[k] - v[k], penalty.epsilon);
        g[k] = m > 0.0 ? penalty.beta * std::pow(m, p) : 0.0;
    }
    return g;
}

Eigen::VectorXd penalty_jacobian_diag(const Eigen::VectorXd& v, const Eigen::VectorXd& payoff,
                                      const PenaltyParams& penalty) {
    check_lengths(v, payoff);
    const double p = penalty.exponent();
    if (p < 1.0 && penalty.epsilon <= 0.0) {
        throw std::invalid_argument("penalty exponent below 1 needs a positive smoothing radius");
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(v.size());
    if (penalty.beta == 0.0) {
        return d;
    }
    const double eps = penalty.epsilon;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double s = payoff[k] - v[k];
        const double m = smoothed_max(s, eps);
        const double dm = eps > 0.0 ? 0.5 * (1.0 + s / std::hypot(s, eps)) : (s > 0.0 ? 1.0 : 0.0);
        if (m > 0.0 && dm > 0.0) {
            d[k] = -penalty.beta * p * std::pow(m, p - 1.0) * dm;
        }
    }
    return d;
}

StepFailure::StepFailure(int step, double residual, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what + " (residual " + std::to_string(residual) +
                         ")"),
      step_(step),
      residual_(residual) {}

ThetaStepper::ThetaStepper(const Eigen::SparseMatrix<double>& A, double dt, const SolverSettings& settings,
                           const PenaltyParams& penalty, Eigen::VectorXd payoff, int n)
    : A_(A),
      dt_(dt),
      settings_(settings),
      penalty_(penalty),
      payoff_(std::move(payoff)),
      solver_(make_linear_solver(settings.linear, n)),
      linear_(penalty.beta == 0.0) {
    settings_.validate();
    penalty_.validate();
    if (A_.rows() != A_.cols() || A_.rows() != payoff_.size()) {
        throw std::invalid_argument("operator and payoff dimensions disagree");
    }
    Eigen::SparseMatrix<double> id(A_.rows(), A_.cols());
    id.setIdentity();
    J0_ = id - (dt_ * settings_.theta) * A_;
    J0_.makeCompressed();
    if (linear_) {
        solver_->compute(J0_);
    } else {
        // validates the exponent / smoothing combination up front
        penalty_jacobian_diag(payoff_, payoff_, penalty_);
    }
}

Eigen::VectorXd ThetaStepper::residual(const Eigen::VectorXd& v, const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd r = v - rhs - (dt_ * settings_.theta) * (A_ * v);
    if (!linear_) {
        r -= (dt_ * settings_.theta) * penalty_term(v, payoff_, penalty_);
    }
    return r;
}

StepResult ThetaStepper::step(const Eigen::VectorXd& v_m, const Eigen::VectorXd& f_m, const Eigen::VectorXd& f_next,
                              int step_index) {
    const double theta = settings_.theta;
    Eigen::VectorXd explicit_part = A_ * v_m + f_m;
    if (!linear_) {
        explicit_part += penalty_term(v_m, payoff_, penalty_);
    }
    const Eigen::VectorXd rhs = v_m + (dt_ * (1.0 - theta)) * explicit_part + (dt_ * theta) * f_next;

    StepResult out;
    Eigen::VectorXd v = v_m;
    try {
        for (int it = 0;; ++it) {
            const Eigen::VectorXd res = residual(v, rhs);
            const double r = res.lpNorm<Eigen::Infinity>();
            out.residual_history.push_back(r);
            out.residual = r;
            if (!std::isfinite(r)) {
                throw StepFailure(step_index, r, "Newton iteration diverged");
            }
            if (r <= settings_.newton_tol * (1.0 + v.lpNorm<Eigen::Infinity>())) {
                out.newton_iterations = it;
                break;
            }
            if (it == settings_.newton_max_iter) {
                throw StepFailure(step_index, r,
                                  "Newton did not converge in " + std::to_string(settings_.newton_max_iter) +
                                      " iterations");
            }
            if (!linear_) {
                const Eigen::VectorXd dg = penalty_jacobian_diag(v, payoff_, penalty_);
                Eigen::SparseMatrix<double> J = J0_;
                for (Eigen::Index k = 0; k < J.rows(); ++k) {
                    J.coeffRef(k, k) -= dt_ * theta * dg[k];
                }
                solver_->compute(J);
            }
            v -= solver_->solve(res, Eigen::VectorXd());
        }
    } catch (const LinearSolverError& e) {
        throw StepFailure(step_index, out.residual, std::string("linear solver failure: ") + e.what());
    }
    out.v = std::move(v);
    return out;
}

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

PriceSurface solve(const SpatialDiscretization& disc, const TimeGrid& time, const SolverSettings& settings,
                   std::ostream* diagnostics, SolveReport* report) {
    time.validate();
    const ProblemSpec& spec = disc.spec();
    const Grid2D& grid = disc.grid();
    if (std::abs(time.T - spec.market.T) > 1e-14 * spec.market.T) {
        throw std::invalid_argument("time grid horizon differs from the option maturity");
    }
    PriceSurface surface = payoff_surface(spec, grid);
    const Eigen::VectorXd payoff = to_eigen(surface.values.interior());
    ThetaStepper stepper(disc.matrix(), time.dt(), settings, spec.effective_penalty(), payoff, grid.n());

    Eigen::VectorXd v = payoff;
    Eigen::VectorXd f_m = to_eigen(disc.forcing(time.level(0)));
    for (int m = 0; m < time.steps; ++m) {
        Eigen::VectorXd f_next = to_eigen(disc.forcing(time.level(m + 1)));
        StepResult r = stepper.step(v, f_m, f_next, m + 1);
        v = std::move(r.v);
        f_m = std::move(f_next);
        const double min_excess = (v - payoff).minCoeff();
        if (diagnostics != nullptr) {
            *diagnostics << (m + 1) << '\t' << r.newton_iterations << '\t' << r.residual << '\t' << min_excess << '\n';
        }
        if (report != nullptr) {
            report->steps.push_back({m + 1, r.newton_iterations, r.residual, min_excess, std::move(r.residual_history)});
        }
    }

    const NodeField boundary = boundary_field(spec, grid, time.T);
    NodeField values = boundary;
    values.set_interior(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
    surface.values = std::move(values);
    surface.tau = time.T;
    return surface;
}

PriceSurface solve(const ProblemSpec& spec, Scheme scheme, const Grid2D& grid, const TimeGrid& time,
                   const SolverSettings& settings, std::ostream* diagnostics, SolveReport* report) {
    return solve(SpatialDiscretization(scheme, grid, spec), time, settings, diagnostics, report);
}

}  // namespace lmpfa
