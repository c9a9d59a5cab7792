#pragma once

#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "lmpfa/assembly.hpp"
#include "lmpfa/linear_solver.hpp"
#include "lmpfa/model.hpp"

namespace lmpfa {

/// Uniform levels tau_m = m T / M.
struct TimeGrid {
    int steps = 64;
    double T = 1.0 / 12.0;

    double dt() const { return T / steps; }
    /// tau_m, with tau_M = T exactly.
    double level(int m) const { return m == steps ? T : m * dt(); }
    void validate() const;
};

struct SolverSettings {
    double theta = 0.5;
    double newton_tol = 1e-9;  ///< on ||R||_inf / (1 + ||V||_inf)
    int newton_max_iter = 50;
    LinearSolverSettings linear;

    void validate() const;
};

/// beta [max_eps(V* - V)]^(1/k) componentwise, with
/// max_eps(s) = (s + sqrt(s^2 + eps^2)) / 2 when eps > 0.
Eigen::VectorXd penalty_term(const Eigen::VectorXd& v, const Eigen::VectorXd& payoff, const PenaltyParams& penalty);

/// Derivative of penalty_term with respect to V (entries <= 0). Throws
/// std::invalid_argument when 1/k < 1 and eps = 0.
Eigen::VectorXd penalty_jacobian_diag(const Eigen::VectorXd& v, const Eigen::VectorXd& payoff,
                                      const PenaltyParams& penalty);

/// Raised when a time step cannot be completed.
class StepFailure : public std::runtime_error {
public:
    StepFailure(int step, double residual, const std::string& what);
    int step() const { return step_; }
    double residual() const { return residual_; }

private:
    int step_;
    double residual_;
};

struct StepResult {
    Eigen::VectorXd v;
    int newton_iterations = 0;
    double residual = 0.0;  ///< final ||R||_inf
    std::vector<double> residual_history;
};

/// theta-Euler step for dV/dtau = A V + G(V) + F(tau), Newton on
/// R(V) = V - dt theta (A V + G(V)) - rhs, starting from V^m.
class ThetaStepper {
public:
    ThetaStepper(const Eigen::SparseMatrix<double>& A, double dt, const SolverSettings& settings,
                 const PenaltyParams& penalty, Eigen::VectorXd payoff, int n);

    StepResult step(const Eigen::VectorXd& v_m, const Eigen::VectorXd& f_m, const Eigen::VectorXd& f_next,
                    int step_index);

    /// Residual R(V) of the nonlinear system for the given right-hand side.
    Eigen::VectorXd residual(const Eigen::VectorXd& v, const Eigen::VectorXd& rhs) const;

private:
    Eigen::SparseMatrix<double> A_;
    Eigen::SparseMatrix<double> J0_;  // I - dt theta A
    double dt_;
    SolverSettings settings_;
    PenaltyParams penalty_;
    Eigen::VectorXd payoff_;
    std::unique_ptr<LinearSolver> solver_;
    bool linear_;
};

struct StepStats {
    int step = 0;
    int newton_iterations = 0;
    double residual = 0.0;
    double min_excess = 0.0;  ///< min(V - payoff) over interior nodes
    std::vector<double> residual_history;
};

struct SolveReport {
    std::vector<StepStats> steps;
};

/// Marches from the payoff at tau = 0 to tau = T. Diagnostics, when given,
/// receive one tab-separated line per step: step, Newton iterations, final
/// residual, min(V - payoff).
PriceSurface solve(const ProblemSpec& spec, Scheme scheme, const Grid2D& grid, const TimeGrid& time,
                   const SolverSettings& settings, std::ostream* diagnostics = nullptr, SolveReport* report = nullptr);

/// Same march with an already assembled discretization.
PriceSurface solve(const SpatialDiscretization& disc, const TimeGrid& time, const SolverSettings& settings,
                   std::ostream* diagnostics = nullptr, SolveReport* report = nullptr);

}  // namespace lmpfa
