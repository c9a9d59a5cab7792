#pragma once

#include <memory>
#include <stdexcept>
#include <string_view>

#include <Eigen/Sparse>

namespace lmpfa {

enum class LinearSolverKind { Auto, Direct, Krylov };

std::string_view to_string(LinearSolverKind k);
LinearSolverKind parse_linear_solver(std::string_view name);

struct LinearSolverSettings {
    LinearSolverKind kind = LinearSolverKind::Auto;
    double tolerance = 1e-10;  ///< relative residual for the Krylov solver
    int max_iterations = 2000;
    int direct_limit = 128;  ///< Auto picks the direct solver for N up to this
};

/// Raised on factorization failure or Krylov breakdown.
class LinearSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves J x = b for a sequence of matrices with a fixed sparsity pattern.
class LinearSolver {
public:
    virtual ~LinearSolver() = default;
    /// Prepares for J; the pattern analysis is reused across calls.
    virtual void compute(const Eigen::SparseMatrix<double>& J) = 0;
    /// `guess` is a starting point for iterative solvers; direct solvers ignore it.
    virtual Eigen::VectorXd solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) = 0;
    virtual std::string_view name() const = 0;
};

/// Sparse LU with the pattern analysed once.
class DirectSolver final : public LinearSolver {
public:
    void compute(const Eigen::SparseMatrix<double>& J) override;
    Eigen::VectorXd solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) override;
    std::string_view name() const override { return "sparse-lu"; }

private:
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analysed_ = false;
};

/// BiCGSTAB with an incomplete-LU preconditioner.
class KrylovSolver final : public LinearSolver {
public:
    explicit KrylovSolver(double tolerance, int max_iterations);
    void compute(const Eigen::SparseMatrix<double>& J) override;
    Eigen::VectorXd solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) override;
    std::string_view name() const override { return "bicgstab-ilut"; }

private:
    Eigen::SparseMatrix<double> matrix_;  // the solver only keeps a reference
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver_;
};

/// Builds the solver requested by `settings` for an N x N grid (N^2 unknowns).
std::unique_ptr<LinearSolver> make_linear_solver(const LinearSolverSettings& settings, int n);

}  // namespace lmpfa
