#include "lmpfa/linear_solver.hpp"

#include <string>

namespace lmpfa {

std::string_view to_string(LinearSolverKind k) {
    switch (k) {
        case LinearSolverKind::Auto: return "auto";
        case LinearSolverKind::Direct: return "direct";
        case LinearSolverKind::Krylov: return "krylov";
    }
    throw std::invalid_argument("unknown linear solver kind");
}

LinearSolverKind parse_linear_solver(std::string_view name) {
    if (name == "auto") return LinearSolverKind::Auto;
    if (name == "direct") return LinearSolverKind::Direct;
    if (name == "krylov") return LinearSolverKind::Krylov;
    throw std::invalid_argument("unknown linear solver '" + std::string(name) + "'");
}

void DirectSolver::compute(const Eigen::SparseMatrix<double>& J) {
    if (!analysed_) {
        lu_.analyzePattern(J);
        analysed_ = true;
    }
    lu_.factorize(J);
    if (lu_.info() != Eigen::Success) {
        throw LinearSolverError("sparse LU factorization failed: " + lu_.lastErrorMessage());
    }
}

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b, const Eigen::VectorXd& /*guess*/) {
    Eigen::VectorXd x = lu_.solve(b);
    if (lu_.info() != Eigen::Success) {
        throw LinearSolverError("sparse LU solve failed");
    }
    return x;
}

KrylovSolver::KrylovSolver(double tolerance, int max_iterations) {
    solver_.setTolerance(tolerance);
    solver_.setMaxIterations(max_iterations);
    solver_.preconditioner().setDroptol(1e-6);
    solver_.preconditioner().setFillfactor(10);
}

void KrylovSolver::compute(const Eigen::SparseMatrix<double>& J) {
    matrix_ = J;
    solver_.compute(matrix_);
    if (solver_.info() != Eigen::Success) {
        throw LinearSolverError("incomplete LU preconditioner failed");
    }
}

Eigen::VectorXd KrylovSolver::solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) {
    Eigen::VectorXd x;
    if (guess.size() == b.size()) {
        x = solver_.solveWithGuess(b, guess);
    } else {
        x = solver_.solve(b);
    }
    if (solver_.info() != Eigen::Success) {
        throw LinearSolverError("BiCGSTAB did not converge (estimated relative residual " +
                                std::to_string(solver_.error()) + " after " +
                                std::to_string(solver_.iterations()) + " iterations)");
    }
    return x;
}

std::unique_ptr<LinearSolver> make_linear_solver(const LinearSolverSettings& settings, int n) {
    LinearSolverKind kind = settings.kind;
    if (kind == LinearSolverKind::Auto) {
        kind = n <= settings.direct_limit ? LinearSolverKind::Direct : LinearSolverKind::Krylov;
    }
    if (kind == LinearSolverKind::Direct) {
        return std::make_unique<DirectSolver>();
    }
    return std::make_unique<KrylovSolver>(settings.tolerance, settings.max_iterations);
}

}  // namespace lmpfa
