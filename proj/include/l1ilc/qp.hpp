#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace l1ilc {

/// min over x of 1/2 x'Hx + g'x subject to A x <= b.
/// H must be symmetric positive definite.
struct QpProblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd g;
    Eigen::MatrixXd A;  // M x N, may have zero rows (unconstrained)
    Eigen::VectorXd b;  // M
};

struct QpSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd lambdas;      // one per constraint row, zero when inactive
    std::vector<int> active_set;  // constraint rows active at the solution
    double kkt_residual = 0.0;
    int iterations = 0;
    bool ridge_applied = false;   // degenerate working set was regularized
};

struct QpOptions {
    int max_iterations = 0;       // 0: derived from problem size
    double feas_tol = 1e-9;
    double step_tol = 1e-11;
    double dual_tol = 1e-10;
    const Eigen::VectorXd* warm_start = nullptr;
};

class QpInfeasible : public std::runtime_error {
public:
    QpInfeasible(const std::string& msg, std::vector<int> rows)
        : std::runtime_error(msg), certificate_rows(std::move(rows)) {}
    std::vector<int> certificate_rows;
};

/// Cached Cholesky factorization of H, reusable across solves that share the
/// same cost matrix (the ILC update re-solves with a fresh linear term each
/// iteration). solve() applies one step of iterative refinement, which keeps
/// the stationarity residual near machine precision even for badly
/// conditioned lifted Gram matrices.
struct QpFactorization {
    explicit QpFactorization(const Eigen::MatrixXd& H);
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd H;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

/// x = -H^{ -1} g by positive-definite factorization. Throws on non-PD H.
Eigen::VectorXd solve_unconstrained(const QpProblem& p);

QpSolution solve_qp(const QpProblem& p, const QpOptions& opts = {});
QpSolution solve_qp(const QpProblem& p, const QpFactorization& hfac, const QpOptions& opts = {});

/// Max of stationarity norm, primal violation, negative multipliers and
/// complementarity products; the machine-checkable first-order conditions.
double kkt_residual(const QpProblem& p, const QpSolution& sol);

/// Debug dump of a problem instance to JSON for offline oracle comparison.
void dump_qp_problem(const QpProblem& p, const std::string& path);
QpProblem load_qp_problem(const std::string& path);

}  // namespace l1ilc
