#pragma once

#include <Eigen/Dense>

namespace l1ilc::kernels {

/// The lifted-domain products below dominate the scenario runtime once the
/// trajectory grows past a few hundred samples. Each kernel ships in two
/// variants: a plain serial reference, kept as the ground truth for tests,
/// and an OpenMP-parallel version used by default. Both variants accumulate
/// each output entry in the same order, so their results agree bitwise.

/// y = F x.
void matvec_serial(const Eigen::MatrixXd& F, const Eigen::VectorXd& x, Eigen::VectorXd& y);
void matvec_parallel(const Eigen::MatrixXd& F, const Eigen::VectorXd& x, Eigen::VectorXd& y);

/// y = F^T x.
void matvec_transpose_serial(const Eigen::MatrixXd& F, const Eigen::VectorXd& x,
                             Eigen::VectorXd& y);
void matvec_transpose_parallel(const Eigen::MatrixXd& F, const Eigen::VectorXd& x,
                               Eigen::VectorXd& y);

/// H = q * F^T F (+ W when given). Only the lower triangle is computed and
/// mirrored. When lower_triangular is set, F is taken as lower triangular and
/// the inner sums skip the structural zeros.
void gram_serial(const Eigen::MatrixXd& F, double q, const Eigen::MatrixXd* W,
                 bool lower_triangular, Eigen::MatrixXd& H);
void gram_parallel(const Eigen::MatrixXd& F, double q, const Eigen::MatrixXd* W,
                   bool lower_triangular, Eigen::MatrixXd& H);

/// True when the parallel variants actually fan out (compiled with OpenMP and
/// not disabled via L1ILC_SERIAL=1).
bool parallel_enabled();

/// Number of threads the parallel variants will use.
int thread_count();

// Dispatchers: parallel when available, serial reference otherwise.

inline Eigen::VectorXd matvec(const Eigen::MatrixXd& F, const Eigen::VectorXd& x) {
    Eigen::VectorXd y;
    if (parallel_enabled()) {
        matvec_parallel(F, x, y);
    } else {
        matvec_serial(F, x, y);
    }
    return y;
}

inline Eigen::VectorXd matvec_transpose(const Eigen::MatrixXd& F, const Eigen::VectorXd& x) {
    Eigen::VectorXd y;
    if (parallel_enabled()) {
        matvec_transpose_parallel(F, x, y);
    } else {
        matvec_transpose_serial(F, x, y);
    }
    return y;
}

inline Eigen::MatrixXd gram(const Eigen::MatrixXd& F, double q, const Eigen::MatrixXd* W,
                            bool lower_triangular) {
    Eigen::MatrixXd H;
    if (parallel_enabled()) {
        gram_parallel(F, q, W, lower_triangular, H);
    } else {
        gram_serial(F, q, W, lower_triangular, H);
    }
    return H;
}

}  // namespace l1ilc::kernels
