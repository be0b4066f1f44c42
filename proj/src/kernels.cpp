#include "l1ilc/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace l1ilc::kernels {

namespace {

bool serial_forced() {
    static const bool forced = [] {
        const char* v = std::getenv("L1ILC_SERIAL");
        return v != nullptr && v[0] == '1';
    }();
    return forced;
}

inline double dot_range(const double* a, const double* b, long lo, long hi) {
    double acc = 0.0;
    for (long k = lo; k < hi; ++k) {
        acc += a[k] * b[k];
    }
    return acc;
}

}  // namespace

bool parallel_enabled() {
#ifdef _OPENMP
    return !serial_forced();
#else
    return false;
#endif
}

int thread_count() {
#ifdef _OPENMP
    return parallel_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

void matvec_serial(const Eigen::MatrixXd& F, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    if (F.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    const long rows = F.rows();
    const long cols = F.cols();
    y.resize(rows);
    for (long i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (long j = 0; j < cols; ++j) {
            acc += F(i, j) * x(j);
        }
        y(i) = acc;
    }
}

void matvec_parallel(const Eigen::MatrixXd& F, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    if (F.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    const long rows = F.rows();
    const long cols = F.cols();
    y.resize(rows);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (long j = 0; j < cols; ++j) {
            acc += F(i, j) * x(j);
        }
        y(i) = acc;
    }
}

void matvec_transpose_serial(const Eigen::MatrixXd& F, const Eigen::VectorXd& x,
                             Eigen::VectorXd& y) {
    if (F.rows() != x.size()) {
        throw std::invalid_argument("matvec_transpose: dimension mismatch");
    }
    const long rows = F.rows();
    const long cols = F.cols();
    y.resize(cols);
    for (long j = 0; j < cols; ++j) {
        // Column-major storage makes F(:,j) contiguous.
        y(j) = dot_range(F.col(j).data(), x.data(), 0, rows);
    }
}

void matvec_transpose_parallel(const Eigen::MatrixXd& F, const Eigen::VectorXd& x,
                               Eigen::VectorXd& y) {
    if (F.rows() != x.size()) {
        throw std::invalid_argument("matvec_transpose: dimension mismatch");
    }
    const long rows = F.rows();
    const long cols = F.cols();
    y.resize(cols);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < cols; ++j) {
        y(j) = dot_range(F.col(j).data(), x.data(), 0, rows);
    }
}

namespace {

inline void gram_impl_row(const Eigen::MatrixXd& F, double q, const Eigen::MatrixXd* W,
                          bool lower_triangular, long i, Eigen::MatrixXd& H) {
    const long n = F.cols();
    const long rows = F.rows();
    for (long j = i; j < n; ++j) {
        // F lower triangular: column j is zero above row j.
        const long k0 = lower_triangular ? std::max(i, j) : 0;
        double acc = q * dot_range(F.col(i).data(), F.col(j).data(), k0, rows);
        if (W != nullptr) acc += (*W)(i, j);
        H(i, j) = acc;
        H(j, i) = acc;
    }
}

}  // namespace

void gram_serial(const Eigen::MatrixXd& F, double q, const Eigen::MatrixXd* W,
                 bool lower_triangular, Eigen::MatrixXd& H) {
    const long n = F.cols();
    if (W != nullptr && (W->rows() != n || W->cols() != n)) {
        throw std::invalid_argument("gram: W dimension mismatch");
    }
    H.resize(n, n);
    for (long i = 0; i < n; ++i) {
        gram_impl_row(F, q, W, lower_triangular, i, H);
    }
}

void gram_parallel(const Eigen::MatrixXd& F, double q, const Eigen::MatrixXd* W,
                   bool lower_triangular, Eigen::MatrixXd& H) {
    const long n = F.cols();
    if (W != nullptr && (W->rows() != n || W->cols() != n)) {
        throw std::invalid_argument("gram: W dimension mismatch");
    }
    H.resize(n, n);
    // Upper rows carry longer inner loops; dynamic scheduling balances them.
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
        gram_impl_row(F, q, W, lower_triangular, i, H);
    }
}

}  // namespace l1ilc::kernels
