// Times the serial reference kernels against their OpenMP variants on
// lifted-map shapes and verifies that both produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "l1ilc/kernels.hpp"

using namespace l1ilc;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    // One warmup, then best-of-N.
    fn();
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clock_type::now();
        fn();
        const double ms =
            std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

Eigen::MatrixXd random_lower_triangular(long n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    for (long j = 0; j < n; ++j) {
        for (long i = j; i < n; ++i) {
            F(i, j) = g(rng);
        }
    }
    return F;
}

}  // namespace

int main() {
    std::printf("threads available to parallel kernels: %d\n\n", kernels::thread_count());
    std::printf("%8s %-22s %12s %12s %9s %9s\n", "n", "kernel", "serial[ms]", "parallel[ms]",
                "speedup", "max|diff|");

    std::mt19937_64 rng(7);
    for (long n : {300L, 600L, 1200L}) {
        const Eigen::MatrixXd F = random_lower_triangular(n, rng);
        const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(n, [&](long) {
            return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        });
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
        W.diagonal().setConstant(0.001);

        {
            Eigen::VectorXd ys, yp;
            const double ts = time_ms([&] { kernels::matvec_serial(F, x, ys); }, 5);
            const double tp = time_ms([&] { kernels::matvec_parallel(F, x, yp); }, 5);
            std::printf("%8ld %-22s %12.3f %12.3f %8.2fx %9.1e\n", n, "matvec", ts, tp,
                        ts / tp, (ys - yp).cwiseAbs().maxCoeff());
        }
        {
            Eigen::VectorXd ys, yp;
            const double ts = time_ms([&] { kernels::matvec_transpose_serial(F, x, ys); }, 5);
            const double tp = time_ms([&] { kernels::matvec_transpose_parallel(F, x, yp); }, 5);
            std::printf("%8ld %-22s %12.3f %12.3f %8.2fx %9.1e\n", n, "matvec_transpose", ts,
                        tp, ts / tp, (ys - yp).cwiseAbs().maxCoeff());
        }
        {
            Eigen::MatrixXd Hs, Hp;
            const double ts =
                time_ms([&] { kernels::gram_serial(F, 1.0, &W, true, Hs); }, 3);
            const double tp =
                time_ms([&] { kernels::gram_parallel(F, 1.0, &W, true, Hp); }, 3);
            std::printf("%8ld %-22s %12.3f %12.3f %8.2fx %9.1e\n", n, "gram(triangular)", ts,
                        tp, ts / tp, (Hs - Hp).cwiseAbs().maxCoeff());
        }
    }
    return 0;
}
