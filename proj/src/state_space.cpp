#include "l1ilc/state_space.hpp"

#include <cmath>
#include <stdexcept>

namespace l1ilc {

StateSpace to_state_space(const RationalTF& g) {
    if (!g.is_proper()) {
        throw std::invalid_argument("to_state_space: transfer function must be proper");
    }
    const int n = g.den.degree();

    // Split off the feedthrough for non-strictly-proper inputs:
    // num = d*den + rem with deg(rem) < n. Denominator is monic by construction.
    double d = 0.0;
    Polynomial rem = g.num;
    if (!g.is_strictly_proper() && n >= 0) {
        d = g.num.leading() / g.den.leading();
        rem = g.num - g.den * d;
        if (rem.degree() >= n && !rem.is_zero()) {
            // Trailing cancellation left a stray high-order term; drop it explicitly.
            std::vector<double> c = rem.coeffs();
            c.resize(static_cast<size_t>(n), 0.0);
            if (c.empty()) c.push_back(0.0);
            rem = Polynomial(std::move(c));
        }
    }

    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::MatrixXd::Zero(n, 1);
    ss.C = Eigen::MatrixXd::Zero(1, n);
    ss.D = Eigen::MatrixXd::Constant(1, 1, d);
    if (n == 0) {
        return ss;
    }
    for (int i = 0; i + 1 < n; ++i) {
        ss.A(i, i + 1) = 1.0;
    }
    for (int j = 0; j < n; ++j) {
        ss.A(n - 1, j) = -g.den[j];
        if (j <= rem.degree()) ss.C(0, j) = rem[j];
    }
    ss.B(n - 1, 0) = 1.0;
    return ss;
}

std::pair<Eigen::VectorXd, double> simulate_tf_step(const StateSpace& ss,
                                                    const Eigen::VectorXd& x,
                                                    double u,
                                                    double dt) {
    if (dt <= 0.0) {
        throw std::invalid_argument("simulate_tf_step: dt must be positive");
    }
    const Eigen::VectorXd bu = ss.B * u;
    const Eigen::VectorXd k1 = ss.A * x + bu;
    const Eigen::VectorXd k2 = ss.A * (x + 0.5 * dt * k1) + bu;
    const Eigen::VectorXd k3 = ss.A * (x + 0.5 * dt * k2) + bu;
    const Eigen::VectorXd k4 = ss.A * (x + dt * k3) + bu;
    Eigen::VectorXd xn = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double y = (ss.C * xn)(0, 0) + ss.D(0, 0) * u;
    return {std::move(xn), y};
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) {
        throw std::invalid_argument("expm: square matrix required");
    }
    const int n = static_cast<int>(M.rows());
    if (n == 0) {
        return Eigen::MatrixXd(0, 0);
    }

    // Scale so the scaled norm is small, apply a (6,6) Pade approximant, square back.
    const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
    }
    const Eigen::MatrixXd A = M / std::pow(2.0, squarings);

    static const double c[] = {1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0,
                               1.0 / 15840.0, 1.0 / 665280.0};
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd A2 = A * A;
    const Eigen::MatrixXd A4 = A2 * A2;
    const Eigen::MatrixXd A6 = A4 * A2;
    const Eigen::MatrixXd U = A * (c[1] * I + c[3] * A2 + c[5] * A4);
    const Eigen::MatrixXd V = c[0] * I + c[2] * A2 + c[4] * A4 + c[6] * A6;

    Eigen::MatrixXd E = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < squarings; ++k) {
        E = E * E;
    }
    return E;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_zoh(const Eigen::MatrixXd& A,
                                                           const Eigen::MatrixXd& B,
                                                           double dt) {
    if (dt <= 0.0) {
        throw std::invalid_argument("discretize_zoh: dt must be positive");
    }
    const int n = static_cast<int>(A.rows());
    const int m = static_cast<int>(B.cols());
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = A * dt;
    aug.topRightCorner(n, m) = B * dt;
    const Eigen::MatrixXd E = expm(aug);
    return {E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

}  // namespace l1ilc
