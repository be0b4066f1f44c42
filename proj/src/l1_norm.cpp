#include "l1ilc/l1_norm.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "l1ilc/routh.hpp"
#include "l1ilc/state_space.hpp"

namespace l1ilc {

std::string ConditionReport::to_string() const {
    std::ostringstream os;
    os << "H stable:    " << (h_stable ? "yes" : "no") << "\n"
       << "F stable:    " << (f_stable ? "yes" : "no") << "\n"
       << "G stable:    " << (g_stable ? "yes" : "no") << "\n"
       << "||G||_1:     " << g_l1_norm << "\n"
       << "L:           " << lipschitz << "\n"
       << "||G||_1 * L: " << product << "\n"
       << "condition:   " << (pass ? "PASS" : "FAIL");
    return os.str();
}

double impulse_l1_norm(const RationalTF& g, double dt, double horizon, double tail_tol) {
    if (dt <= 0.0) {
        throw std::invalid_argument("impulse_l1_norm: dt must be positive");
    }
    if (g.is_zero()) {
        return 0.0;
    }
    const RationalTF gm = tf_minreal(g);
    if (!gm.is_strictly_proper()) {
        throw std::invalid_argument("impulse_l1_norm: transfer function must be strictly proper");
    }
    if (!routh_hurwitz_stable(gm.den)) {
        throw std::invalid_argument("impulse_l1_norm: unstable transfer function, norm diverges");
    }

    if (horizon <= 0.0) {
        horizon = 10.0 / slowest_decay_rate(gm.den);
    }

    // Impulse response of the canonical realization: x(0) = B, y = C x.
    const StateSpace ss = to_state_space(gm);
    Eigen::VectorXd x = ss.B.col(0);
    double y_prev = (ss.C * x)(0, 0);
    double total = 0.0;
    double t = 0.0;
    double window_len = horizon;
    constexpr int kMaxDoublings = 40;

    for (int w = 0; w < kMaxDoublings; ++w) {
        const double window_end = t + window_len;
        double window_sum = 0.0;
        while (t < window_end) {
            auto [xn, y] = simulate_tf_step(ss, x, 0.0, dt);
            if (!std::isfinite(y)) {
                throw std::runtime_error("impulse_l1_norm: integration diverged");
            }
            window_sum += 0.5 * (std::abs(y_prev) + std::abs(y)) * dt;
            x = std::move(xn);
            y_prev = y;
            t += dt;
        }
        total += window_sum;
        if (window_sum < tail_tol) {
            return total;
        }
        window_len = t;  // total horizon doubles each pass
    }
    throw std::runtime_error("impulse_l1_norm: tail did not fall below tolerance");
}

ConditionReport check_l1_condition(const RationalTF& A, const RationalTF& M,
                                   const RationalTF& C, double K, double L, double dt) {
    if (L <= 0.0) {
        throw std::invalid_argument("check_l1_condition: Lipschitz constant must be positive");
    }
    const RationalTF H = compose_H(A, M, C);
    const RationalTF F = compose_F(H, C, K);
    const RationalTF G = compose_G(H, C);

    ConditionReport rep;
    rep.lipschitz = L;
    rep.h_stable = routh_hurwitz_stable(H.den);
    rep.f_stable = routh_hurwitz_stable(F.den);
    if (G.is_zero()) {
        rep.g_stable = true;
        rep.g_l1_norm = 0.0;
    } else {
        rep.g_stable = routh_hurwitz_stable(G.den);
        rep.g_l1_norm = rep.g_stable ? impulse_l1_norm(G, dt)
                                     : std::numeric_limits<double>::quiet_NaN();
    }
    rep.product = rep.g_l1_norm * L;
    rep.pass = rep.h_stable && rep.f_stable && rep.g_stable && rep.product < 1.0;
    return rep;
}

}  // namespace l1ilc
