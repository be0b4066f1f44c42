#pragma once

#include "l1ilc/transfer_function.hpp"

namespace l1ilc {

/// Outcome of the small-gain design check for one axis: H and F stability
/// plus the L1 norm of G(s) = H(s)(1 - C(s)) against the Lipschitz constant.
struct ConditionReport {
    bool h_stable = false;
    bool f_stable = false;
    bool g_stable = false;
    double g_l1_norm = 0.0;
    double lipschitz = 0.0;
    double product = 0.0;  // g_l1_norm * lipschitz
    bool pass = false;

    std::string to_string() const;
};

/// Integral of |impulse response| of a strictly proper, stable transfer function.
/// The horizon starts at `horizon` seconds (auto-sized from the slowest pole when
/// <= 0) and doubles until the last window contributes less than tail_tol.
/// Throws if g is unstable: the norm diverges and is not reported as a number.
double impulse_l1_norm(const RationalTF& g, double dt, double horizon = 0.0,
                       double tail_tol = 1e-6);

/// Evaluates the design conditions for plant A, reference model M, filter C,
/// outer gain K and disturbance Lipschitz constant L.
ConditionReport check_l1_condition(const RationalTF& A, const RationalTF& M,
                                   const RationalTF& C, double K, double L,
                                   double dt = 1e-3);

}  // namespace l1ilc
