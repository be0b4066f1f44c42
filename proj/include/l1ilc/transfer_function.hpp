#pragma once

#include "l1ilc/polynomial.hpp"

namespace l1ilc {

/// Rational transfer function num(s)/den(s), normalized to a monic denominator.
/// Every function built by this workbench satisfies deg(num) <= deg(den).
struct RationalTF {
    Polynomial num{std::vector<double>{0.0}};
    Polynomial den{std::vector<double>{1.0}};

    RationalTF() = default;
    RationalTF(Polynomial n, Polynomial d);
    RationalTF(std::vector<double> num_coeffs, std::vector<double> den_coeffs)
        : RationalTF(Polynomial(std::move(num_coeffs)), Polynomial(std::move(den_coeffs))) {}

    static RationalTF constant(double k) { return RationalTF({k}, {1.0}); }
    /// First-order unity-DC-gain low pass p/(s+p).
    static RationalTF first_order_lowpass(double pole);
    /// The pure integrator 1/s.
    static RationalTF integrator() { return RationalTF({1.0}, {0.0, 1.0}); }

    bool is_zero() const { return num.is_zero(); }
    bool is_proper() const { return num.degree() <= den.degree(); }
    bool is_strictly_proper() const { return is_zero() || num.degree() < den.degree(); }
    double dc_gain() const;

    std::complex<double> eval(std::complex<double> s) const { return num.eval(s) / den.eval(s); }
};

/// Relative tolerance used to pair coincident poles and zeros during cancellation.
inline constexpr double kCancelTol = 1e-8;

RationalTF tf_add(const RationalTF& a, const RationalTF& b);
RationalTF tf_sub(const RationalTF& a, const RationalTF& b);
RationalTF tf_mul(const RationalTF& a, const RationalTF& b);
RationalTF tf_div(const RationalTF& a, const RationalTF& b);
RationalTF tf_scale(const RationalTF& a, double k);

/// Cancels pole/zero pairs closer than tol (relative) and renormalizes.
RationalTF tf_minreal(const RationalTF& g, double tol = kCancelTol);

/// H(s) = A(s)M(s) / (C(s)A(s) + (1 - C(s))M(s)), in minimal normalized form.
RationalTF compose_H(const RationalTF& A, const RationalTF& M, const RationalTF& C);

/// G(s) = H(s)(1 - C(s)).
RationalTF compose_G(const RationalTF& H, const RationalTF& C);

/// F(s) = 1 / (s + H(s)C(s)K).
RationalTF compose_F(const RationalTF& H, const RationalTF& C, double K);

}  // namespace l1ilc
