#pragma once

#include <complex>
#include <string>
#include <vector>

namespace l1ilc {

/// Real polynomial in the Laplace variable s.
/// Coefficients are stored ascending: coeffs[k] multiplies s^k.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    /// Polynomial with the single coefficient c (a constant).
    static Polynomial constant(double c) { return Polynomial({c}); }
    /// The monomial s.
    static Polynomial s() { return Polynomial({0.0, 1.0}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const { return coeffs_.back(); }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    double operator[](int k) const { return coeffs_[static_cast<size_t>(k)]; }

    double eval(double s) const;
    std::complex<double> eval(std::complex<double> s) const;

    Polynomial derivative() const;

    /// p(s + a), expanded via synthetic Taylor shifting.
    Polynomial shifted(double a) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double k) const;

    bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

    std::string to_string() const;

private:
    // Drops trailing coefficients that are exactly zero; keeps at least one entry.
    void trim();

    std::vector<double> coeffs_;
};

inline Polynomial operator*(double k, const Polynomial& p) { return p * k; }

/// All complex roots, via the companion-matrix eigenproblem.
/// Requires degree >= 1 with a nonzero leading coefficient.
std::vector<std::complex<double>> poly_roots(const Polynomial& p);

/// Real polynomial with the given leading coefficient and root multiset.
/// Complex roots must appear in (approximately) conjugate pairs.
Polynomial poly_from_roots(const std::vector<std::complex<double>>& roots, double leading);

}  // namespace l1ilc
