#include "l1ilc/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace l1ilc {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw std::invalid_argument("Polynomial: empty coefficient list");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("Polynomial: non-finite coefficient");
        }
    }
    trim();
}

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

std::complex<double> Polynomial::eval(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) {
        return Polynomial({0.0});
    }
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = coeffs_[k] * static_cast<double>(k);
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double a) const {
    // Repeated synthetic division by (s - (-a)) yields the Taylor coefficients at -a,
    // which are exactly the coefficients of p(s + a).
    std::vector<double> work = coeffs_;
    const int n = degree();
    std::vector<double> out(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        // Evaluate and deflate at s = -a... Horner with remainder.
        double rem = work.back();
        for (int k = static_cast<int>(work.size()) - 2; k >= 0; --k) {
            const double next = work[static_cast<size_t>(k)] + rem * a;
            work[static_cast<size_t>(k)] = rem;
            rem = next;
        }
        out[static_cast<size_t>(j)] = rem;
        work.pop_back();
        if (work.empty()) break;
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
    for (size_t k = 0; k < rhs.coeffs_.size(); ++k) out[k] += rhs.coeffs_[k];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
    for (size_t k = 0; k < rhs.coeffs_.size(); ++k) out[k] -= rhs.coeffs_[k];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) {
        return Polynomial({0.0});
    }
    std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        for (size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double k) const {
    std::vector<double> out = coeffs_;
    for (double& c : out) c *= k;
    return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const double c = coeffs_[static_cast<size_t>(k)];
        if (c == 0.0 && degree() > 0) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        const double a = std::abs(c);
        if (k == 0 || a != 1.0) os << a;
        if (k >= 1) os << "s";
        if (k >= 2) os << "^" << k;
    }
    if (first) os << "0";
    return os.str();
}

std::vector<std::complex<double>> poly_roots(const Polynomial& p) {
    const int n = p.degree();
    if (n < 1 || p.leading() == 0.0) {
        throw std::invalid_argument("poly_roots: degree >= 1 with nonzero leading coefficient required");
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        companion(i, i - 1) = 1.0;
    }
    const double lead = p.leading();
    for (int i = 0; i < n; ++i) {
        companion(i, n - 1) = -p[i] / lead;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        roots[static_cast<size_t>(i)] = es.eigenvalues()(i);
    }
    return roots;
}

Polynomial poly_from_roots(const std::vector<std::complex<double>>& roots, double leading) {
    Polynomial p = Polynomial::constant(leading);
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const auto& r = roots[i];
        const double scale = std::max(1.0, std::abs(r));
        if (std::abs(r.imag()) <= 1e-9 * scale) {
            p = p * Polynomial({-r.real(), 1.0});
            used[i] = true;
            continue;
        }
        // Find the closest conjugate partner and emit a real quadratic factor.
        size_t best = roots.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(roots[j] - std::conj(r));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == roots.size() || best_d > 1e-6 * scale) {
            throw std::invalid_argument("poly_from_roots: complex root without conjugate partner");
        }
        const std::complex<double> avg = 0.5 * (r + std::conj(roots[best]));
        p = p * Polynomial({std::norm(avg), -2.0 * avg.real(), 1.0});
        used[i] = used[best] = true;
    }
    return p;
}

}  // namespace l1ilc
