#include "l1ilc/transfer_function.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace l1ilc {

namespace {

// Gain/zero/pole working form. Rational arithmetic is carried out on root
// multisets so that common factors cancel by pairing instead of by polynomial
// division, which keeps repeated factors exact through long compositions.
struct Zpk {
    double gain = 0.0;
    std::vector<std::complex<double>> zeros;
    std::vector<std::complex<double>> poles;
};

bool close_roots(const std::complex<double>& a, const std::complex<double>& b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Removes zero/pole pairs that coincide within tol.
void cancel(Zpk& g, double tol) {
    for (size_t i = 0; i < g.zeros.size();) {
        bool cancelled = false;
        for (size_t j = 0; j < g.poles.size(); ++j) {
            if (close_roots(g.zeros[i], g.poles[j], tol)) {
                g.zeros.erase(g.zeros.begin() + static_cast<long>(i));
                g.poles.erase(g.poles.begin() + static_cast<long>(j));
                cancelled = true;
                break;
            }
        }
        if (!cancelled) ++i;
    }
}

Zpk to_zpk(const RationalTF& g) {
    Zpk out;
    if (g.is_zero()) {
        return out;
    }
    out.gain = g.num.leading() / g.den.leading();
    if (g.num.degree() >= 1) out.zeros = poly_roots(g.num);
    if (g.den.degree() >= 1) out.poles = poly_roots(g.den);
    return out;
}

RationalTF from_zpk(const Zpk& g) {
    if (g.gain == 0.0) {
        return RationalTF();
    }
    return RationalTF(poly_from_roots(g.zeros, g.gain), poly_from_roots(g.poles, 1.0));
}

Zpk zpk_mul(const Zpk& a, const Zpk& b, double tol) {
    Zpk out;
    out.gain = a.gain * b.gain;
    if (out.gain == 0.0) return out;
    out.zeros = a.zeros;
    out.zeros.insert(out.zeros.end(), b.zeros.begin(), b.zeros.end());
    out.poles = a.poles;
    out.poles.insert(out.poles.end(), b.poles.begin(), b.poles.end());
    cancel(out, tol);
    return out;
}

Zpk zpk_inv(const Zpk& a) {
    if (a.gain == 0.0) {
        throw std::invalid_argument("tf_div: division by the zero transfer function");
    }
    Zpk out;
    out.gain = 1.0 / a.gain;
    out.zeros = a.poles;
    out.poles = a.zeros;
    return out;
}

// Pole multiset of the least common denominator: shared poles counted once.
Zpk zpk_add(const Zpk& a, const Zpk& b, double tol) {
    if (a.gain == 0.0) return b;
    if (b.gain == 0.0) return a;

    std::vector<std::complex<double>> lcm = a.poles;
    std::vector<bool> matched(a.poles.size(), false);
    std::vector<std::complex<double>> b_extra;
    for (const auto& pb : b.poles) {
        bool found = false;
        for (size_t i = 0; i < a.poles.size(); ++i) {
            if (!matched[i] && close_roots(pb, a.poles[i], tol)) {
                matched[i] = true;
                found = true;
                break;
            }
        }
        if (!found) b_extra.push_back(pb);
    }
    lcm.insert(lcm.end(), b_extra.begin(), b_extra.end());

    // Cofactor of each operand: lcm poles minus its own poles.
    auto cofactor = [tol](const std::vector<std::complex<double>>& all,
                          const std::vector<std::complex<double>>& own) {
        std::vector<std::complex<double>> cof = all;
        for (const auto& p : own) {
            for (size_t i = 0; i < cof.size(); ++i) {
                if (close_roots(p, cof[i], tol)) {
                    cof.erase(cof.begin() + static_cast<long>(i));
                    break;
                }
            }
        }
        return cof;
    };

    const Polynomial na =
        poly_from_roots(a.zeros, a.gain) * poly_from_roots(cofactor(lcm, a.poles), 1.0);
    const Polynomial nb =
        poly_from_roots(b.zeros, b.gain) * poly_from_roots(cofactor(lcm, b.poles), 1.0);
    const Polynomial num = na + nb;

    Zpk out;
    if (num.is_zero()) return out;
    out.gain = num.leading();
    if (num.degree() >= 1) out.zeros = poly_roots(num);
    out.poles = lcm;
    cancel(out, tol);
    return out;
}

}  // namespace

RationalTF::RationalTF(Polynomial n, Polynomial d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) {
        throw std::invalid_argument("RationalTF: zero denominator");
    }
    const double lead = den.leading();
    num = num * (1.0 / lead);
    den = den * (1.0 / lead);
}

RationalTF RationalTF::first_order_lowpass(double pole) {
    if (pole <= 0.0) {
        throw std::invalid_argument("first_order_lowpass: pole must be positive");
    }
    return RationalTF({pole}, {pole, 1.0});
}

double RationalTF::dc_gain() const {
    const double d0 = den[0];
    if (d0 == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return num[0] / d0;
}

RationalTF tf_add(const RationalTF& a, const RationalTF& b) {
    return from_zpk(zpk_add(to_zpk(a), to_zpk(b), kCancelTol));
}

RationalTF tf_sub(const RationalTF& a, const RationalTF& b) {
    return tf_add(a, tf_scale(b, -1.0));
}

RationalTF tf_mul(const RationalTF& a, const RationalTF& b) {
    return from_zpk(zpk_mul(to_zpk(a), to_zpk(b), kCancelTol));
}

RationalTF tf_div(const RationalTF& a, const RationalTF& b) {
    return from_zpk(zpk_mul(to_zpk(a), zpk_inv(to_zpk(b)), kCancelTol));
}

RationalTF tf_scale(const RationalTF& a, double k) {
    return RationalTF(a.num * k, a.den);
}

RationalTF tf_minreal(const RationalTF& g, double tol) {
    Zpk z = to_zpk(g);
    cancel(z, tol);
    return from_zpk(z);
}

RationalTF compose_H(const RationalTF& A, const RationalTF& M, const RationalTF& C) {
    if (!A.is_strictly_proper()) {
        throw std::invalid_argument("compose_H: A(s) must be strictly proper");
    }
    const Zpk a = to_zpk(A);
    const Zpk m = to_zpk(M);
    const Zpk c = to_zpk(C);
    const Zpk one{1.0, {}, {}};
    const Zpk den = zpk_add(zpk_mul(c, a, kCancelTol),
                            zpk_mul(zpk_add(one, zpk_mul(c, Zpk{-1.0, {}, {}}, kCancelTol), kCancelTol),
                                    m, kCancelTol),
                            kCancelTol);
    if (den.gain == 0.0) {
        throw std::invalid_argument("compose_H: degenerate (identically zero) denominator");
    }
    return from_zpk(zpk_mul(zpk_mul(a, m, kCancelTol), zpk_inv(den), kCancelTol));
}

RationalTF compose_G(const RationalTF& H, const RationalTF& C) {
    return tf_mul(H, tf_sub(RationalTF::constant(1.0), C));
}

RationalTF compose_F(const RationalTF& H, const RationalTF& C, double K) {
    const RationalTF hck = tf_scale(tf_mul(H, C), K);
    const RationalTF den = tf_add(RationalTF({0.0, 1.0}, {1.0}), hck);
    if (den.is_zero()) {
        throw std::invalid_argument("compose_F: degenerate denominator");
    }
    return tf_div(RationalTF::constant(1.0), den);
}

}  // namespace l1ilc
