#include "l1ilc/routh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace l1ilc {

namespace {

// Builds the Routh array row by row. Returns false as soon as a sign change
// (or a marginal constellation) rules out strict Hurwitz stability.
bool routh_array_stable(std::vector<double> row0, std::vector<double> row1) {
    bool zero_row_seen = false;
    // row0 corresponds to s^(power+1), row1 to s^power; powers shrink as we go.
    int power = static_cast<int>(row0.size()) + static_cast<int>(row1.size()) - 2;

    // Sign changes are invariant under positive row scaling, so each row is
    // normalized to keep the numerically-zero test meaningful.
    auto normalize = [](std::vector<double>& row) {
        double m = 0.0;
        for (double v : row) m = std::max(m, std::abs(v));
        if (m > 0.0) {
            for (double& v : row) v /= m;
        }
        return m;
    };
    normalize(row0);
    normalize(row1);

    while (power >= 0) {
        const bool all_zero =
            std::all_of(row1.begin(), row1.end(), [](double v) { return std::abs(v) <= 1e-13; });
        if (all_zero) {
            // Auxiliary polynomial lives in row0 with powers power+1, power-1, ...
            // Replace the vanished row with the derivative of the auxiliary polynomial.
            zero_row_seen = true;
            for (size_t i = 0; i < row1.size(); ++i) {
                const int pw = power + 1 - 2 * static_cast<int>(i);
                row1[i] = (i < row0.size()) ? row0[i] * pw : 0.0;
            }
            if (normalize(row1) == 0.0) {
                return false;
            }
        }

        const double pivot = row1[0];
        if (std::abs(pivot) <= 1e-13) {
            // Epsilon-perturbation rule: a vanishing pivot in a nonzero row means
            // at least one root is not strictly in the left half plane.
            return false;
        }
        if (pivot < 0.0) {
            return false;
        }
        if (power == 0) break;

        std::vector<double> next(row0.size() - 1, 0.0);
        if (next.empty()) next.push_back(0.0);
        for (size_t i = 0; i < next.size(); ++i) {
            const double a = (i + 1 < row0.size()) ? row0[i + 1] : 0.0;
            const double b = (i + 1 < row1.size()) ? row1[i + 1] : 0.0;
            next[i] = a - (row0[0] / pivot) * b;
        }
        normalize(next);
        row0 = std::move(row1);
        row1 = std::move(next);
        --power;
    }
    return !zero_row_seen;
}

}  // namespace

bool routh_hurwitz_stable(const Polynomial& p) {
    if (p.is_zero()) {
        throw std::invalid_argument("routh_hurwitz_stable: zero polynomial");
    }
    const int n = p.degree();
    if (n < 1) {
        throw std::invalid_argument("routh_hurwitz_stable: degree >= 1 required");
    }

    // Normalize the leading coefficient positive.
    std::vector<double> c = p.coeffs();
    if (c.back() < 0.0) {
        for (double& v : c) v = -v;
    }
    // Necessary condition: all coefficients strictly positive.
    for (double v : c) {
        if (v <= 0.0) return false;
    }
    if (n == 1) {
        return true;
    }

    // Rows of the array: descending powers, c is ascending.
    std::vector<double> row0;
    std::vector<double> row1;
    for (int k = n; k >= 0; k -= 2) row0.push_back(c[static_cast<size_t>(k)]);
    for (int k = n - 1; k >= 0; k -= 2) row1.push_back(c[static_cast<size_t>(k)]);
    return routh_array_stable(std::move(row0), std::move(row1));
}

double slowest_decay_rate(const Polynomial& p, double rel_tol) {
    if (!routh_hurwitz_stable(p)) {
        throw std::invalid_argument("slowest_decay_rate: polynomial is not Hurwitz");
    }
    // p(s - a) has roots shifted right by a; it stays Hurwitz iff a < min|Re(root)|.
    double lo = 0.0;
    double hi = 1.0;
    while (routh_hurwitz_stable(p.shifted(-hi))) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) return lo;
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (routh_hurwitz_stable(p.shifted(-mid))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace l1ilc
