#pragma once

#include "l1ilc/polynomial.hpp"

namespace l1ilc {

/// True iff every root of p lies strictly in the open left half plane.
/// Zero first-column entries are handled by the epsilon-perturbation rule;
/// a vanishing row (symmetric root constellation) is continued with the
/// derivative of the auxiliary polynomial and reported unstable, since
/// imaginary-axis roots violate strict stability.
bool routh_hurwitz_stable(const Polynomial& p);

/// Largest a >= 0 such that p(s - a) is still Hurwitz, found by bisection.
/// Equals the distance of the slowest root from the imaginary axis.
/// Requires p Hurwitz; used to size impulse-response horizons.
double slowest_decay_rate(const Polynomial& p, double rel_tol = 1e-3);

}  // namespace l1ilc
