#pragma once

// Principal-branch evaluation of the scalar analytic functions used by the
// whole toolkit. Branch-cut contracts:
//   y^eps          cut on (-inf, 0]
//   (1-y)^(1/eps)  cut on [1, +inf)
//   (y-x^2)^eps    cut where y-x^2 lies on (-inf, 0]
// Points within tol::cut_endpoint of a cut endpoint evaluate to the analytic
// limit (0) instead of raising, which the D(1)=0 limits require.

#include "darboux/types.hpp"

namespace darboux {

/// exp(a*Log z), Log the principal logarithm (arg in (-pi, pi)).
/// Throws BranchCutError on (-inf, 0], NonFiniteError on overflow.
Cpx principal_power(const Cpx& z, double a);

/// h(y) = y^eps (1-y); the first integral restricted to the section {x=0}.
Cpx h_section(const Cpx& y, const EpsParam& ep);

/// h'(y) = h(y) * (eps/y - 1/(1-y)); valid off the cuts and off {0, 1}.
Cpx h_section_prime(const Cpx& y, const EpsParam& ep);

/// f(y) = y (1-y)^(1/eps); satisfies f = h^(1/eps) on D0 u D1.
Cpx f_rs(const Cpx& y, const EpsParam& ep);

/// Full first integral H(x,y) = (y-x^2)^eps (1-y); H(0,y) = h_section(y).
Cpx H_full(const Cpx& x, const Cpx& y, const EpsParam& ep);

/// Rescaled section kernel g(y) = y (1-eps*y)^(1/eps).
Cpx g_rescaled(const Cpx& y, const EpsParam& ep);

/// Limit kernel g(y) = y e^{-y} of the blown-up chart.
Cpx g_limit(const Cpx& y);

// Real fast paths on (0,1), used by the real Dulac map and the orbit code.
double h_real(double y, const EpsParam& ep);
double h_real_prime(double y, const EpsParam& ep);

}  // namespace darboux
