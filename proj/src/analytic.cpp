#include "darboux/analytic.hpp"

#include <cmath>

#include "darboux/errors.hpp"

namespace darboux {

EpsParam::EpsParam(double e) : eps(e) {
    if (!(e > 0.0) || !std::isfinite(e))
        throw InvalidEpsError("eps must be a finite positive real");
}

namespace {

bool on_negative_ray(const Cpx& z) {
    return z.imag() == 0.0 && z.real() < 0.0;
}

}  // namespace

Cpx principal_power(const Cpx& z, double a) {
    if (!is_finite(z) || !std::isfinite(a))
        throw NonFiniteError("principal_power: non-finite argument");
    if (a == 0.0) return Cpx(1.0, 0.0);
    // The analytic-limit convention applies at the endpoint itself (true
    // underflow scale). For small exponents z^a stays order one down to
    // exponentially small |z|, so a wide band would be plain wrong.
    if (std::abs(z) < 1e-300) {
        if (a > 0.0) return Cpx(0.0, 0.0);
        throw BranchCutError("principal_power: z ~ 0 with non-positive exponent");
    }
    if (on_negative_ray(z))
        throw BranchCutError("principal_power: z on (-inf, 0]");
    Cpx w = std::exp(a * std::log(z));
    if (!is_finite(w)) throw NonFiniteError("principal_power: overflow");
    return w;
}

Cpx h_section(const Cpx& y, const EpsParam& ep) {
    return principal_power(y, ep.eps) * (Cpx(1.0, 0.0) - y);
}

Cpx h_section_prime(const Cpx& y, const EpsParam& ep) {
    const Cpx one(1.0, 0.0);
    if (std::abs(y) < tol::cut_endpoint || std::abs(one - y) < tol::cut_endpoint)
        throw BranchCutError("h_section_prime: derivative at cut endpoint");
    return h_section(y, ep) * (ep.eps / y - one / (one - y));
}

Cpx f_rs(const Cpx& y, const EpsParam& ep) {
    return y * principal_power(Cpx(1.0, 0.0) - y, 1.0 / ep.eps);
}

Cpx H_full(const Cpx& x, const Cpx& y, const EpsParam& ep) {
    const Cpx p0 = y - x * x;
    // The parabola is the boundary of the branch domain, not a removable
    // endpoint like y=0 is for h_section.
    if (std::abs(p0) < tol::cut_endpoint)
        throw BranchCutError("H_full: point on the parabola y = x^2");
    return principal_power(p0, ep.eps) * (Cpx(1.0, 0.0) - y);
}

Cpx g_rescaled(const Cpx& y, const EpsParam& ep) {
    return y * principal_power(Cpx(1.0, 0.0) - ep.eps * y, 1.0 / ep.eps);
}

Cpx g_limit(const Cpx& y) {
    Cpx w = y * std::exp(-y);
    if (!is_finite(w)) throw NonFiniteError("g_limit: overflow");
    return w;
}

double h_real(double y, const EpsParam& ep) {
    if (y < 0.0) throw BranchCutError("h_real: y < 0");
    return std::pow(y, ep.eps) * (1.0 - y);
}

double h_real_prime(double y, const EpsParam& ep) {
    if (y <= 0.0) throw BranchCutError("h_real_prime: y <= 0");
    return std::pow(y, ep.eps - 1.0) * (ep.eps - (1.0 + ep.eps) * y);
}

}  // namespace darboux
