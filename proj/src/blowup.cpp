#include "darboux/blowup.hpp"

#include <cmath>

#include "darboux/errors.hpp"

namespace darboux {

double rescaled_integral_residual(const EpsParam& ep, const Box& box, std::size_t n) {
    if (n < 2) throw InvalidEpsError("rescaled_integral_residual: grid too small");
    const double inv = 1.0 / ep.eps;
    const long k = std::lround(inv);
    const bool integer_exponent = std::abs(inv - double(k)) < 1e-12;
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -box.x_half + 2.0 * box.x_half * double(i) / double(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double y = -box.y_half + 2.0 * box.y_half * double(j) / double(n - 1);
            const double base = 1.0 - ep.eps * y;
            double powv;
            if (base > 0.0) {
                powv = std::pow(base, inv);
            } else if (integer_exponent) {
                // (1 - eps*y)^(1/eps) is a polynomial when 1/eps is integer
                powv = std::pow(std::abs(base), inv) * ((k % 2 == 0) ? 1.0 : -1.0);
            } else {
                throw BranchCutError("rescaled_integral_residual: 1 - eps*y <= 0 in box");
            }
            const double rescaled = powv * (y - x * x);
            const double limit = std::exp(-y) * (y - x * x);
            sup = std::max(sup, std::abs(rescaled - limit));
        }
    }
    return sup;
}

}  // namespace darboux
