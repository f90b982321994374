#pragma once

// Weighted blow-up chart at the turning point: original coordinates are
// (sqrt(eps) * x, eps * y) in terms of chart coordinates. The chart keeps
// the parabola y = x^2 invariant and sends the center ordinate y_c to
// 1/(1+eps); on it the first integral is O(eps)-close to e^{-y}(y - x^2).

#include <array>

#include "darboux/types.hpp"

namespace darboux {

struct BlowupChart {
    EpsParam ep;

    explicit BlowupChart(double eps) : ep(eps) {}

    /// chart -> original: (x, y) -> (sqrt(eps) x, eps y)
    std::array<double, 2> from_chart(const std::array<double, 2>& p) const {
        return {std::sqrt(ep.eps) * p[0], ep.eps * p[1]};
    }
    /// original -> chart
    std::array<double, 2> to_chart(const std::array<double, 2>& p) const {
        return {p[0] / std::sqrt(ep.eps), p[1] / ep.eps};
    }
};

struct Box {
    double x_half = 1.0;
    double y_half = 2.0;
};

/// sup over an n x n grid on the box of
/// |(1 - eps y)^(1/eps) (y - x^2) - e^{-y}(y - x^2)|,
/// the distance between the rescaled first integral (divided by eps) and its
/// eps -> 0 limit.
double rescaled_integral_residual(const EpsParam& ep, const Box& box = {},
                                  std::size_t n = 81);

}  // namespace darboux
