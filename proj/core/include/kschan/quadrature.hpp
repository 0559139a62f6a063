#pragma once

#include <functional>
#include <span>

#include "kschan/bloch.hpp"

namespace kschan::quadrature {

inline constexpr int kPolarNodes = 128;     // Gauss-Legendre nodes per z segment
inline constexpr int kAzimuthNodes = 256;   // trapezoid nodes over [0, 2 pi)

// Gauss-Legendre integral of f over [lo, hi] after the substitution
// z = lo + (hi - lo)(3w^2 - 2w^3). The map has zero slope at both ends, which
// tames sqrt and log endpoint singularities.
double integrate_segment(const std::function<double(double)>& f, double lo,
                         double hi);

// Sum of integrate_segment over consecutive pairs of `breaks`.
double integrate_piecewise(const std::function<double(double)>& f,
                           std::span<const double> breaks);

// Integral of f over S^2 with respect to solid angle, in the frame whose
// polar axis is `pole`. The polar coordinate z = pole.x is split at `z_breaks`
// (must start at -1 and end at 1); the azimuth uses the periodic trapezoid
// rule. Accurate when f is smooth on each z band.
double integrate_sphere(const std::function<double(const UnitVec3&)>& f,
                        const UnitVec3& pole, std::span<const double> z_breaks);

// Integral of density(x) * indicator(x) over S^2 where indicator is a 0/1
// function with piecewise-constant dependence on azimuth along each ring.
// On every ring the indicator's switch points are located by bisection and
// density is integrated over the accepted arcs only.
double integrate_sphere_indicator(
    const std::function<double(const UnitVec3&)>& density,
    const std::function<bool(const UnitVec3&)>& indicator, const UnitVec3& pole,
    std::span<const double> z_breaks);

}  // namespace kschan::quadrature
