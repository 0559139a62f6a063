#include "kschan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace kschan::quadrature {
namespace {

using Polar = boost::math::quadrature::gauss<double, kPolarNodes>;
using ArcRule = boost::math::quadrature::gauss<double, 64>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRingScan = 1024;
constexpr int kBisections = 64;

void check_breaks(std::span<const double> breaks) {
  if (breaks.size() < 2) {
    throw std::invalid_argument("quadrature: need at least two z breaks");
  }
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (breaks[i] < -1.0 || breaks[i] > 1.0 ||
        (i > 0 && breaks[i] < breaks[i - 1])) {
      throw std::invalid_argument("quadrature: z breaks must be sorted in [-1, 1]");
    }
  }
}

UnitVec3 ring_point(double z, double phi, const UnitVec3& pole) {
  return rotate_to_frame(UnitVec3::from_polar(std::clamp(z, -1.0, 1.0), phi), pole);
}

double ring_trapezoid(const std::function<double(const UnitVec3&)>& f, double z,
                      const UnitVec3& pole) {
  double sum = 0.0;
  for (int k = 0; k < kAzimuthNodes; ++k) {
    sum += f(ring_point(z, kTwoPi * k / kAzimuthNodes, pole));
  }
  return sum * kTwoPi / kAzimuthNodes;
}

// Integral over one ring of density restricted to the azimuths where the
// indicator holds.
double ring_indicator(const std::function<double(const UnitVec3&)>& density,
                      const std::function<bool(const UnitVec3&)>& indicator,
                      double z, const UnitVec3& pole) {
  const double step = kTwoPi / kRingScan;
  std::vector<char> inside(kRingScan);
  for (int k = 0; k < kRingScan; ++k) {
    inside[k] = indicator(ring_point(z, step * k, pole)) ? 1 : 0;
  }

  // Switch angles, refined by bisection; `rising` records the state after.
  struct Switch {
    double phi;
    bool rising;
  };
  std::vector<Switch> switches;
  for (int k = 0; k < kRingScan; ++k) {
    const int next = (k + 1) % kRingScan;
    if (inside[k] == inside[next]) continue;
    double lo = step * k;
    double hi = step * (k + 1);
    for (int it = 0; it < kBisections && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool in_mid = indicator(ring_point(z, mid, pole));
      if ((in_mid ? 1 : 0) == inside[k]) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    switches.push_back({0.5 * (lo + hi), inside[next] != 0});
  }

  if (switches.empty()) {
    return inside[0] ? ring_trapezoid(density, z, pole) : 0.0;
  }

  const auto along_ring = [&](double phi) { return density(ring_point(z, phi, pole)); };
  double total = 0.0;
  for (std::size_t j = 0; j < switches.size(); ++j) {
    if (!switches[j].rising) continue;
    const double begin = switches[j].phi;
    double end = switches[(j + 1) % switches.size()].phi;
    if (end <= begin) end += kTwoPi;
    total += ArcRule::integrate(along_ring, begin, end);
  }
  return total;
}

}  // namespace

double integrate_segment(const std::function<double(double)>& f, double lo,
                         double hi) {
  if (hi <= lo) return 0.0;
  const double width = hi - lo;
  const auto mapped = [&](double w) {
    const double z = lo + width * w * w * (3.0 - 2.0 * w);
    const double jacobian = 6.0 * width * w * (1.0 - w);
    return jacobian == 0.0 ? 0.0 : f(z) * jacobian;
  };
  return Polar::integrate(mapped, 0.0, 1.0);
}

double integrate_piecewise(const std::function<double(double)>& f,
                           std::span<const double> breaks) {
  check_breaks(breaks);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += integrate_segment(f, breaks[i], breaks[i + 1]);
  }
  return total;
}

double integrate_sphere(const std::function<double(const UnitVec3&)>& f,
                        const UnitVec3& pole, std::span<const double> z_breaks) {
  return integrate_piecewise(
      [&](double z) { return ring_trapezoid(f, z, pole); }, z_breaks);
}

double integrate_sphere_indicator(
    const std::function<double(const UnitVec3&)>& density,
    const std::function<bool(const UnitVec3&)>& indicator, const UnitVec3& pole,
    std::span<const double> z_breaks) {
  return integrate_piecewise(
      [&](double z) { return ring_indicator(density, indicator, z, pole); },
      z_breaks);
}

}  // namespace kschan::quadrature
