#include "kschan/bloch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kschan {

UnitVec3 UnitVec3::from_components(double x, double y, double z) {
  const double n2 = x * x + y * y + z * z;
  if (!(std::abs(n2 - 1.0) <= kNormTolerance)) {
    throw std::invalid_argument("UnitVec3: squared norm " + std::to_string(n2) +
                                " is not 1");
  }
  return UnitVec3(Eigen::Vector3d(x, y, z));
}

UnitVec3 UnitVec3::normalized(double x, double y, double z) {
  const Eigen::Vector3d v(x, y, z);
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("UnitVec3: cannot normalize a zero-length vector");
  }
  return UnitVec3(v / n);
}

UnitVec3 UnitVec3::from_polar(double cos_theta, double phi) {
  if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) {
    throw std::invalid_argument("UnitVec3: polar cosine outside [-1, 1]");
  }
  const double r = std::sqrt((1.0 - cos_theta) * (1.0 + cos_theta));
  return UnitVec3(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), cos_theta));
}

double born_probability(const UnitVec3& state, const Measurement& meas,
                        Outcome outcome) {
  const double c = state.dot(meas.direction);
  const double p_plus = 0.5 * (1.0 + c);
  return outcome == Outcome::kPlus ? p_plus : 0.5 * (1.0 - c);
}

UnitVec3 random_unit_vec(Rng& rng) {
  const double z = 1.0 - 2.0 * uniform01(rng);
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  return UnitVec3::from_polar(z, phi);
}

UnitVec3 rotate_to_frame(const UnitVec3& local, const UnitVec3& pole) {
  // Orthonormal triad (e1, e2, pole); switch reference axis near the z poles
  // where z x pole degenerates. With y as reference, pole = +z gives the
  // identity frame.
  const Eigen::Vector3d& n = pole.vec();
  const Eigen::Vector3d ref = std::abs(n.z()) > 1.0 - 1e-9
                                  ? Eigen::Vector3d::UnitY()
                                  : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d e1 = ref.cross(n).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  const Eigen::Vector3d out = local.x() * e1 + local.y() * e2 + local.z() * n;
  return UnitVec3::from_components(out.x(), out.y(), out.z());
}

}  // namespace kschan
