#pragma once

#include <cstdint>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "kschan/random.hpp"

namespace kschan {

// A point on the unit sphere S^2. Used for Bloch vectors of pure qubit states,
// for measurement axes and for the ontic state of the Kochen-Specker model.
class UnitVec3 {
 public:
  static constexpr double kNormTolerance = 1e-12;

  // Throws std::invalid_argument unless |x^2 + y^2 + z^2 - 1| <= 1e-12.
  static UnitVec3 from_components(double x, double y, double z);
  // Rescales to unit length. Throws std::invalid_argument on a zero or
  // non-finite input.
  static UnitVec3 normalized(double x, double y, double z);
  // Point with polar cosine `cos_theta` and azimuth `phi` about +z.
  static UnitVec3 from_polar(double cos_theta, double phi);

  static UnitVec3 unit_x() { return UnitVec3(Eigen::Vector3d::UnitX()); }
  static UnitVec3 unit_y() { return UnitVec3(Eigen::Vector3d::UnitY()); }
  static UnitVec3 unit_z() { return UnitVec3(Eigen::Vector3d::UnitZ()); }

  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }
  const Eigen::Vector3d& vec() const noexcept { return v_; }

  double dot(const UnitVec3& other) const noexcept { return v_.dot(other.v_); }
  UnitVec3 operator-() const noexcept { return UnitVec3(-v_); }

  friend bool operator==(const UnitVec3& a, const UnitVec3& b) noexcept {
    return a.v_ == b.v_;
  }

 private:
  explicit UnitVec3(const Eigen::Vector3d& v) : v_(v) {}
  Eigen::Vector3d v_;
};

enum class Outcome : std::uint8_t { kPlus, kMinus };

inline constexpr char outcome_symbol(Outcome o) noexcept {
  return o == Outcome::kPlus ? '+' : '-';
}

// Two-outcome projective qubit measurement; the POVM elements are the
// rank-1 projectors onto +direction and -direction.
struct Measurement {
  UnitVec3 direction;
};

// Born probability <psi|E|psi> = (1 +/- v.m) / 2.
double born_probability(const UnitVec3& state, const Measurement& meas,
                        Outcome outcome = Outcome::kPlus);

// Uniform point on S^2 (Haar measure on pure qubit states): z ~ U[-1, 1],
// azimuth ~ U[0, 2 pi).
UnitVec3 random_unit_vec(Rng& rng);

// Maps `local`, expressed in a frame whose third axis is +z, into the frame
// whose third axis is `pole`. Isometry; unit_z() maps to `pole`.
UnitVec3 rotate_to_frame(const UnitVec3& local, const UnitVec3& pole);

}  // namespace kschan
