#pragma once

#include <array>
#include <cmath>

namespace synchrad {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

/// Unit vector from polar angle (from +z) and azimuth.
inline Vec3 unit_from_angles(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

/// Two real orthonormal polarization vectors transverse to q. The pair is
/// built deterministically: e1 = z x q / |z x q|, e2 = q^ x e1; when q is
/// parallel to z the pair is (x^, q^ x x^), i.e. (x^, y^) for q along +z.
inline std::array<Vec3, 2> transverse_basis(const Vec3& q) {
  const Vec3 qh = normalized(q);
  Vec3 e1 = cross(Vec3{0.0, 0.0, 1.0}, qh);
  const double n1 = norm(e1);
  if (n1 < 1e-12) {
    e1 = {1.0, 0.0, 0.0};
  } else {
    e1 = e1 / n1;
  }
  return {e1, cross(qh, e1)};
}

}  // namespace synchrad
