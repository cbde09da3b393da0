#pragma once

#include <cmath>
#include <complex>

namespace emw {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a = a + b; return a; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { a = a - b; return a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

struct CVec3 {
  cplx x{};
  cplx y{};
  cplx z{};

  CVec3() = default;
  CVec3(cplx x_, cplx y_, cplx z_) : x(x_), y(y_), z(z_) {}
  CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}  // NOLINT: real vectors embed implicitly

  static CVec3 from_parts(const Vec3& re, const Vec3& im) {
    return {cplx(re.x, im.x), cplx(re.y, im.y), cplx(re.z, im.z)};
  }

  cplx& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const cplx& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 real() const { return {x.real(), y.real(), z.real()}; }
  Vec3 imag() const { return {x.imag(), y.imag(), z.imag()}; }
};

inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline CVec3 operator-(const CVec3& a, const CVec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline CVec3 operator-(const CVec3& a) { return {-a.x, -a.y, -a.z}; }
inline CVec3 operator*(cplx s, const CVec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline CVec3 operator*(const CVec3& a, cplx s) { return s * a; }
inline CVec3 operator*(double s, const CVec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline CVec3 operator*(const CVec3& a, double s) { return s * a; }
inline CVec3 operator/(const CVec3& a, cplx s) { return {a.x / s, a.y / s, a.z / s}; }
inline CVec3 operator/(const CVec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline CVec3& operator+=(CVec3& a, const CVec3& b) { a = a + b; return a; }
inline CVec3& operator-=(CVec3& a, const CVec3& b) { a = a - b; return a; }

// Bilinear (not Hermitian) products.
inline cplx dot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline CVec3 conj(const CVec3& a) { return {std::conj(a.x), std::conj(a.y), std::conj(a.z)}; }
inline double norm2(const CVec3& a) { return std::norm(a.x) + std::norm(a.y) + std::norm(a.z); }
inline double norm(const CVec3& a) { return std::sqrt(norm2(a)); }
inline bool is_finite(const CVec3& a) { return is_finite(a.real()) && is_finite(a.imag()); }

}  // namespace emw
