#pragma once

// Central-difference operators on functions sampled at lattice offsets around (r, t).
// Field functions have the signature T f(const Vec3& r, double t); axis 3 is time.

#include <cmath>

#include "emw/error.hpp"
#include "emw/vec.hpp"

namespace emw::fd {

inline void check_stencil(double h, int order) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "stencil step must be positive");
  if (order != 2 && order != 4) throw Error(ErrorCode::InvalidArgument, "stencil order must be 2 or 4");
}

template <class F>
auto derivative(F&& f, double x, double h, int order = 4) {
  check_stencil(h, order);
  if (order == 2) return (1.0 / (2.0 * h)) * (f(x + h) - f(x - h));
  return (1.0 / (12.0 * h)) * ((8.0 * (f(x + h) - f(x - h))) - (f(x + 2.0 * h) - f(x - 2.0 * h)));
}

template <class F>
auto second_derivative(F&& f, double x, double h, int order = 4) {
  check_stencil(h, order);
  if (order == 2) return (1.0 / (h * h)) * ((f(x + h) + f(x - h)) - 2.0 * f(x));
  return (1.0 / (12.0 * h * h)) *
         ((16.0 * (f(x + h) + f(x - h))) - (f(x + 2.0 * h) + f(x - 2.0 * h)) - 30.0 * f(x));
}

inline Vec3 shifted(const Vec3& r, int axis, double d) {
  Vec3 out = r;
  out[axis] += d;
  return out;
}

template <class F>
auto partial(F&& f, const Vec3& r, double t, int axis, double h, int order = 4) {
  if (axis == 3) return derivative([&](double s) { return f(r, s); }, t, h, order);
  return derivative([&](double s) { return f(shifted(r, axis, s), t); }, 0.0, h, order);
}

template <class F>
auto partial2(F&& f, const Vec3& r, double t, int axis, double h, int order = 4) {
  if (axis == 3) return second_derivative([&](double s) { return f(r, s); }, t, h, order);
  return second_derivative([&](double s) { return f(shifted(r, axis, s), t); }, 0.0, h, order);
}

// d^2 f / d x_i d x_j for i != j as a product of 1-D stencils.
template <class F>
auto partial_mixed(F&& f, const Vec3& r, double t, int i, int j, double h, int order = 4) {
  auto inner = [&](double si) {
    if (i == 3) return partial(f, r, t + si, j, h, order);
    return partial(f, shifted(r, i, si), t, j, h, order);
  };
  return derivative(inner, 0.0, h, order);
}

template <class F>
CVec3 gradient(F&& f, const Vec3& r, double t, double h, int order = 4) {
  return {partial(f, r, t, 0, h, order), partial(f, r, t, 1, h, order), partial(f, r, t, 2, h, order)};
}

template <class F>
cplx divergence(F&& f, const Vec3& r, double t, double h, int order = 4) {
  cplx sum{};
  for (int k = 0; k < 3; ++k) {
    sum += partial([&](const Vec3& p, double s) { return cplx(f(p, s)[k]); }, r, t, k, h, order);
  }
  return sum;
}

template <class F>
CVec3 curl(F&& f, const Vec3& r, double t, double h, int order = 4) {
  auto comp = [&](int c, int axis) {
    return partial([&](const Vec3& p, double s) { return cplx(f(p, s)[c]); }, r, t, axis, h, order);
  };
  return {comp(2, 1) - comp(1, 2), comp(0, 2) - comp(2, 0), comp(1, 0) - comp(0, 1)};
}

template <class F>
auto laplacian(F&& f, const Vec3& r, double t, double h, int order = 4) {
  return partial2(f, r, t, 0, h, order) + partial2(f, r, t, 1, h, order) + partial2(f, r, t, 2, h, order);
}

template <class F>
auto d_dt(F&& f, const Vec3& r, double t, double h, int order = 4) {
  return partial(f, r, t, 3, h, order);
}

// (1/c^2) d_t^2 f - laplacian f
template <class F>
auto wave_operator(F&& f, const Vec3& r, double t, double h, int order = 4, double c = 1.0) {
  return (1.0 / (c * c)) * partial2(f, r, t, 3, h / c, order) - laplacian(f, r, t, h, order);
}

// Combine estimates at steps h and h/2 with leading error h^order.
template <class T>
T richardson(const T& coarse, const T& fine, int order) {
  const double w = std::ldexp(1.0, order);
  return (1.0 / (w - 1.0)) * (w * fine - coarse);
}

inline double convergence_order(double err_coarse, double err_fine, double ratio = 2.0) {
  return std::log(err_coarse / err_fine) / std::log(ratio);
}

}  // namespace emw::fd
