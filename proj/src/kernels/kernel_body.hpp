#pragma once

// Lane-generic kernel bodies. Instantiated once with a scalar lane and once with
// an AVX2 lane; both see the same operation sequence, so results agree bitwise.
// Everything here has internal linkage on purpose (see kernel_abi.hpp).

#include <cstddef>

#include "kernel_abi.hpp"

namespace emw::kernels::detail {
namespace {

template <class T>
struct Body {
  using V = typename T::V;
  using Mask = typename T::Mask;
  static constexpr std::size_t W = T::width;

  struct C {
    V re;
    V im;
  };

  static C add(C a, C b) { return {a.re + b.re, a.im + b.im}; }
  static C sub(C a, C b) { return {a.re - b.re, a.im - b.im}; }
  static C mul(C a, C b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
  static C scale(V s, C a) { return {s * a.re, s * a.im}; }
  static C times_i(C a) { return {-a.im, a.re}; }
  static C inv(C a) {
    const V d = a.re * a.re + a.im * a.im;
    return {a.re / d, -a.im / d};
  }
  static C powi(C base, int e) {
    C r{T::set1(1.0), T::set1(0.0)};
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  // Same arithmetic as emw::principal_sqrt.
  static void principal(V wr, V wi, V& p, V& q) {
    const V zero = T::set1(0.0);
    const V half = T::set1(0.5);
    const V two = T::set1(2.0);
    const V m = T::sqrt(wr * wr + wi * wi);
    const V pa = T::sqrt(half * (m + wr));
    const V qa = T::select(T::gt(pa, zero), -wi / (two * pa), zero);
    const V qb_abs = T::sqrt(half * (m - wr));
    const V pb = T::abs(wi) / (two * qb_abs);
    const V qb = T::select(T::le(wi, zero), qb_abs, -qb_abs);
    const Mask use_a = T::ge(wr, zero);
    p = T::select(use_a, pa, pb);
    q = T::select(use_a, qa, qb);
  }

  static void distance_block(const abi::DistanceArgs& g, std::size_t i) {
    const V x = T::load(g.x + i);
    const V y = T::load(g.y + i);
    const V z = T::load(g.z + i);
    const V ax = T::set1(g.ax);
    const V ay = T::set1(g.ay);
    const V az = T::set1(g.az);
    const V wr = (x * x + y * y + z * z) - (ax * ax + ay * ay + az * az);
    const V wi = T::set1(-2.0) * (ax * x + ay * y + az * z);
    V p, q;
    principal(wr, wi, p, q);
    T::store(g.sigma_re + i, p);
    T::store(g.sigma_im + i, -q);
    if (g.grad_p[0] == nullptr) return;
    const V d2 = p * p + q * q;
    const V r[3] = {x, y, z};
    const V a[3] = {ax, ay, az};
    for (int k = 0; k < 3; ++k) {
      T::store(g.grad_p[k] + i, (p * r[k] + q * a[k]) / d2);
      T::store(g.grad_q[k] + i, (p * a[k] - q * r[k]) / d2);
    }
  }

  struct Point {
    C F[3];
    C psi;
  };

  static Point cauchy_point(const abi::CauchyArgs& g, std::size_t i, bool want_field) {
    const V c = T::set1(g.c);
    const C sig{T::load(g.sigma_re + i), T::load(g.sigma_im + i)};
    const C arg{T::load(g.t + i) - sig.re / c, T::set1(-g.b) - sig.im / c};
    const C iv = inv(times_i(arg));
    const C pn = powi(iv, g.order);
    const C pn1 = mul(pn, iv);
    const C pn2 = mul(pn1, iv);
    const C gg = scale(T::set1(g.k0), pn);
    const C s1 = inv(sig);
    Point out;
    out.psi = mul(gg, s1);
    if (!want_field) return out;

    const C k1p = scale(T::set1(g.k1), pn1);
    const V cc = c * c;
    const C dg{k1p.im / c, -k1p.re / c};  // -i k1 pn1, per unit length
    const C ddg{-(T::set1(g.k2) * pn2.re) / cc, -(T::set1(g.k2) * pn2.im) / cc};
    const C s2 = mul(s1, s1);
    const C s3 = mul(s2, s1);
    const C dgs2 = mul(dg, s2);
    const C gs3 = mul(gg, s3);
    const C nn = add(mul(ddg, s1), dgs2);
    const C L = add(add(nn, scale(T::set1(2.0), dgs2)), scale(T::set1(3.0), gs3));
    const C M = add(nn, gs3);
    const C iN = times_i(nn);

    const V pos[3] = {T::load(g.x + i), T::load(g.y + i), T::load(g.z + i)};
    const V av[3] = {T::set1(g.ax), T::set1(g.ay), T::set1(g.az)};
    C u[3];
    C pi[3];
    for (int k = 0; k < 3; ++k) {
      u[k] = mul(C{pos[k], -av[k]}, s1);
      pi[k] = C{T::set1(g.pi_re[k]), T::set1(g.pi_im[k])};
    }
    const C lambda = add(add(mul(u[0], pi[0]), mul(u[1], pi[1])), mul(u[2], pi[2]));
    const C cr[3] = {sub(mul(u[1], pi[2]), mul(u[2], pi[1])), sub(mul(u[2], pi[0]), mul(u[0], pi[2])),
                     sub(mul(u[0], pi[1]), mul(u[1], pi[0]))};
    const C ll = mul(L, lambda);
    for (int k = 0; k < 3; ++k) out.F[k] = sub(sub(mul(ll, u[k]), mul(M, pi[k])), mul(iN, cr[k]));
    return out;
  }

  static void field_block(const abi::CauchyArgs& g, std::size_t i) {
    const Point pt = cauchy_point(g, i, true);
    for (int k = 0; k < 3; ++k) {
      T::store(g.out_re[k] + i, pt.F[k].re);
      T::store(g.out_im[k] + i, pt.F[k].im);
    }
  }

  static void psi_block(const abi::CauchyArgs& g, std::size_t i) {
    const Point pt = cauchy_point(g, i, false);
    T::store(g.out_re[0] + i, pt.psi.re);
    T::store(g.out_im[0] + i, pt.psi.im);
  }

  // Full lanes in place; the tail is padded with copies of the last point so it runs
  // through the identical lane arithmetic.
  static void distance(const abi::DistanceArgs& g) {
    std::size_t i = 0;
    for (; i + W <= g.n; i += W) distance_block(g, i);
    if (i == g.n) return;
    double in[3][W], sr[W], si[W], gp[3][W], gq[3][W];
    const double* src[3] = {g.x, g.y, g.z};
    for (std::size_t l = 0; l < W; ++l) {
      const std::size_t s = i + l < g.n ? i + l : g.n - 1;
      for (int k = 0; k < 3; ++k) in[k][l] = src[k][s];
    }
    abi::DistanceArgs t = g;
    t.x = in[0];
    t.y = in[1];
    t.z = in[2];
    t.n = W;
    t.sigma_re = sr;
    t.sigma_im = si;
    const bool grads = g.grad_p[0] != nullptr;
    for (int k = 0; k < 3; ++k) {
      t.grad_p[k] = grads ? gp[k] : nullptr;
      t.grad_q[k] = grads ? gq[k] : nullptr;
    }
    distance_block(t, 0);
    for (std::size_t l = 0; i + l < g.n; ++l) {
      g.sigma_re[i + l] = sr[l];
      g.sigma_im[i + l] = si[l];
      if (!grads) continue;
      for (int k = 0; k < 3; ++k) {
        g.grad_p[k][i + l] = gp[k][l];
        g.grad_q[k][i + l] = gq[k][l];
      }
    }
  }

  template <class Block>
  static void cauchy(const abi::CauchyArgs& g, Block block, int outputs) {
    std::size_t i = 0;
    for (; i + W <= g.n; i += W) block(g, i);
    if (i == g.n) return;
    double in[6][W], ore[3][W], oim[3][W];
    const double* src[6] = {g.x, g.y, g.z, g.t, g.sigma_re, g.sigma_im};
    for (std::size_t l = 0; l < W; ++l) {
      const std::size_t s = i + l < g.n ? i + l : g.n - 1;
      for (int k = 0; k < 6; ++k) in[k][l] = src[k] ? src[k][s] : 0.0;
    }
    abi::CauchyArgs t = g;
    t.x = in[0];
    t.y = in[1];
    t.z = in[2];
    t.t = in[3];
    t.sigma_re = in[4];
    t.sigma_im = in[5];
    t.n = W;
    for (int k = 0; k < 3; ++k) {
      t.out_re[k] = ore[k];
      t.out_im[k] = oim[k];
    }
    block(t, 0);
    for (std::size_t l = 0; i + l < g.n; ++l) {
      for (int k = 0; k < outputs; ++k) {
        g.out_re[k][i + l] = ore[k][l];
        g.out_im[k][i + l] = oim[k][l];
      }
    }
  }

  static void field(const abi::CauchyArgs& g) { cauchy(g, field_block, 3); }
  static void psi(const abi::CauchyArgs& g) { cauchy(g, psi_block, 1); }
};

}  // namespace
}  // namespace emw::kernels::detail
