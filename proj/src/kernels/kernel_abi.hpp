#pragma once

// Plain-data interface between the dispatcher and the per-ISA translation units.
// The AVX2 unit includes nothing else from the library, so no inline function
// compiled for AVX2 can leak into code that runs on older CPUs.

#include <cstddef>

namespace emw::kernels::abi {

struct DistanceArgs {
  double ax, ay, az;
  const double* x;
  const double* y;
  const double* z;
  std::size_t n;
  double* sigma_re;
  double* sigma_im;
  double* grad_p[3];  // all null to skip gradients
  double* grad_q[3];
};

struct CauchyArgs {
  int order;
  double b;
  double c;
  double k0, k1, k2;  // (n-1)!/(2 pi), n!/(2 pi), (n+1)!/(2 pi)
  double ax, ay, az;
  double pi_re[3];
  double pi_im[3];
  const double* x;
  const double* y;
  const double* z;
  const double* t;
  const double* sigma_re;
  const double* sigma_im;
  std::size_t n;
  double* out_re[3];  // field components, or psi in out_re[0] / out_im[0]
  double* out_im[3];
};

void distance_scalar(const DistanceArgs& args);
void field_scalar(const CauchyArgs& args);
void psi_scalar(const CauchyArgs& args);

void distance_avx2(const DistanceArgs& args);
void field_avx2(const CauchyArgs& args);
void psi_avx2(const CauchyArgs& args);

}  // namespace emw::kernels::abi
