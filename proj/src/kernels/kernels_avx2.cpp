// Compiled with -mavx2 only (no FMA) so lane arithmetic matches the scalar unit.

#include <immintrin.h>

#include "kernel_body.hpp"

namespace emw::kernels::abi {

namespace {

struct Avx2Lane {
  using V = __m256d;
  using Mask = __m256d;
  static constexpr std::size_t width = 4;

  static V set1(double v) { return _mm256_set1_pd(v); }
  static V load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, V v) { _mm256_storeu_pd(p, v); }
  static V sqrt(V v) { return _mm256_sqrt_pd(v); }
  static V abs(V v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }
  static Mask gt(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
  static Mask ge(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_GE_OQ); }
  static Mask le(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
  static V select(Mask m, V a, V b) { return _mm256_blendv_pd(b, a, m); }
};

using Impl = detail::Body<Avx2Lane>;

}  // namespace

void distance_avx2(const DistanceArgs& args) { Impl::distance(args); }
void field_avx2(const CauchyArgs& args) { Impl::field(args); }
void psi_avx2(const CauchyArgs& args) { Impl::psi(args); }

}  // namespace emw::kernels::abi
