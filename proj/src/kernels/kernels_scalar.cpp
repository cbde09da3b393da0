#include <cmath>

#include "kernel_body.hpp"

namespace emw::kernels::abi {

namespace {

struct ScalarLane {
  using V = double;
  using Mask = bool;
  static constexpr std::size_t width = 1;

  static V set1(double v) { return v; }
  static V load(const double* p) { return *p; }
  static void store(double* p, V v) { *p = v; }
  static V sqrt(V v) { return std::sqrt(v); }
  static V abs(V v) { return std::fabs(v); }
  static Mask gt(V a, V b) { return a > b; }
  static Mask ge(V a, V b) { return a >= b; }
  static Mask le(V a, V b) { return a <= b; }
  static V select(Mask m, V a, V b) { return m ? a : b; }
};

using Impl = detail::Body<ScalarLane>;

}  // namespace

void distance_scalar(const DistanceArgs& args) { Impl::distance(args); }
void field_scalar(const CauchyArgs& args) { Impl::field(args); }
void psi_scalar(const CauchyArgs& args) { Impl::psi(args); }

}  // namespace emw::kernels::abi
