#include <cstdlib>
#include <string>

#include "emw/error.hpp"
#include "emw/kernels.hpp"
#include "kernel_abi.hpp"

namespace emw::kernels {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void require_size(std::size_t have, std::size_t want, const char* what) {
  if (have != want) throw Error(ErrorCode::InvalidArgument, std::string("kernel span size mismatch: ") + what);
}

abi::CauchyArgs cauchy_args(const CauchyDrive& d, std::size_t n) {
  if (d.n < 1 || d.n > 150) throw Error(ErrorCode::InvalidArgument, "Cauchy order must be in [1, 150]");
  abi::CauchyArgs g{};
  g.order = d.n;
  g.b = d.b;
  g.c = d.c;
  g.k0 = factorial(d.n - 1) / (2.0 * kPi);
  g.k1 = g.k0 * d.n;
  g.k2 = g.k1 * (d.n + 1);
  g.ax = d.a.x;
  g.ay = d.a.y;
  g.az = d.a.z;
  for (int k = 0; k < 3; ++k) {
    g.pi_re[k] = d.pi[k].real();
    g.pi_im[k] = d.pi[k].imag();
  }
  g.n = n;
  return g;
}

}  // namespace

bool avx2_compiled() {
#ifdef EMW_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#if defined(EMW_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") {
    if (!avx2_supported()) throw Error(ErrorCode::InvalidArgument, "avx2 kernels unavailable on this machine");
    return Isa::Avx2;
  }
  if (name == "auto" || name.empty()) return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel ISA '" + std::string(name) + "'");
}

Isa default_isa() {
  const char* env = std::getenv("EMW_SIMD");
  return parse_isa(env ? std::string_view(env) : std::string_view("auto"));
}

void principal_distance(Isa isa, const Vec3& a, const Points& pts, const DistanceOut& out) {
  const std::size_t n = pts.x.size();
  require_size(pts.y.size(), n, "y");
  require_size(pts.z.size(), n, "z");
  require_size(out.sigma_re.size(), n, "sigma_re");
  require_size(out.sigma_im.size(), n, "sigma_im");
  const bool grads = !out.grad_p[0].empty();
  abi::DistanceArgs g{a.x, a.y, a.z, pts.x.data(), pts.y.data(), pts.z.data(), n,
                      out.sigma_re.data(), out.sigma_im.data(), {}, {}};
  for (int k = 0; k < 3; ++k) {
    if (grads) {
      require_size(out.grad_p[k].size(), n, "grad_p");
      require_size(out.grad_q[k].size(), n, "grad_q");
      g.grad_p[k] = out.grad_p[k].data();
      g.grad_q[k] = out.grad_q[k].data();
    } else {
      g.grad_p[k] = nullptr;
      g.grad_q[k] = nullptr;
    }
  }
  if (n == 0) return;
  if (isa == Isa::Avx2 && avx2_supported()) {
#ifdef EMW_HAVE_AVX2
    abi::distance_avx2(g);
    return;
#endif
  }
  abi::distance_scalar(g);
}

void cauchy_field(Isa isa, const CauchyDrive& drive, const Points& pts, std::span<const double> t,
                  std::span<const double> sigma_re, std::span<const double> sigma_im, const FieldOut& out) {
  const std::size_t n = pts.x.size();
  require_size(pts.y.size(), n, "y");
  require_size(pts.z.size(), n, "z");
  require_size(t.size(), n, "t");
  require_size(sigma_re.size(), n, "sigma_re");
  require_size(sigma_im.size(), n, "sigma_im");
  abi::CauchyArgs g = cauchy_args(drive, n);
  g.x = pts.x.data();
  g.y = pts.y.data();
  g.z = pts.z.data();
  g.t = t.data();
  g.sigma_re = sigma_re.data();
  g.sigma_im = sigma_im.data();
  for (int k = 0; k < 3; ++k) {
    require_size(out.re[k].size(), n, "field re");
    require_size(out.im[k].size(), n, "field im");
    g.out_re[k] = out.re[k].data();
    g.out_im[k] = out.im[k].data();
  }
  if (n == 0) return;
  if (isa == Isa::Avx2 && avx2_supported()) {
#ifdef EMW_HAVE_AVX2
    abi::field_avx2(g);
    return;
#endif
  }
  abi::field_scalar(g);
}

void cauchy_psi(Isa isa, const CauchyDrive& drive, std::span<const double> t, std::span<const double> sigma_re,
                std::span<const double> sigma_im, std::span<double> psi_re, std::span<double> psi_im) {
  const std::size_t n = t.size();
  require_size(sigma_re.size(), n, "sigma_re");
  require_size(sigma_im.size(), n, "sigma_im");
  require_size(psi_re.size(), n, "psi_re");
  require_size(psi_im.size(), n, "psi_im");
  abi::CauchyArgs g = cauchy_args(drive, n);
  g.t = t.data();
  g.sigma_re = sigma_re.data();
  g.sigma_im = sigma_im.data();
  g.out_re[0] = psi_re.data();
  g.out_im[0] = psi_im.data();
  if (n == 0) return;
  if (isa == Isa::Avx2 && avx2_supported()) {
#ifdef EMW_HAVE_AVX2
    abi::psi_avx2(g);
    return;
#endif
  }
  abi::psi_scalar(g);
}

}  // namespace emw::kernels
