#pragma once

// Batch kernels for the hot grid paths, with a scalar reference and an AVX2 variant.

#include <array>
#include <span>
#include <string_view>

#include "emw/vec.hpp"

namespace emw::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_compiled();
bool avx2_supported();
// Best supported ISA unless EMW_SIMD=scalar|avx2|auto says otherwise.
Isa default_isa();
std::string_view isa_name(Isa isa);
// Throws InvalidArgument for unknown names or an ISA this machine cannot run.
Isa parse_isa(std::string_view name);

struct Points {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;
};

// Principal sigma = p - i q; gradient outputs may be empty spans.
struct DistanceOut {
  std::span<double> sigma_re;
  std::span<double> sigma_im;
  std::array<std::span<double>, 3> grad_p;
  std::array<std::span<double>, 3> grad_q;
};

void principal_distance(Isa isa, const Vec3& a, const Points& pts, const DistanceOut& out);

struct CauchyDrive {
  int n;
  double b;
  double c;
  Vec3 a;
  CVec3 pi;
};

struct FieldOut {
  std::array<std::span<double>, 3> re;
  std::array<std::span<double>, 3> im;
};

// F at (x, y, z, t) for the C_n drive, given sigma already on the wanted branch.
void cauchy_field(Isa isa, const CauchyDrive& drive, const Points& pts, std::span<const double> t,
                  std::span<const double> sigma_re, std::span<const double> sigma_im, const FieldOut& out);
void cauchy_psi(Isa isa, const CauchyDrive& drive, std::span<const double> t, std::span<const double> sigma_re,
                std::span<const double> sigma_im, std::span<double> psi_re, std::span<double> psi_im);

}  // namespace emw::kernels
