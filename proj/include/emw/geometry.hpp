#pragma once

#include <functional>
#include <memory>

#include "emw/vec.hpp"

namespace emw {

// Complex source point i(a, b): imaginary displacement a, imaginary time b.
class SourceConfig {
 public:
  SourceConfig(const Vec3& a, double b, double c = 1.0);

  const Vec3& a() const { return a_; }
  double a_len() const { return a_len_; }
  const Vec3& axis() const { return axis_; }
  double b() const { return b_; }
  double c() const { return c_; }

  // Orthonormal basis of the plane orthogonal to a; phi is measured from e1 toward e2.
  const Vec3& e1() const { return e1_; }
  const Vec3& e2() const { return e2_; }

  SourceConfig with_b(double b) const { return SourceConfig(a_, b, c_); }

 private:
  Vec3 a_;
  double a_len_;
  Vec3 axis_;
  double b_;
  double c_;
  Vec3 e1_;
  Vec3 e2_;
};

struct Cylindrical {
  double rho;
  double phi;  // [0, 2 pi)
  double z;    // along a_hat
};

Cylindrical to_cylindrical(const Vec3& r, const SourceConfig& cfg);
Vec3 from_cylindrical(const Cylindrical& c, const SourceConfig& cfg);
Vec3 e_rho(double phi, const SourceConfig& cfg);
Vec3 e_phi(double phi, const SourceConfig& cfg);

struct PrincipalDistance {
  cplx sigma;
  double p;
  double q;
  bool on_reference_cut;  // p == 0 with a^2 > rho^2: the z -> 0+ face value was returned
};

// sqrt(w) = p - i q with p >= 0; for w on the negative real axis q >= 0.
// Shared with the batch kernels so both produce the same roundoff.
inline void principal_sqrt(double wr, double wi, double& p, double& q) {
  const double m = std::sqrt(wr * wr + wi * wi);
  if (wr >= 0.0) {
    p = std::sqrt(0.5 * (m + wr));
    q = p > 0.0 ? -wi / (2.0 * p) : 0.0;
  } else {
    const double qa = std::sqrt(0.5 * (m - wr));
    p = std::fabs(wi) / (2.0 * qa);
    q = wi <= 0.0 ? qa : -qa;
  }
}

PrincipalDistance complex_distance_principal(const Vec3& r, const SourceConfig& cfg);

struct OblateCoords {
  double p;
  double q;
  double phi;
};

enum class Side { Upper, Lower };

OblateCoords to_oblate(const Vec3& r, const SourceConfig& cfg);
Vec3 from_oblate(const OblateCoords& oc, const SourceConfig& cfg, Side side);

// Point on the spheroid p = alpha; the sign of q picks the hemisphere.
Vec3 spheroid_point(double alpha, double q, double phi, const SourceConfig& cfg);

enum class CutKind { FlatDisk, UpperSpheroid, LowerSpheroid, SmoothSpheroid, Custom };

double smooth_cut_function(double q, double alpha, double eps);

class BranchCut {
 public:
  using CutFunction = std::function<double(double q, double phi)>;

  static constexpr double kDefaultTolerance = 1e-9;

  static BranchCut flat_disk();
  static BranchCut upper_spheroid(double alpha);
  static BranchCut lower_spheroid(double alpha);
  static BranchCut smooth_spheroid(double alpha, double eps);
  // chi must be odd in q and 2 pi periodic in phi; checked on a grid over |q| <= a_len.
  static BranchCut custom(CutFunction chi, double a_len);

  CutKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return eps_; }

  // OnCut threshold as a fraction of |a|.
  double tolerance() const { return tol_; }
  BranchCut with_tolerance(double rel) const;

  // p-value of the cut at (q, phi); the flat disk is chi = 0.
  double cut_function(double q, double phi) const;

 private:
  BranchCut(CutKind kind, double alpha, double eps, std::shared_ptr<const CutFunction> chi);

  CutKind kind_;
  double alpha_;
  double eps_;
  double tol_ = kDefaultTolerance;
  std::shared_ptr<const CutFunction> chi_;
};

// Euclidean distance from r to the cut membrane (including the rim circle).
double cut_distance(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg);

// +1 in the exterior region, -1 where the cut's sheet differs from the flat-disk sheet.
int cut_sign(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg);

struct ContinuationOptions {
  double anchor_distance = 1e3;  // in units of |a|, along a_hat
  double step_fraction = 0.1;
  long max_steps = 2'000'000;
};

// Sign by continuing sigma along the segment from the far-zone anchor and counting
// crossings of p = chi(q). Used for Custom cuts; works for every kind.
int cut_sign_by_continuation(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg,
                             const ContinuationOptions& opts = {});

cplx complex_distance(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg);

struct ComplexDistanceSample {
  cplx sigma;
  double p;
  double q;
  double phi;
  Vec3 grad_p;
  Vec3 grad_q;
  CVec3 u;
  Vec3 e_p;
  Vec3 e_q;  // zero on the symmetry axis where it is undefined
};

// Frame of the principal branch.
ComplexDistanceSample frame(const Vec3& r, const SourceConfig& cfg);

// Frame on the branch selected by the cut: sigma and u flip together.
ComplexDistanceSample frame(const BranchCut& cut, const Vec3& r, const SourceConfig& cfg);

}  // namespace emw
