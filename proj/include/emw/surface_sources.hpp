#pragma once

#include <optional>

#include "emw/em_fields.hpp"
#include "emw/geometry.hpp"
#include "emw/scalar_wavelet.hpp"

namespace emw {

// Jump coefficients built from the mixed signals g+- (see mixed_signals).
struct TildeLMN {
  cplx L;
  cplx M;
  cplx N;
};

TildeLMN tilde_lmn(const DrivingSignal& sig, cplx sigma, cplx tau, double c = 1.0);
// Closed form of tilde_lmn for the C_1 drive (c = 1).
TildeLMN impulse_tilde_lmn(cplx sigma, cplx tau);

struct SurfaceOptions {
  std::optional<double> q_min;  // rim band |q| < q_min raises NearRim; default 0 exact, 0.1a approximate
  double mu = 1.0;
  double nu = 1.0;
};

// Point (q, phi) of the spheroid p = alpha with its reference-branch frame.
struct SurfacePoint {
  Vec3 position;
  double q;
  double phi;
  cplx sigma;  // alpha - i q
  CVec3 u;
  Vec3 e_p;
};

SurfacePoint surface_point(const SourceConfig& cfg, double alpha, double q, double phi);

struct SurfaceSourceSample {
  Vec3 position;
  double q;
  double phi;
  cplx j0;
  CVec3 j;

  double electric_charge() const { return j0.real(); }
  double magnetic_charge() const { return j0.imag(); }
  Vec3 electric_current() const { return j.real(); }
  Vec3 magnetic_current() const { return j.imag(); }
};

// mu F(sigma) - nu F(-sigma) on S_alpha; the mu = nu = 1 case uses the tilde coefficients.
CVec3 field_jump(const ScalarWavelet& w, const Polarization& pol, double q, double phi, double alpha, double t,
                 const SurfaceOptions& opts = {});

// j0 = e_p . dF, j = -i c e_p x dF
SurfaceSourceSample sources_from_jump(const SurfacePoint& sp, const CVec3& jump, double c);

SurfaceSourceSample surface_sources_exact(const ScalarWavelet& w, const Polarization& pol, double q, double phi,
                                          double alpha, double t, const SurfaceOptions& opts = {});
// Flat-spheroid approximation (alpha << a) in terms of pi_rho, pi_phi.
SurfaceSourceSample surface_sources_approx(const ScalarWavelet& w, const Polarization& pol, double q, double phi,
                                           double alpha, double t, const SurfaceOptions& opts = {});
// Exact sources for the C_1 drive from the closed-form coefficients (c = 1).
SurfaceSourceSample impulse_sources(const SourceConfig& cfg, const Polarization& pol, double q, double phi,
                                    double alpha, double t, const SurfaceOptions& opts = {});

struct BandpassResponse {
  SurfaceSourceSample direct;        // C_n drive
  SurfaceSourceSample from_impulse;  // (-d/db)^(n-1) of the impulse response
  double relative_gap;
};

BandpassResponse bandpass_response(int n, const SourceConfig& cfg, const Polarization& pol, double q, double phi,
                                   double alpha, double t, const SurfaceOptions& opts = {});

// (r - i a) / (4 pi sigma^3) on the flat-disk branch.
CVec3 coulomb_field(const Vec3& r, const Vec3& a);

struct CoulombDiskSources {
  double j0;
  double j_phi;             // along e_phi
  double velocity;          // c rho / a
  double angular_velocity;  // c / a
};

CoulombDiskSources coulomb_disk_sources(double rho, double a, double c = 1.0);
// Exact sources of the Coulomb field on S_alpha (jump 2C(sigma)).
SurfaceSourceSample coulomb_surface_sources(const SourceConfig& cfg, double q, double phi, double alpha);
// Total disk charge inside rho_max from the closed-form density.
double coulomb_disk_charge(double rho_max, double a);

struct EffectiveAperture {
  double q_min;
  double rho_max;
};

EffectiveAperture effective_aperture(double omega, double a, double c = 1.0);

}  // namespace emw
