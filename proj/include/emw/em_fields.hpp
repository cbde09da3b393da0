#pragma once

#include "emw/geometry.hpp"
#include "emw/scalar_wavelet.hpp"
#include "emw/signals.hpp"

namespace emw {

class Polarization {
 public:
  // By default the component along a is projected out; keep_parallel retains it.
  Polarization(const CVec3& pi, const SourceConfig& cfg, bool keep_parallel = false);

  const CVec3& vector() const { return pi_; }
  // Norm of the component along a that was removed (zero when kept or absent).
  double removed_parallel() const { return removed_; }

 private:
  CVec3 pi_;
  double removed_ = 0.0;
};

struct LMN {
  cplx L;
  cplx M;
  cplx N;
};

LMN lmn(const DrivingSignal& sig, cplx sigma, cplx tau, double c = 1.0);

// F = L lambda u - M pi - i N u x pi with lambda = u . pi, u = z / sigma on the branch of sigma.
CVec3 field_from_sigma(const DrivingSignal& sig, cplx sigma, const CVec3& u, cplx tau, const CVec3& pi,
                       double c = 1.0);

struct EMFieldSample {
  Vec3 position;
  double time;
  CVec3 F;

  Vec3 D() const { return F.real(); }
  Vec3 B() const { return F.imag(); }
};

EMFieldSample field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t);

// curl curl Z + (i/c) d_t curl Z for Z = Psi pi, from central differences of Psi only.
CVec3 field_curl_oracle(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double h,
                        int order = 4);

struct FourPotential {
  double A0;
  Vec3 A;
};

// A0 = -div Z_e, A = (1/c) d_t Z_e + curl Z_m, by central differences of Z = Psi pi.
FourPotential four_potential(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double h,
                             int order = 4);
// Same potentials in closed form: A0 = -Re(Psi' lambda), A = Re(dPsi/dt pi)/c + Im(Psi' u x pi).
FourPotential four_potential_exact(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t);
// |(1/c) d_t A0 + div A| with central differences of the closed-form potentials.
double lorenz_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double h,
                       int order = 2);

struct MaxwellResidual {
  cplx divergence;       // div F
  CVec3 curl_equation;   // (1/c) d_t F + i curl F
};

MaxwellResidual maxwell_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t,
                                 double h, int order = 4);

// F(sigma) + F(-sigma): even in sigma, so single-valued.
CVec3 interior_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t);
MaxwellResidual interior_maxwell_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r,
                                          double t, double h, int order = 4);

// Field of the spheroid p = alpha of the wavelet's cut: 2F outside, nu (F(sigma) + F(-sigma)) inside.
CVec3 joint_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double mu = 1.0,
                  double nu = 1.0);

// Far-zone asymptotic -(ddg/r)(pi_perp + i e_r x pi_perp).
CVec3 far_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t);
// |i e_r x F - F| / |F| on the exact field.
double helicity_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t);

struct PoyntingEnergy {
  double energy;      // |F|^2 / 2
  Vec3 S;             // energy * e_r
  Vec3 S_cross;       // (1/2i) F* x F
  double mismatch;    // |S - S_cross| / energy
  bool consistent;    // mismatch below the tolerance
};

PoyntingEnergy poynting_energy_far(const CVec3& F, const Vec3& e_r, double tol = 1e-2);

}  // namespace emw
