#pragma once

#include "emw/geometry.hpp"
#include "emw/signals.hpp"

namespace emw {

class ScalarWavelet {
 public:
  ScalarWavelet(BranchCut cut, SourceConfig cfg, DrivingSignal sig);

  const BranchCut& cut() const { return cut_; }
  const SourceConfig& config() const { return cfg_; }
  const DrivingSignal& signal() const { return sig_; }

  cplx tau(double t) const { return {t, -cfg_.b()}; }
  // |sigma| below this raises OnBranchCircle.
  double sigma_guard() const { return 1e-8 * cfg_.a_len(); }

 private:
  BranchCut cut_;
  SourceConfig cfg_;
  DrivingSignal sig_;
};

// g(tau - sigma/c) with derivatives per unit length: dg/c, ddg/c^2.
struct RetardedSignal {
  cplx g;
  cplx dg;
  cplx ddg;
};

RetardedSignal retarded_signal(const DrivingSignal& sig, cplx sigma, cplx tau, double c = 1.0);

// Psi and its first two sigma-derivatives.
struct PsiDerivs {
  cplx psi;
  cplx d1;
  cplx d2;
};

PsiDerivs psi_from_sigma(const DrivingSignal& sig, cplx sigma, cplx tau, double c = 1.0);
// [g(tau - sigma/c) - g(tau + sigma/c)] / sigma, with the sigma = 0 limit -2 dg/c.
cplx interior_psi_from_sigma(const DrivingSignal& sig, cplx sigma, cplx tau, double c = 1.0);

// sigma on the wavelet's branch; OnCut / OnBranchCircle.
cplx branch_sigma(const ScalarWavelet& w, const Vec3& r);

cplx psi(const ScalarWavelet& w, const Vec3& r, double t);
PsiDerivs psi_sigma_derivs(const ScalarWavelet& w, const Vec3& r, double t);
cplx interior_psi(const ScalarWavelet& w, const Vec3& r, double t);

// Throws TooCloseToCut unless r is farther than 4h from the cut.
void require_cut_clearance(const ScalarWavelet& w, const Vec3& r, double h);

// Central-difference box Psi; stencil order 2 or 4.
cplx wave_residual(const ScalarWavelet& w, const Vec3& r, double t, double h, int order = 4);
cplx interior_wave_residual(const ScalarWavelet& w, const Vec3& r, double t, double h, int order = 4);

}  // namespace emw
