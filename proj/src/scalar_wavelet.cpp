#include "emw/scalar_wavelet.hpp"

#include <string>

#include "emw/error.hpp"
#include "emw/fd_ops.hpp"

namespace emw {

ScalarWavelet::ScalarWavelet(BranchCut cut, SourceConfig cfg, DrivingSignal sig)
    : cut_(std::move(cut)), cfg_(std::move(cfg)), sig_(std::move(sig)) {
  const double window = sig_.min_imaginary_time();
  if (std::fabs(cfg_.b()) - cfg_.a_len() / cfg_.c() < window) {
    throw Error(ErrorCode::OutsideQuadratureWindow,
                "|b| - a/c is below the sampled signal's quadrature window " + std::to_string(window));
  }
}

RetardedSignal retarded_signal(const DrivingSignal& sig, cplx sigma, cplx tau, double c) {
  const SignalDerivs d = sig.eval(tau - sigma / c);
  return {d.g, d.dg / c, d.ddg / (c * c)};
}

PsiDerivs psi_from_sigma(const DrivingSignal& sig, cplx sigma, cplx tau, double c) {
  const RetardedSignal g = retarded_signal(sig, sigma, tau, c);
  const cplx s1 = 1.0 / sigma;
  const cplx s2 = s1 * s1;
  const cplx s3 = s2 * s1;
  return {g.g * s1, -g.dg * s1 - g.g * s2, g.ddg * s1 + 2.0 * g.dg * s2 + 2.0 * g.g * s3};
}

cplx interior_psi_from_sigma(const DrivingSignal& sig, cplx sigma, cplx tau, double c) {
  if (sigma == cplx(0.0, 0.0)) return -2.0 * sig.eval(tau).dg / c;
  return (sig.value(tau - sigma / c) - sig.value(tau + sigma / c)) / sigma;
}

cplx branch_sigma(const ScalarWavelet& w, const Vec3& r) {
  const cplx s = complex_distance(w.cut(), r, w.config());
  if (std::abs(s) < w.sigma_guard()) throw Error(ErrorCode::OnBranchCircle, "point on the branch circle");
  return s;
}

cplx psi(const ScalarWavelet& w, const Vec3& r, double t) {
  const cplx s = branch_sigma(w, r);
  return w.signal().value(w.tau(t) - s / w.config().c()) / s;
}

PsiDerivs psi_sigma_derivs(const ScalarWavelet& w, const Vec3& r, double t) {
  return psi_from_sigma(w.signal(), branch_sigma(w, r), w.tau(t), w.config().c());
}

cplx interior_psi(const ScalarWavelet& w, const Vec3& r, double t) {
  const cplx s = complex_distance_principal(r, w.config()).sigma;
  if (std::abs(s) < w.sigma_guard()) throw Error(ErrorCode::OnBranchCircle, "point on the branch circle");
  return interior_psi_from_sigma(w.signal(), s, w.tau(t), w.config().c());
}

void require_cut_clearance(const ScalarWavelet& w, const Vec3& r, double h) {
  if (!(cut_distance(w.cut(), r, w.config()) > 4.0 * h)) {
    throw Error(ErrorCode::TooCloseToCut, "stencil of step " + std::to_string(h) + " would reach the cut");
  }
}

cplx wave_residual(const ScalarWavelet& w, const Vec3& r, double t, double h, int order) {
  require_cut_clearance(w, r, h);
  auto f = [&](const Vec3& x, double s) { return psi(w, x, s); };
  return fd::wave_operator(f, r, t, h, order, w.config().c());
}

cplx interior_wave_residual(const ScalarWavelet& w, const Vec3& r, double t, double h, int order) {
  const Cylindrical cyl = to_cylindrical(r, w.config());
  if (!(std::hypot(cyl.rho - w.config().a_len(), cyl.z) > 4.0 * h)) {
    throw Error(ErrorCode::TooCloseToCut, "stencil would reach the branch circle");
  }
  auto f = [&](const Vec3& x, double s) { return interior_psi(w, x, s); };
  return fd::wave_operator(f, r, t, h, order, w.config().c());
}

}  // namespace emw
