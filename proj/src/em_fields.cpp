#include "emw/em_fields.hpp"

#include "emw/error.hpp"
#include "emw/fd_ops.hpp"

namespace emw {

namespace {

CVec3 complex_position(const Vec3& r, const SourceConfig& cfg) {
  return CVec3::from_parts(r, -cfg.a());
}

struct BranchPoint {
  cplx sigma;
  CVec3 u;
};

BranchPoint branch_point(const ScalarWavelet& w, const Vec3& r) {
  const cplx s = branch_sigma(w, r);
  return {s, complex_position(r, w.config()) / s};
}

BranchPoint principal_point(const ScalarWavelet& w, const Vec3& r) {
  const cplx s = complex_distance_principal(r, w.config()).sigma;
  if (std::abs(s) < w.sigma_guard()) throw Error(ErrorCode::OnBranchCircle, "point on the branch circle");
  return {s, complex_position(r, w.config()) / s};
}

void require_rim_clearance(const ScalarWavelet& w, const Vec3& r, double h) {
  const Cylindrical cyl = to_cylindrical(r, w.config());
  if (!(std::hypot(cyl.rho - w.config().a_len(), cyl.z) > 4.0 * h)) {
    throw Error(ErrorCode::TooCloseToCut, "stencil would reach the branch circle");
  }
}

template <class FieldFn>
MaxwellResidual maxwell_of(FieldFn&& f, const Vec3& r, double t, double h, int order, double c) {
  MaxwellResidual out;
  out.divergence = fd::divergence(f, r, t, h, order);
  const CVec3 dt = fd::partial(f, r, t, 3, h / c, order) / c;
  out.curl_equation = dt + kI * fd::curl(f, r, t, h, order);
  return out;
}

}  // namespace

Polarization::Polarization(const CVec3& pi, const SourceConfig& cfg, bool keep_parallel) : pi_(pi) {
  if (!is_finite(pi) || !(norm(pi) > 0.0)) throw Error(ErrorCode::InvalidArgument, "polarization must be nonzero");
  if (!keep_parallel) {
    const cplx par = dot(pi_, CVec3(cfg.axis()));
    pi_ = pi_ - par * CVec3(cfg.axis());
    removed_ = std::abs(par);
    if (!(norm(pi_) > 1e-14 * norm(pi))) {
      throw Error(ErrorCode::InvalidArgument, "polarization is parallel to a; nothing left after projection");
    }
  }
}

LMN lmn(const DrivingSignal& sig, cplx sigma, cplx tau, double c) {
  if (sigma == cplx(0.0, 0.0)) throw Error(ErrorCode::OnBranchCircle, "sigma = 0");
  const RetardedSignal g = retarded_signal(sig, sigma, tau, c);
  const cplx s1 = 1.0 / sigma;
  const cplx s2 = s1 * s1;
  const cplx s3 = s2 * s1;
  const cplx n = g.ddg * s1 + g.dg * s2;
  return {n + 2.0 * g.dg * s2 + 3.0 * g.g * s3, n + g.g * s3, n};
}

CVec3 field_from_sigma(const DrivingSignal& sig, cplx sigma, const CVec3& u, cplx tau, const CVec3& pi,
                       double c) {
  const LMN k = lmn(sig, sigma, tau, c);
  const cplx lambda = dot(u, pi);
  return (k.L * lambda) * u - k.M * pi - (kI * k.N) * cross(u, pi);
}

EMFieldSample field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t) {
  const BranchPoint bp = branch_point(w, r);
  return {r, t, field_from_sigma(w.signal(), bp.sigma, bp.u, w.tau(t), pol.vector(), w.config().c())};
}

CVec3 field_curl_oracle(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double h,
                        int order) {
  require_cut_clearance(w, r, h);
  const double c = w.config().c();
  // Time argument is c t so that every stencil axis has length units.
  auto f = [&](const Vec3& x, double ct) { return psi(w, x, ct / c); };
  const double ct = c * t;
  cplx hess[3][3];
  for (int i = 0; i < 3; ++i) {
    hess[i][i] = fd::partial2(f, r, ct, i, h, order);
    for (int j = 0; j < i; ++j) hess[i][j] = hess[j][i] = fd::partial_mixed(f, r, ct, i, j, h, order);
  }
  const CVec3& pi = pol.vector();
  const cplx trace = hess[0][0] + hess[1][1] + hess[2][2];
  CVec3 hp;
  for (int i = 0; i < 3; ++i) hp[i] = hess[i][0] * pi.x + hess[i][1] * pi.y + hess[i][2] * pi.z;
  const CVec3 grad_t{fd::partial_mixed(f, r, ct, 3, 0, h, order), fd::partial_mixed(f, r, ct, 3, 1, h, order),
                     fd::partial_mixed(f, r, ct, 3, 2, h, order)};
  return hp - trace * pi + kI * cross(grad_t, pi);
}

FourPotential four_potential(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double h,
                             int order) {
  require_cut_clearance(w, r, h);
  auto f = [&](const Vec3& x, double s) { return psi(w, x, s); };
  const CVec3 grad = fd::gradient(f, r, t, h, order);
  const cplx psi_t = fd::d_dt(f, r, t, h / w.config().c(), order);
  const CVec3& pi = pol.vector();
  return {-dot(grad, pi).real(), (psi_t * pi).real() / w.config().c() + cross(grad, pi).imag()};
}

FourPotential four_potential_exact(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t) {
  const BranchPoint bp = branch_point(w, r);
  const double c = w.config().c();
  const PsiDerivs d = psi_from_sigma(w.signal(), bp.sigma, w.tau(t), c);
  const cplx psi_t = w.signal().eval(w.tau(t) - bp.sigma / c).dg / bp.sigma;
  const CVec3& pi = pol.vector();
  return {-(d.d1 * dot(bp.u, pi)).real(), (psi_t * pi).real() / c + (d.d1 * cross(bp.u, pi)).imag()};
}

double lorenz_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double h,
                       int order) {
  require_cut_clearance(w, r, h);
  const double c = w.config().c();
  auto a0 = [&](const Vec3& x, double s) { return four_potential_exact(w, pol, x, s).A0; };
  double sum = fd::partial(a0, r, t, 3, h / c, order) / c;
  for (int k = 0; k < 3; ++k) {
    sum += fd::partial([&](const Vec3& x, double s) { return four_potential_exact(w, pol, x, s).A[k]; }, r, t, k,
                       h, order);
  }
  return std::fabs(sum);
}

MaxwellResidual maxwell_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t,
                                 double h, int order) {
  require_cut_clearance(w, r, h);
  auto f = [&](const Vec3& x, double s) { return field(w, pol, x, s).F; };
  return maxwell_of(f, r, t, h, order, w.config().c());
}

CVec3 interior_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t) {
  const BranchPoint bp = principal_point(w, r);
  const double c = w.config().c();
  const CVec3& pi = pol.vector();
  return field_from_sigma(w.signal(), bp.sigma, bp.u, w.tau(t), pi, c) +
         field_from_sigma(w.signal(), -bp.sigma, -bp.u, w.tau(t), pi, c);
}

MaxwellResidual interior_maxwell_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r,
                                          double t, double h, int order) {
  require_rim_clearance(w, r, h);
  auto f = [&](const Vec3& x, double s) { return interior_field(w, pol, x, s); };
  return maxwell_of(f, r, t, h, order, w.config().c());
}

CVec3 joint_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t, double mu,
                  double nu) {
  const CutKind kind = w.cut().kind();
  if (kind == CutKind::FlatDisk || kind == CutKind::Custom) {
    throw Error(ErrorCode::InvalidArgument, "joint field needs a spheroidal cut");
  }
  if (std::fabs(mu + nu - 2.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "mu + nu must equal 2");
  const SourceConfig& cfg = w.config();
  const double alpha = w.cut().alpha();
  const double a = cfg.a_len();
  const PrincipalDistance pd = complex_distance_principal(r, cfg);
  const double d2 = pd.p * pd.p + pd.q * pd.q;
  if (d2 > 0.0) {
    const double grad_p = std::sqrt((pd.p * pd.p + a * a) / d2);
    if (std::fabs(pd.p - alpha) / grad_p < w.cut().tolerance() * a) {
      throw Error(ErrorCode::OnCut, "point on the spheroid p = alpha");
    }
  }
  if (pd.p > alpha) {
    const BranchPoint bp = principal_point(w, r);
    return 2.0 * field_from_sigma(w.signal(), bp.sigma, bp.u, w.tau(t), pol.vector(), cfg.c());
  }
  return nu * interior_field(w, pol, r, t);
}

CVec3 far_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t) {
  const BranchPoint bp = branch_point(w, r);
  const RetardedSignal g = retarded_signal(w.signal(), bp.sigma, w.tau(t), w.config().c());
  const double rl = norm(r);
  const CVec3 er(r / rl);
  const CVec3& pi = pol.vector();
  const CVec3 perp = pi - dot(pi, er) * er;
  return (-g.ddg / rl) * (perp + kI * cross(er, perp));
}

double helicity_residual(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t) {
  const CVec3 F = field(w, pol, r, t).F;
  const CVec3 er(r / norm(r));
  return norm(kI * cross(er, F) - F) / norm(F);
}

PoyntingEnergy poynting_energy_far(const CVec3& F, const Vec3& e_r, double tol) {
  PoyntingEnergy out{};
  out.energy = 0.5 * norm2(F);
  out.S = out.energy * e_r;
  out.S_cross = 0.5 * cross(conj(F), F).imag();
  out.mismatch = out.energy > 0.0 ? norm(out.S - out.S_cross) / out.energy : 0.0;
  out.consistent = out.mismatch <= tol;
  return out;
}

}  // namespace emw
