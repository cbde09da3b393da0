#include "emw/surface_sources.hpp"

#include <string>

#include "emw/error.hpp"

namespace emw {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_light_cone(cplx sigma, cplx tau) {
  const cplx w = tau * tau - sigma * sigma;
  if (std::abs(w) < 1e-8 * (std::norm(tau) + std::norm(sigma))) {
    throw Error(ErrorCode::LightConePole, "tau = +-sigma");
  }
}

void check_surface(const SourceConfig& cfg, double alpha, double q, double q_min) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive; use coulomb_disk_sources for the flat disk");
  }
  if (!(std::fabs(q) <= cfg.a_len())) throw Error(ErrorCode::InvalidArgument, "|q| must not exceed |a|");
  if (std::fabs(q) < q_min) {
    throw Error(ErrorCode::NearRim, "|q| = " + std::to_string(std::fabs(q)) + " inside the rim band");
  }
}

CVec3 jump_from_tilde(const TildeLMN& k, const CVec3& u, const CVec3& pi) {
  return (k.L * dot(u, pi)) * u - k.M * pi - (kI * k.N) * cross(u, pi);
}

double sample_norm(const SurfaceSourceSample& s) { return std::sqrt(std::norm(s.j0) + norm2(s.j)); }

}  // namespace

TildeLMN tilde_lmn(const DrivingSignal& sig, cplx sigma, cplx tau, double c) {
  if (sigma == cplx(0.0, 0.0)) throw Error(ErrorCode::OnBranchCircle, "sigma = 0");
  const cplx sr = sigma / c;
  check_light_cone(sr, tau);
  const MixedSignals m = mixed_signals(sig, sr, tau);
  const cplx dgp = m.dgp / c, dgm = m.dgm / c;
  const cplx ddgp = m.ddgp / (c * c), ddgm = m.ddgm / (c * c);
  const cplx s1 = 1.0 / sigma;
  const cplx s2 = s1 * s1;
  const cplx s3 = s2 * s1;
  return {ddgp * s1 + 3.0 * dgm * s2 + 3.0 * m.gp * s3, ddgp * s1 + dgm * s2 + m.gp * s3, ddgm * s1 + dgp * s2};
}

TildeLMN impulse_tilde_lmn(cplx sigma, cplx tau) {
  if (sigma == cplx(0.0, 0.0)) throw Error(ErrorCode::OnBranchCircle, "sigma = 0");
  check_light_cone(sigma, tau);
  const cplx w = tau * tau - sigma * sigma;
  const cplx s2 = sigma * sigma;
  const cplx s4 = s2 * s2;
  const cplx t2 = tau * tau;
  const cplx t3 = t2 * tau;
  const cplx t4 = t2 * t2;
  const cplx t5 = t4 * tau;
  const cplx w3 = w * w * w;
  const cplx den3 = kI * kPi * (s2 * sigma) * w3;
  const cplx den2 = kI * kPi * s2 * w3;
  return {(15.0 * s4 * tau - 10.0 * s2 * t3 + 3.0 * t5) / den3, (9.0 * s4 * tau - 2.0 * s2 * t3 + t5) / den3,
          (3.0 * s4 + 6.0 * s2 * t2 - t4) / den2};
}

SurfacePoint surface_point(const SourceConfig& cfg, double alpha, double q, double phi) {
  const Vec3 r = spheroid_point(alpha, q, phi, cfg);
  const double a = cfg.a_len();
  const cplx sigma(alpha, -q);
  const Vec3 np = alpha * r + q * cfg.a();
  const Vec3 e_p = np / (std::sqrt(alpha * alpha + q * q) * std::sqrt(alpha * alpha + a * a));
  return {r, q, phi, sigma, CVec3::from_parts(r, -cfg.a()) / sigma, e_p};
}

CVec3 field_jump(const ScalarWavelet& w, const Polarization& pol, double q, double phi, double alpha, double t,
                 const SurfaceOptions& opts) {
  const SourceConfig& cfg = w.config();
  check_surface(cfg, alpha, q, opts.q_min.value_or(0.0));
  if (std::fabs(opts.mu + opts.nu - 2.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "mu + nu must equal 2");
  const SurfacePoint sp = surface_point(cfg, alpha, q, phi);
  const cplx tau = w.tau(t);
  if (opts.mu == 1.0 && opts.nu == 1.0) {
    return jump_from_tilde(tilde_lmn(w.signal(), sp.sigma, tau, cfg.c()), sp.u, pol.vector());
  }
  const CVec3 fp = field_from_sigma(w.signal(), sp.sigma, sp.u, tau, pol.vector(), cfg.c());
  const CVec3 fm = field_from_sigma(w.signal(), -sp.sigma, -sp.u, tau, pol.vector(), cfg.c());
  return opts.mu * fp - opts.nu * fm;
}

SurfaceSourceSample sources_from_jump(const SurfacePoint& sp, const CVec3& jump, double c) {
  const CVec3 ep(sp.e_p);
  return {sp.position, sp.q, sp.phi, dot(ep, jump), (-kI * c) * cross(ep, jump)};
}

SurfaceSourceSample surface_sources_exact(const ScalarWavelet& w, const Polarization& pol, double q, double phi,
                                          double alpha, double t, const SurfaceOptions& opts) {
  const CVec3 jump = field_jump(w, pol, q, phi, alpha, t, opts);
  return sources_from_jump(surface_point(w.config(), alpha, q, phi), jump, w.config().c());
}

SurfaceSourceSample surface_sources_approx(const ScalarWavelet& w, const Polarization& pol, double q, double phi,
                                           double alpha, double t, const SurfaceOptions& opts) {
  const SourceConfig& cfg = w.config();
  const double a = cfg.a_len();
  check_surface(cfg, alpha, q, opts.q_min.value_or(0.1 * a));
  const SurfacePoint sp = surface_point(cfg, alpha, q, phi);
  const TildeLMN k = tilde_lmn(w.signal(), sp.sigma, w.tau(t), cfg.c());
  const Vec3 er = e_rho(phi, cfg);
  const Vec3 ef = e_phi(phi, cfg);
  const cplx pr = dot(pol.vector(), CVec3(er));
  const cplx pf = dot(pol.vector(), CVec3(ef));
  const double rho = std::sqrt(a * a - q * q);
  const cplx s = sp.sigma;
  const cplx s2 = s * s;
  const cplx scale = 1.0 / (s * std::abs(s));
  const cplx j0 = (k.L * a * rho * pr + k.N * s * rho * pf) * scale;
  const cplx c_phi = (k.L * rho * rho * pr - k.M * s2 * pr + k.N * a * s * pf) * scale * cfg.c();
  const cplx c_rho = (k.M * s2 * pf + k.N * a * s * pr) * scale * cfg.c();
  return {sp.position, q, phi, j0, c_phi * CVec3(ef) + c_rho * CVec3(er)};
}

SurfaceSourceSample impulse_sources(const SourceConfig& cfg, const Polarization& pol, double q, double phi,
                                    double alpha, double t, const SurfaceOptions& opts) {
  if (cfg.c() != 1.0) throw Error(ErrorCode::InvalidArgument, "impulse closed forms assume c = 1");
  check_surface(cfg, alpha, q, opts.q_min.value_or(0.0));
  const SurfacePoint sp = surface_point(cfg, alpha, q, phi);
  const TildeLMN k = impulse_tilde_lmn(sp.sigma, cplx(t, -cfg.b()));
  return sources_from_jump(sp, jump_from_tilde(k, sp.u, pol.vector()), 1.0);
}

BandpassResponse bandpass_response(int n, const SourceConfig& cfg, const Polarization& pol, double q, double phi,
                                   double alpha, double t, const SurfaceOptions& opts) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "band-pass order must be positive");
  const ScalarWavelet direct_w(BranchCut::flat_disk(), cfg, DrivingSignal::cauchy(n));
  BandpassResponse out;
  out.direct = surface_sources_exact(direct_w, pol, q, phi, alpha, t, opts);

  const int k = n - 1;
  out.from_impulse = impulse_sources(cfg, pol, q, phi, alpha, t, opts);
  if (k > 0) {
    // k-th central difference in b; the scale is the distance |b| - a to the light-cone poles.
    const double scale = std::fabs(cfg.b()) - cfg.a_len();
    const double h = scale * (k == 1 ? 1e-4 : std::pow(10.0, -14.0 / (k + 2)));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-d/db)^k
    SurfaceSourceSample acc = out.from_impulse;
    acc.j0 = 0.0;
    acc.j = CVec3{};
    for (int m = 0; m <= k; ++m) {
      const double bm = cfg.b() + (0.5 * k - m) * h;
      const SurfaceSourceSample s = impulse_sources(cfg.with_b(bm), pol, q, phi, alpha, t, opts);
      const double wgt = ((m % 2 == 0) ? 1.0 : -1.0) * binomial(k, m) / std::pow(h, k) * sign;
      acc.j0 += wgt * s.j0;
      acc.j += wgt * s.j;
    }
    out.from_impulse = acc;
  }
  SurfaceSourceSample diff = out.direct;
  diff.j0 -= out.from_impulse.j0;
  diff.j -= out.from_impulse.j;
  out.relative_gap = sample_norm(diff) / sample_norm(out.direct);
  return out;
}

CVec3 coulomb_field(const Vec3& r, const Vec3& a) {
  const double wr = dot(r, r) - dot(a, a);
  const double wi = -2.0 * dot(a, r);
  double p = 0.0, q = 0.0;
  principal_sqrt(wr, wi, p, q);
  const cplx sigma(p, -q);
  if (sigma == cplx(0.0, 0.0)) throw Error(ErrorCode::OnBranchCircle, "Coulomb field on the branch circle");
  return CVec3::from_parts(r, -a) / (4.0 * kPi * sigma * sigma * sigma);
}

CoulombDiskSources coulomb_disk_sources(double rho, double a, double c) {
  if (!(a > 0.0) || !(rho >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need a > 0 and rho >= 0");
  if (!(rho < a)) throw Error(ErrorCode::RimSingularity, "disk sources diverge at the rim rho = a");
  const double d = a * a - rho * rho;
  const double d32 = d * std::sqrt(d);
  return {-a / (2.0 * kPi * d32), -c * rho / (2.0 * kPi * d32), c * rho / a, c / a};
}

SurfaceSourceSample coulomb_surface_sources(const SourceConfig& cfg, double q, double phi, double alpha) {
  check_surface(cfg, alpha, q, 0.0);
  const SurfacePoint sp = surface_point(cfg, alpha, q, phi);
  const cplx s3 = sp.sigma * sp.sigma * sp.sigma;
  const CVec3 jump = CVec3::from_parts(sp.position, -cfg.a()) / (2.0 * kPi * s3);
  return sources_from_jump(sp, jump, cfg.c());
}

double coulomb_disk_charge(double rho_max, double a) {
  if (!(rho_max < a)) throw Error(ErrorCode::RimSingularity, "total disk charge diverges at the rim");
  return -a * (1.0 / std::sqrt(a * a - rho_max * rho_max) - 1.0 / a);
}

EffectiveAperture effective_aperture(double omega, double a, double c) {
  const double k = omega / c;
  if (!(k * a > 1.0)) throw Error(ErrorCode::SubRadiating, "ka <= 1 radiates mostly reactive field");
  return {1.0 / k, std::sqrt(a * a - 1.0 / (k * k))};
}

}  // namespace emw
