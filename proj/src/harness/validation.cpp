#include "emw/harness/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "emw/em_fields.hpp"
#include "emw/error.hpp"
#include "emw/fd_ops.hpp"
#include "emw/harness/beam_profile.hpp"
#include "emw/harness/fourier.hpp"
#include "emw/harness/output.hpp"
#include "emw/harness/sampling.hpp"
#include "emw/kernels.hpp"
#include "emw/surface_sources.hpp"

namespace emw::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Vec3 random_point(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Mixture of a box around the source, a shell near the rim and a far zone, in units of |a|.
Vec3 identity_point(std::mt19937_64& rng, const SourceConfig& cfg, std::size_t i) {
  const double a = cfg.a_len();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (i % 4) {
    case 0: {
      // near the branch circle
      const double rho = a * (1.0 + 0.2 * (u(rng) - 0.5));
      const double phi = 2 * kPi * u(rng);
      return from_cylindrical({rho, phi, 0.1 * a * (u(rng) - 0.5)}, cfg);
    }
    case 1: {
      const double r = a * std::pow(10.0, 3.0 * u(rng));
      Vec3 d = random_point(rng, 1.0);
      while (norm(d) < 1e-3) d = random_point(rng, 1.0);
      return (r / norm(d)) * d;
    }
    default:
      return random_point(rng, 3.0 * a);
  }
}

std::vector<Vec3> off_cut_points(const BranchCut& cut, const SourceConfig& cfg, std::size_t count,
                                 double clearance, std::mt19937_64& rng) {
  std::vector<Vec3> out;
  while (out.size() < count) {
    const Vec3 r = random_point(rng, 2.0 * cfg.a_len());
    if (cut_distance(cut, r, cfg) >= clearance) out.push_back(r);
  }
  return out;
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

void finish_orders(ConvergenceCheck& c) {
  c.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < c.rms.size(); ++i) {
    c.min_order = std::min(c.min_order, fd::convergence_order(c.rms[i - 1], c.rms[i],
                                                              kConvergenceSteps[i - 1] / kConvergenceSteps[i]));
  }
}

CVec3 broken_field(const ScalarWavelet& w, const Polarization& pol, const Vec3& r, double t) {
  const cplx s = branch_sigma(w, r);
  const CVec3 u = CVec3::from_parts(r, -w.config().a()) / s;
  return field_from_sigma(w.signal(), -s, u, w.tau(t), pol.vector(), w.config().c());
}

Polarization default_pol(const SourceConfig& cfg) {
  return Polarization(CVec3{cplx(1.0, 0.3), cplx(-0.4, 0.8), cplx(0.2, -0.1)}, cfg);
}

struct CutSurface {
  std::string name;
  BranchCut cut;
  // p on the membrane as a function of q; only q of one sign carries the membrane.
  std::function<double(double)> chi;
  double q_sign;
  bool apron;
};

}  // namespace

IdentityCheck check_frame_identities(const SourceConfig& cfg, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto t0 = Clock::now();
  const double a2 = cfg.a_len() * cfg.a_len();
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 r = identity_point(rng, cfg, i);
    const ComplexDistanceSample f = frame(r, cfg);
    const double gp2 = norm2(f.grad_p), gq2 = norm2(f.grad_q);
    const double scale = gp2 + gq2;
    const double d2 = f.p * f.p + f.q * f.q;
    if (!(d2 > 0.0)) continue;
    const double errs[] = {std::abs(dot(f.u, f.u) - 1.0), std::fabs(gp2 - gq2 - 1.0), std::fabs(dot(f.grad_p, f.grad_q)),
                           std::fabs(gp2 - (f.p * f.p + a2) / d2), std::fabs(gq2 - (a2 - f.q * f.q) / d2)};
    for (double e : errs) worst = std::max(worst, e / scale);
  }
  return {worst, seconds_since(t0), count};
}

IdentityCheck check_sigma_algebra(const SourceConfig& cfg, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto t0 = Clock::now();
  const Vec3& a = cfg.a();
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 r = identity_point(rng, cfg, i);
    const cplx w(dot(r, r) - dot(a, a), -2.0 * dot(a, r));
    const cplx s = complex_distance_principal(r, cfg).sigma;
    if (std::abs(w) == 0.0) continue;
    worst = std::max(worst, std::abs(s * s - w) / std::abs(w));
  }
  return {worst, seconds_since(t0), count};
}

std::vector<StraddleCheck> check_branch_flips(const SourceConfig& cfg, std::size_t pairs_per_cut,
                                              std::uint64_t seed) {
  const double a = cfg.a_len();
  const double alpha = 0.2 * a, eps = 0.05 * a;
  auto custom_chi = [alpha, eps](double q, double) { return alpha * std::tanh(q / eps); };
  const std::vector<CutSurface> surfaces{
      {"flat", BranchCut::flat_disk(), [](double) { return 0.0; }, 1.0, false},
      {"upper", BranchCut::upper_spheroid(alpha), [alpha](double) { return alpha; }, 1.0, true},
      {"lower", BranchCut::lower_spheroid(alpha), [alpha](double) { return alpha; }, -1.0, true},
      {"smooth", BranchCut::smooth_spheroid(alpha, eps),
       [alpha, eps](double q) { return smooth_cut_function(q, alpha, eps); }, 1.0, false},
      {"custom", BranchCut::custom(custom_chi, a), [&](double q) { return custom_chi(q, 0.0); }, 1.0, false},
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double delta = 1e-7 * a;
  std::vector<StraddleCheck> out;
  for (const CutSurface& s : surfaces) {
    StraddleCheck c{s.name, pairs_per_cut, 0, 0.0};
    for (std::size_t i = 0; i < pairs_per_cut; ++i) {
      const double phi = 2 * kPi * u(rng);
      Vec3 point, normal;
      if (s.name == "flat") {
        point = from_cylindrical({0.98 * a * std::sqrt(u(rng)), phi, 0.0}, cfg);
        normal = cfg.axis();
      } else if (s.apron && i % 10 == 0) {
        // annulus between the rim and the spheroid's equator
        const double rho = a + (std::sqrt(a * a + alpha * alpha) - a) * (0.05 + 0.9 * u(rng));
        point = from_cylindrical({rho, phi, 0.0}, cfg);
        normal = cfg.axis();
      } else {
        const double q = s.q_sign * a * (0.05 + 0.93 * u(rng));
        const double p = s.chi(q);
        point = spheroid_point(p, q, phi, cfg);
        const ComplexDistanceSample f = frame(point, cfg);
        const double hq = 1e-6 * a;
        const double slope = (s.chi(q + hq) - s.chi(q - hq)) / (2 * hq);
        normal = normalized(f.grad_p - slope * f.grad_q);
      }
      const cplx plus = complex_distance(s.cut, point + delta * normal, cfg);
      const cplx minus = complex_distance(s.cut, point - delta * normal, cfg);
      const double ratio = std::abs(plus + minus) / std::abs(plus - minus);
      c.worst = std::max(c.worst, ratio);
      if (!(ratio <= 1e-4)) ++c.failures;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<ConvergenceCheck> check_residual_convergence(const SourceConfig& cfg, const BranchCut& cut,
                                                         const std::vector<int>& drives, std::size_t points,
                                                         std::uint64_t seed, bool break_branch) {
  std::vector<ConvergenceCheck> out;
  const double a = cfg.a_len();
  const Polarization pol = default_pol(cfg);
  for (int n : drives) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
    const ScalarWavelet w(cut, cfg, DrivingSignal::cauchy(n));
    const auto pts = off_cut_points(cut, cfg, points, 0.1 * a, rng);
    std::uniform_real_distribution<double> ut(-1.0, 2.0);
    std::vector<double> times(points);
    for (double& t : times) t = ut(rng) * a / cfg.c();

    ConvergenceCheck box{"box_psi", n, {}, 0.0}, div{"div_F", n, {}, 0.0}, max{"maxwell_F", n, {}, 0.0};
    for (double hs : kConvergenceSteps) {
      const double h = hs * a;
      std::vector<double> eb(points), ed(points), em(points);
      for (std::size_t i = 0; i < points; ++i) {
        eb[i] = std::abs(wave_residual(w, pts[i], times[i], h, 2));
        MaxwellResidual m;
        if (break_branch) {
          auto f = [&](const Vec3& x, double s) { return broken_field(w, pol, x, s); };
          m.divergence = fd::divergence(f, pts[i], times[i], h, 2);
          const CVec3 dt = fd::partial(f, pts[i], times[i], 3, h / cfg.c(), 2) / cfg.c();
          m.curl_equation = dt + kI * fd::curl(f, pts[i], times[i], h, 2);
        } else {
          m = maxwell_residual(w, pol, pts[i], times[i], h, 2);
        }
        ed[i] = std::abs(m.divergence);
        em[i] = norm(m.curl_equation);
      }
      box.rms.push_back(rms(eb));
      div.rms.push_back(rms(ed));
      max.rms.push_back(rms(em));
    }
    for (ConvergenceCheck* c : {&box, &div, &max}) {
      finish_orders(*c);
      out.push_back(*c);
    }
  }
  return out;
}

OracleCheck check_oracle(const SourceConfig& cfg, const BranchCut& cut, int n, std::size_t points, double h,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double a = cfg.a_len();
  const ScalarWavelet w(cut, cfg, DrivingSignal::cauchy(n));
  const Polarization pol = default_pol(cfg);
  const auto pts = off_cut_points(cut, cfg, points, 0.1 * a, rng);
  std::uniform_real_distribution<double> ut(-1.0, 2.0);
  std::vector<double> times(points);
  for (double& t : times) t = ut(rng) * a / cfg.c();

  OracleCheck out{0.0, {"lorenz", n, {}, 0.0}};
  for (std::size_t i = 0; i < points; ++i) {
    const CVec3 F = field(w, pol, pts[i], times[i]).F;
    const CVec3 O = field_curl_oracle(w, pol, pts[i], times[i], h * a);
    out.max_deviation = std::max(out.max_deviation, norm(O - F) / norm(F));
  }
  for (double hs : kConvergenceSteps) {
    std::vector<double> e(points);
    for (std::size_t i = 0; i < points; ++i) e[i] = lorenz_residual(w, pol, pts[i], times[i], hs * a, 2);
    out.lorenz.rms.push_back(rms(e));
  }
  finish_orders(out.lorenz);
  return out;
}

double check_impulse_equivalence(std::size_t count, std::uint64_t seed) {
  const DrivingSignal c1 = DrivingSignal::cauchy(1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  std::size_t done = 0;
  while (done < count) {
    const cplx sigma(u(rng), u(rng));
    const cplx tau(u(rng), -1.0 - std::fabs(u(rng)));
    if (std::abs(sigma) < 0.1) continue;
    // off the light cone tau = +-sigma
    if (std::abs(tau * tau - sigma * sigma) < 1e-2 * (std::norm(tau) + std::norm(sigma))) continue;
    const TildeLMN g = tilde_lmn(c1, sigma, tau), c = impulse_tilde_lmn(sigma, tau);
    worst = std::max({worst, std::abs(c.L - g.L) / std::abs(g.L), std::abs(c.M - g.M) / std::abs(g.M),
                      std::abs(c.N - g.N) / std::abs(g.N)});
    ++done;
  }
  return worst;
}

CoulombCheck check_coulomb() {
  const SourceConfig cfg({0, 0, 1}, 1.5);
  CoulombCheck out{};
  out.j0_center = coulomb_disk_sources(0.0, 1.0).j0;
  out.samples = 20;
  std::vector<double> prev(out.samples, std::numeric_limits<double>::infinity());
  for (int level = 2; level <= 4; ++level) {
    const double alpha = std::ldexp(1.0, -level);
    for (std::size_t i = 0; i < out.samples; ++i) {
      // disk radius up to about 0.9 a
      const double q = 0.45 + 0.025 * static_cast<double>(i);
      const SurfaceSourceSample s = coulomb_surface_sources(cfg, q, 0.4 * static_cast<double>(i), alpha);
      const double magnetic = std::hypot(s.magnetic_charge(), norm(s.magnetic_current()));
      if (!(magnetic < prev[i])) ++out.monotone_violations;
      prev[i] = magnetic;
    }
  }
  for (int cells : {100, 1000, 10000, 100000}) {
    double sum = 0.0;
    for (int k = 0; k < cells; ++k) {
      const double rho = (k + 0.5) / cells;
      sum += coulomb_disk_sources(rho, 1.0).j0 * 2 * kPi * rho / cells;
    }
    out.charge_integrals.push_back(sum);
  }
  out.charge_diverges = true;
  for (std::size_t i = 1; i < out.charge_integrals.size(); ++i) {
    // each tenfold refinement must push the total further negative by a growing amount
    if (!(out.charge_integrals[i] < out.charge_integrals[i - 1])) out.charge_diverges = false;
  }
  if (out.charge_integrals.size() >= 3) {
    const std::size_t k = out.charge_integrals.size() - 1;
    if (!(out.charge_integrals[k - 1] - out.charge_integrals[k] > out.charge_integrals[k - 2] - out.charge_integrals[k - 1])) {
      out.charge_diverges = false;
    }
  }
  return out;
}

BeamCheck check_beam(unsigned threads) {
  BeamCheck out{};
  for (double b : {1.01, 1.5}) {
    const SourceConfig cfg({0, 0, 1}, b);
    BeamSpec spec;
    spec.orders = {1, 4, 16};
    spec.beta = 1.0;
    spec.radius = 1000.0;
    spec.theta = {0.0, kPi / 2, 7};
    const BeamProfile bp = beam_profile(cfg, spec, threads);
    const std::size_t tg = bp.angles.column_index("T_gap");
    for (std::size_t r = 0; r < bp.angles.rows(); ++r) {
      out.worst_duration_gap = std::max(out.worst_duration_gap, bp.angles.at(r, tg));
    }
    const std::size_t ag = bp.orders.column_index("theta_beta_gap");
    const std::size_t cg = bp.orders.column_index("center_gap");
    const std::size_t wg = bp.orders.column_index("width_gap");
    for (std::size_t r = 0; r < bp.orders.rows(); ++r) {
      const double g = bp.orders.at(r, ag);
      out.worst_angle_gap = std::max(out.worst_angle_gap, std::isnan(g) ? 1.0 : g);
      out.worst_center_gap = std::max(out.worst_center_gap, bp.orders.at(r, cg));
      out.worst_width_gap = std::max(out.worst_width_gap, bp.orders.at(r, wg));
    }
  }
  const SourceConfig cfg({0, 0, 1}, 1.5);
  const ScalarWavelet w(BranchCut::flat_disk(), cfg, DrivingSignal::cauchy(4));
  const Polarization pol(CVec3(Vec3{1, 0, 0}), cfg);
  for (Vec3 d : {Vec3{0, 0, 1}, normalized(Vec3{0.2, 0.1, 0.97}), normalized(Vec3{0.5, -0.5, 0.7})}) {
    const double r10 = helicity_residual(w, pol, 10.0 * d, 10.0);
    const double r100 = helicity_residual(w, pol, 100.0 * d, 100.0);
    out.helicity_ratio = std::max(out.helicity_ratio, r100 / r10);
  }
  return out;
}

ContinuityCheck check_interior_continuity(const SourceConfig& cfg, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = cfg.a_len();
  const ScalarWavelet w(BranchCut::upper_spheroid(0.2 * a), cfg, DrivingSignal::cauchy(4));
  const Polarization pol = default_pol(cfg);
  const double delta = 1e-10 * a;
  ContinuityCheck out{0.0, 0.0};
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 s = from_cylindrical({0.9 * a * std::sqrt(u(rng)), 2 * kPi * u(rng), 0.0}, cfg);
    const double t = (3.0 * u(rng) - 1.0) * a / cfg.c();
    const Vec3 up = s + delta * cfg.axis(), down = s - delta * cfg.axis();
    const CVec3 fu = joint_field(w, pol, up, t), fd = joint_field(w, pol, down, t);
    out.joint_jump = std::max(out.joint_jump, norm(fu - fd) / norm(fu));
    const cplx pu = interior_psi(w, up, t), pd = interior_psi(w, down, t);
    out.interior_jump = std::max(out.interior_jump, std::abs(pu - pd) / std::abs(pu));
  }
  return out;
}

double check_approx_sources(const SourceConfig& cfg, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  const double a = cfg.a_len();
  const ScalarWavelet w(BranchCut::flat_disk(), cfg, DrivingSignal::cauchy(4));
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Polarization pol(CVec3{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))}, cfg);
    const double q = (u(rng) < 0.5 ? -1.0 : 1.0) * a * (0.2 + 0.8 * u(rng));
    const double phi = 2 * kPi * u(rng);
    const double t = (4.0 * u(rng) - 2.0) * a / cfg.c();
    const SurfaceSourceSample ex = surface_sources_exact(w, pol, q, phi, 0.01 * a, t);
    const SurfaceSourceSample ap = surface_sources_approx(w, pol, q, phi, 0.01 * a, t);
    const double gap = std::sqrt(std::norm(ap.j0 - ex.j0) + norm2(ap.j - ex.j)) /
                       std::sqrt(std::norm(ex.j0) + norm2(ex.j));
    worst = std::max(worst, gap);
  }
  return worst;
}

double surface_continuity_residual(const ScalarWavelet& w, const Polarization& pol, double alpha, double q,
                                   double phi, double t, double h) {
  const SourceConfig& cfg = w.config();
  const double a = cfg.a_len();
  const double A = std::sqrt(alpha * alpha + a * a);
  auto src = [&](double qq, double pp, double tt) { return surface_sources_exact(w, pol, qq, pp, alpha, tt); };
  // tangent along q and the metric factors of p = alpha
  auto tq = [&](double qq, double pp) {
    const double s = std::sqrt(a * a - qq * qq);
    return (-A * qq / (a * s)) * e_rho(pp, cfg) + (alpha / a) * cfg.axis();
  };
  auto hphi = [&](double qq) { return A * std::sqrt(a * a - qq * qq) / a; };
  auto flux_q = [&](double qq) {
    const Vec3 tv = tq(qq, phi);
    return hphi(qq) * dot(src(qq, phi, t).j, CVec3(tv / norm(tv)));
  };
  auto flux_phi = [&](double pp) { return norm(tq(q, pp)) * dot(src(q, pp, t).j, CVec3(e_phi(pp, cfg))); };
  const cplx div =
      (fd::derivative(flux_q, q, h, 2) + fd::derivative(flux_phi, phi, h, 2)) / (norm(tq(q, phi)) * hphi(q));
  const cplx dt = fd::derivative([&](double tt) { return src(q, phi, tt).j0; }, t, h / cfg.c(), 2) / cfg.c();
  return std::abs(dt + div);
}

namespace {

SuiteResult upper(const std::string& name, double measured, double limit, double scale, std::string detail = {}) {
  const double th = limit * scale;
  return {name, measured <= th, measured, th, "<=", std::move(detail)};
}

SuiteResult lower(const std::string& name, double measured, double limit, std::string detail = {}) {
  return {name, measured >= limit, measured, limit, ">=", std::move(detail)};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::vector<SuiteResult> run_validation(const RunConfig& run, const ValidationOptions& opts) {
  validate_config(run);
  const SourceConfig cfg = run.source();
  const BranchCut cut = run.cut();
  const double ts = opts.tol_scale;
  std::vector<SuiteResult> out;
  std::uint64_t seed = opts.seed;

  const IdentityCheck fi = check_frame_identities(cfg, 1'000'000, seed++);
  out.push_back(upper("frame_identities", fi.max_error, 1e-10, ts, "1e6 points"));
  out.push_back(upper("frame_identities_runtime_s", fi.seconds, 10.0, 1.0));

  const IdentityCheck sa = check_sigma_algebra(cfg, 1'000'000, seed++);
  out.push_back(upper("sigma_algebra", sa.max_error, 1e-12, ts, "1e6 points"));
  for (const StraddleCheck& s : check_branch_flips(cfg, 1000, seed++)) {
    out.push_back(upper("branch_flip_" + s.cut, static_cast<double>(s.failures), 0.0, 1.0,
                        "worst |s+ + s-|/|s+ - s-| = " + fmt("%.3g", s.worst)));
  }

  for (const ConvergenceCheck& c : check_residual_convergence(cfg, cut, {1, 4}, 100, seed++, opts.break_branch)) {
    out.push_back(lower("order_" + c.quantity + "_n" + std::to_string(c.n), c.min_order, 1.9,
                        "rms " + fmt("%.3e", c.rms.front()) + " -> " + fmt("%.3e", c.rms.back())));
  }

  for (int n : {1, 4}) {
    const OracleCheck oc = check_oracle(cfg, cut, n, 100, 1e-4, seed++);
    out.push_back(upper("curl_oracle_n" + std::to_string(n), oc.max_deviation, 1e-5, ts, "h = 1e-4 a"));
    out.push_back(lower("order_lorenz_n" + std::to_string(n), oc.lorenz.min_order, 1.9));
  }

  out.push_back(upper("impulse_closed_form", check_impulse_equivalence(10000, seed++), 1e-11, ts, "1e4 samples"));

  const CoulombCheck cc = check_coulomb();
  out.push_back(upper("coulomb_center_density", std::fabs(cc.j0_center + 1.0 / (2.0 * kPi)), 0.0, 1.0));
  out.push_back(upper("coulomb_magnetic_monotone", static_cast<double>(cc.monotone_violations), 0.0, 1.0,
                      "violations over 20 samples"));
  out.push_back(lower("coulomb_rim_charge_diverges", cc.charge_diverges ? 1.0 : 0.0, 1.0,
                      "finest mesh total " + fmt("%.4g", cc.charge_integrals.back())));

  const BeamCheck bc = check_beam(opts.threads);
  out.push_back(upper("beam_pulse_duration", bc.worst_duration_gap, 0.05, ts));
  out.push_back(upper("beam_diffraction_angle", bc.worst_angle_gap, 0.10, ts));
  out.push_back(upper("beam_spectral_center", bc.worst_center_gap, 0.02, ts));
  out.push_back(upper("beam_spectral_width", bc.worst_width_gap, 0.02, ts));
  out.push_back(upper("far_helicity_ratio", bc.helicity_ratio, 0.15, ts, "r = 100 a over r = 10 a"));

  const ContinuityCheck ic = check_interior_continuity(cfg, 1000, seed++);
  out.push_back(upper("joint_field_continuity", ic.joint_jump, 1e-8, ts));
  out.push_back(upper("interior_psi_continuity", ic.interior_jump, 1e-8, ts));

  out.push_back(upper("approx_vs_exact_sources", check_approx_sources(cfg, 1000, seed++), 0.10, ts));

  // Further invariants.
  {
    const ScalarWavelet w(cut, cfg, DrivingSignal::cauchy(4));
    const Polarization pol = default_pol(cfg);
    const Vec3 r = 20.0 * cfg.a_len() * normalized(Vec3{0.05, 0.03, 1.0});
    const double frac = negative_frequency_fraction([&](double t) { return psi(w, r, t); }, 8.0, 40);
    out.push_back(upper("negative_frequency_energy", frac, 1e-6, ts));

    double worst_order = std::numeric_limits<double>::infinity();
    for (auto [q, phi, t] : {std::tuple{0.5, 0.3, 0.1}, std::tuple{-0.4, 2.0, -0.5}, std::tuple{0.8, 4.0, 0.7}}) {
      const double aq = q * cfg.a_len();
      const ScalarWavelet wf(BranchCut::flat_disk(), cfg, DrivingSignal::cauchy(4));
      const double e1 = surface_continuity_residual(wf, pol, 0.3 * cfg.a_len(), aq, phi, t, 1e-2 * cfg.a_len());
      const double e2 = surface_continuity_residual(wf, pol, 0.3 * cfg.a_len(), aq, phi, t, 5e-3 * cfg.a_len());
      worst_order = std::min(worst_order, fd::convergence_order(e1, e2));
    }
    out.push_back(lower("order_surface_continuity", worst_order, 1.9));

    const ScalarWavelet wi(BranchCut::flat_disk(), cfg, DrivingSignal::cauchy(1));
    double interior_order = std::numeric_limits<double>::infinity();
    for (Vec3 r0 : {Vec3{0.3, 0.0, 0.01}, Vec3{0.0, 0.2, -0.02}}) {
      const Vec3 rr = cfg.a_len() * r0;
      const double e1 = norm(interior_maxwell_residual(wi, pol, rr, 0.4, 1e-3 * cfg.a_len(), 2).curl_equation);
      const double e2 = norm(interior_maxwell_residual(wi, pol, rr, 0.4, 5e-4 * cfg.a_len(), 2).curl_equation);
      interior_order = std::min(interior_order, fd::convergence_order(e1, e2));
    }
    out.push_back(lower("order_interior_maxwell", interior_order, 1.9, "near the disk"));

    const SourceConfig c1({0, 0, 1}, 1.5);
    const double gap = bandpass_response(2, c1, Polarization(CVec3(Vec3{1, 0, 0}), c1), 0.5, 0.2, 0.1, 0.3).relative_gap;
    out.push_back(upper("bandpass_n2", gap, 1e-6, ts));
  }
  {
    // wave operator on g(t - r)/r away from the origin
    auto f = [](const Vec3& x, double t) {
      const double r = norm(x);
      return std::exp(-(t - r) * (t - r)) / r;
    };
    const Vec3 r{0.7, -0.4, 0.5};
    const double e1 = std::fabs(fd::wave_operator(f, r, 0.9, 2e-2, 4));
    const double e2 = std::fabs(fd::wave_operator(f, r, 0.9, 1e-2, 4));
    out.push_back(lower("order_fd_wave_operator", fd::convergence_order(e1, e2), 3.8));
    auto g = [](const Vec3& x, double) { return std::sin(x.x) * std::cos(2 * x.y) * std::exp(0.3 * x.z); };
    auto grad = [&](const Vec3& x, double t) { return fd::gradient(g, x, t, 1e-3); };
    out.push_back(upper("fd_curl_of_gradient", norm(fd::curl(grad, r, 0.0, 1e-3)), 1e-8, ts));
  }
  {
    const double eps = 0.1;
    const DrivingSignal p = DrivingSignal::sampled(SampledSignal::from_function(
        [eps](double t) { return eps / (kPi * (t * t + eps * eps)); }, -1000.0, 1000.0, 100001));
    const DrivingSignal c = DrivingSignal::cauchy(1);
    double worst = 0.0;
    for (cplx tau : {cplx(0.0, -0.5), cplx(1.3, -0.2), cplx(-4.0, -2.0)}) {
      worst = std::max(worst, std::abs(p.value(tau) - c.value(tau - cplx(0.0, eps))) / std::abs(c.value(tau - cplx(0.0, eps))));
    }
    out.push_back(upper("sampled_signal_poisson_oracle", worst, 1e-6, ts));
  }
  {
    std::size_t mismatches = 0;
    std::string detail = "avx2 unavailable; scalar only";
    if (kernels::avx2_supported()) {
      detail = "1000 points";
      std::mt19937_64 rng(seed++);
      const std::size_t m = 1000;
      std::vector<double> x(m), y(m), z(m), t(m);
      for (std::size_t i = 0; i < m; ++i) {
        const Vec3 p = random_point(rng, 3.0);
        x[i] = p.x;
        y[i] = i % 5 == 0 ? 0.0 : p.y;
        z[i] = i % 7 == 0 ? 0.0 : p.z;
        t[i] = p.x;
      }
      std::vector<double> s[2][2], f[2][6];
      for (int k = 0; k < 2; ++k) {
        const kernels::Isa isa = k == 0 ? kernels::Isa::Scalar : kernels::Isa::Avx2;
        s[k][0].resize(m);
        s[k][1].resize(m);
        for (auto& v : f[k]) v.resize(m);
        kernels::principal_distance(isa, cfg.a(), {x, y, z}, {s[k][0], s[k][1], {}, {}});
        const kernels::CauchyDrive drive{4, cfg.b(), cfg.c(), cfg.a(), default_pol(cfg).vector()};
        kernels::cauchy_field(isa, drive, {x, y, z}, t, s[0][0], s[0][1],
                              {{f[k][0], f[k][1], f[k][2]}, {f[k][3], f[k][4], f[k][5]}});
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (s[0][0][i] != s[1][0][i] || s[0][1][i] != s[1][1][i]) ++mismatches;
        for (int c = 0; c < 6; ++c) {
          if (!(f[0][c][i] == f[1][c][i]) && !(std::isnan(f[0][c][i]) && std::isnan(f[1][c][i]))) ++mismatches;
        }
      }
    }
    out.push_back(upper("simd_kernel_equivalence", static_cast<double>(mismatches), 0.0, 1.0, detail));
  }
  {
    RunConfig small = run;
    small.x = {-2.0, 2.0, 17};
    small.y = {-1.0, 1.0, 5};
    small.z = {-1.0, 3.0, 17};
    small.t = {0.0, 1.0, 3};
    SampleOptions serial{1, kernels::Isa::Scalar}, parallel{std::max(2u, opts.threads), kernels::default_isa()};
    const std::string a = to_csv(sample_field(small, serial)), b = to_csv(sample_field(small, parallel));
    out.push_back(upper("determinism_serial_parallel", a == b ? 0.0 : 1.0, 0.0, 1.0,
                        std::to_string(a.size()) + " bytes"));
  }
  return out;
}

std::string format_report(const std::vector<SuiteResult>& results) {
  std::string out;
  char buf[512];
  std::size_t failed = 0;
  for (const SuiteResult& r : results) {
    if (!r.passed) ++failed;
    std::snprintf(buf, sizeof buf, "%s %-36s measured=%-12.5g %s %-10.3g %s\n", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.measured, r.relation.c_str(), r.threshold, r.detail.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%zu suites, %zu failed\n", results.size(), failed);
  out += buf;
  return out;
}

}  // namespace emw::harness
