#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "emw/error.hpp"
#include "emw/fd_ops.hpp"
#include "emw/surface_sources.hpp"
#include "test_support.hpp"

using namespace emw;
using emw::testing::rel_err;

namespace {

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

const SourceConfig kCfg({0, 0, 1}, 1.5);

ScalarWavelet make(int n, const SourceConfig& cfg = kCfg) {
  return ScalarWavelet(BranchCut::flat_disk(), cfg, DrivingSignal::cauchy(n));
}

Polarization pol_mixed(const SourceConfig& cfg = kCfg) {
  return Polarization(CVec3{cplx(1, 0.3), cplx(-0.4, 0.8), cplx(0)}, cfg);
}

double sample_norm(const SurfaceSourceSample& s) { return std::sqrt(std::norm(s.j0) + norm2(s.j)); }

double sample_gap(const SurfaceSourceSample& x, const SurfaceSourceSample& y) {
  return std::sqrt(std::norm(x.j0 - y.j0) + norm2(x.j - y.j)) / sample_norm(y);
}

}  // namespace

TEST_CASE("impulse coefficients match the generic path") {
  const DrivingSignal c1 = DrivingSignal::cauchy(1);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  int tested = 0;
  while (tested < 10000) {
    const cplx sigma(u(rng), u(rng));
    const cplx tau(u(rng), -1.0 - std::fabs(u(rng)));
    if (std::abs(sigma) < 0.1) continue;
    if (std::abs(tau * tau - sigma * sigma) < 1e-2 * (std::norm(tau) + std::norm(sigma))) continue;
    const TildeLMN g = tilde_lmn(c1, sigma, tau), c = impulse_tilde_lmn(sigma, tau);
    worst = std::max({worst, rel_err(c.L, g.L), rel_err(c.M, g.M), rel_err(c.N, g.N)});
    ++tested;
  }
  CHECK(worst <= 1e-11);
  CHECK(throws_code(ErrorCode::LightConePole, [] { impulse_tilde_lmn(cplx(1, -0.5), cplx(1, -0.5)); }));
  CHECK(throws_code(ErrorCode::LightConePole, [&] { tilde_lmn(c1, cplx(1, -0.5), cplx(-1, 0.5)); }));
  // Large |tau|: L ~ 3 / (i pi sigma^3 tau)
  const cplx s(0.7, -0.2), big(1e4, -1.0);
  CHECK(rel_err(impulse_tilde_lmn(s, big).L, 3.0 / (kI * kPi * s * s * s * big)) < 1e-7);
}

TEST_CASE("tilde coefficients from the branch pair") {
  for (int n : {1, 3}) {
    const DrivingSignal c = DrivingSignal::cauchy(n);
    const cplx sigma(0.6, -0.7), tau(0.4, -1.5);
    const TildeLMN t = tilde_lmn(c, sigma, tau);
    const LMN p = lmn(c, sigma, tau), m = lmn(c, -sigma, tau);
    CHECK(rel_err(t.L, p.L - m.L) < 1e-13);
    CHECK(rel_err(t.M, p.M - m.M) < 1e-13);
    CHECK(rel_err(t.N, p.N + m.N) < 1e-13);
    const MixedSignals ms = mixed_signals(c, sigma, tau);
    const cplx s2 = sigma * sigma;
    CHECK(std::abs((t.L - t.M) - (2.0 * ms.dgm / s2 + 2.0 * ms.gp / (s2 * sigma))) < 1e-13 * std::abs(t.L));
    const TildeLMN r = tilde_lmn(c, -sigma, tau);
    CHECK(rel_err(r.L, -t.L) < 1e-14);
    CHECK(rel_err(r.M, -t.M) < 1e-14);
    CHECK(rel_err(r.N, t.N) < 1e-14);
  }
}

TEST_CASE("exact sources equal the two-branch definition") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {1, 4}) {
    const ScalarWavelet w = make(n);
    const Polarization pol = pol_mixed();
    for (int i = 0; i < 200; ++i) {
      const double alpha = 0.01 + 0.5 * u(rng);
      const double q = (2 * u(rng) - 1) * 0.98;
      const double phi = 2 * kPi * u(rng);
      const double t = 4 * u(rng) - 2;
      const SurfaceSourceSample s = surface_sources_exact(w, pol, q, phi, alpha, t);
      const Vec3 r = spheroid_point(alpha, q, phi, kCfg);
      const ComplexDistanceSample fr = frame(r, kCfg);
      CHECK(std::abs(fr.sigma - cplx(alpha, -q)) < 1e-12);
      const cplx tau(t, -kCfg.b());
      const CVec3 jump = field_from_sigma(w.signal(), fr.sigma, fr.u, tau, pol.vector()) -
                         field_from_sigma(w.signal(), -fr.sigma, -fr.u, tau, pol.vector());
      const CVec3 ep(fr.e_p);
      const cplx j0 = dot(ep, jump);
      const CVec3 j = -kI * cross(ep, jump);
      const double scale = std::sqrt(std::norm(j0) + norm2(j));
      CHECK(std::abs(s.j0 - j0) <= 1e-10 * scale);
      CHECK(norm(s.j - j) <= 1e-10 * scale);
      // Tangency.
      CHECK(std::abs(dot(ep, s.j)) <= 1e-14 * scale);
    }
  }
}

TEST_CASE("jump equals exterior minus interior of the joint field") {
  const double alpha = 0.2;
  const ScalarWavelet w(BranchCut::upper_spheroid(alpha).with_tolerance(1e-13), kCfg, DrivingSignal::cauchy(2));
  const Polarization pol = pol_mixed();
  for (double q : {0.3, -0.6, 0.9}) {
    const SurfacePoint sp = surface_point(kCfg, alpha, q, 0.8);
    const double d = 1e-8;
    const CVec3 out = joint_field(w, pol, sp.position + d * sp.e_p, 0.3);
    const CVec3 in = joint_field(w, pol, sp.position - d * sp.e_p, 0.3);
    const CVec3 jump = field_jump(w, pol, q, 0.8, alpha, 0.3);
    CHECK(norm((out - in) - jump) <= 1e-6 * norm(jump));
  }
}

TEST_CASE("general mu, nu jump") {
  const ScalarWavelet w = make(2);
  const Polarization pol = pol_mixed();
  SurfaceOptions o;
  o.mu = 1.5;
  o.nu = 0.5;
  const SurfacePoint sp = surface_point(kCfg, 0.1, 0.4, 1.0);
  const cplx tau(0.2, -1.5);
  const CVec3 want = 1.5 * field_from_sigma(w.signal(), sp.sigma, sp.u, tau, pol.vector()) -
                     0.5 * field_from_sigma(w.signal(), -sp.sigma, -sp.u, tau, pol.vector());
  CHECK(rel_err(field_jump(w, pol, 0.4, 1.0, 0.1, 0.2, o), want) < 1e-15);
  o.nu = 1.0;
  CHECK(throws_code(ErrorCode::InvalidArgument, [&] { field_jump(w, pol, 0.4, 1.0, 0.1, 0.2, o); }));
}

TEST_CASE("surface guards") {
  const ScalarWavelet w = make(1);
  const Polarization pol = pol_mixed();
  CHECK(throws_code(ErrorCode::NearRim, [&] { surface_sources_approx(w, pol, 0.05, 0.0, 0.01, 0.0); }));
  CHECK_NOTHROW(surface_sources_exact(w, pol, 0.05, 0.0, 0.01, 0.0));
  SurfaceOptions o;
  o.q_min = 0.2;
  CHECK(throws_code(ErrorCode::NearRim, [&] { surface_sources_exact(w, pol, -0.1, 0.0, 0.01, 0.0, o); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [&] { surface_sources_exact(w, pol, 1.5, 0.0, 0.01, 0.0); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [&] { surface_sources_exact(w, pol, 0.5, 0.0, 0.0, 0.0); }));
}

TEST_CASE("approximate sources track the exact ones on a flat spheroid") {
  const ScalarWavelet w = make(4);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Polarization pol(emw::testing::random_cvec(rng), kCfg);
    const double q = (u(rng) < 0.5 ? -1 : 1) * (0.2 + 0.8 * u(rng));
    const double phi = 2 * kPi * u(rng);
    const double t = 4 * u(rng) - 2;
    const SurfaceSourceSample ex = surface_sources_exact(w, pol, q, phi, 0.01, t);
    const SurfaceSourceSample ap = surface_sources_approx(w, pol, q, phi, 0.01, t);
    worst = std::max(worst, sample_gap(ap, ex));
  }
  CHECK(worst <= 0.1);

  // The gap shrinks as the spheroid flattens.
  const Polarization pol = pol_mixed();
  double prev = 1e9;
  for (double alpha : {0.08, 0.04, 0.02, 0.01}) {
    double g = 0.0;
    for (double q : {0.5, 0.7, -0.6, 0.95}) {
      g = std::max(g, sample_gap(surface_sources_approx(w, pol, q, 0.3, alpha, 0.1),
                                 surface_sources_exact(w, pol, q, 0.3, alpha, 0.1)));
    }
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("approximate charge with azimuthal polarization") {
  const ScalarWavelet w = make(1);
  const double phi = 0.7, q = 0.5, alpha = 0.01;
  const Polarization pol(CVec3(e_phi(phi, kCfg)), kCfg);
  const SurfaceSourceSample ap = surface_sources_approx(w, pol, q, phi, alpha, 0.2);
  const TildeLMN k = tilde_lmn(w.signal(), cplx(alpha, -q), cplx(0.2, -1.5));
  const cplx s(alpha, -q);
  const double rho = std::sqrt(1 - q * q);
  CHECK(rel_err(ap.j0, k.N * s * rho / (s * std::abs(s))) < 1e-14);
}

TEST_CASE("surface charge conservation away from the rim") {
  const ScalarWavelet w = make(4);
  const Polarization pol = pol_mixed();
  const double alpha = 0.3, a = 1.0;
  const double A = std::sqrt(alpha * alpha + a * a);
  auto residual = [&](double q, double phi, double t, double h) {
    auto src = [&](double qq, double pp, double tt) { return surface_sources_exact(w, pol, qq, pp, alpha, tt); };
    // Metric factors of the spheroid p = alpha in (q, phi).
    auto tq = [&](double qq, double pp) {
      const double s = std::sqrt(a * a - qq * qq);
      return Vec3{-A * qq / (a * s) * std::cos(pp), -A * qq / (a * s) * std::sin(pp), alpha / a};
    };
    auto hphi = [&](double qq) { return A * std::sqrt(a * a - qq * qq) / a; };
    auto flux_q = [&](double qq) {
      const Vec3 tv = tq(qq, phi);
      return hphi(qq) * dot(src(qq, phi, t).j, CVec3(tv / norm(tv)));
    };
    auto flux_phi = [&](double pp) {
      return norm(tq(q, pp)) * dot(src(q, pp, t).j, CVec3(e_phi(pp, kCfg)));
    };
    const cplx div = (fd::derivative(flux_q, q, h, 2) + fd::derivative(flux_phi, phi, h, 2)) /
                     (norm(tq(q, phi)) * hphi(q));
    const cplx dt = fd::derivative([&](double tt) { return src(q, phi, tt).j0; }, t, h, 2);
    return std::abs(dt + div);
  };
  for (auto [q, phi, t] : {std::tuple{0.5, 0.3, 0.1}, std::tuple{-0.4, 2.0, -0.5}, std::tuple{0.8, 4.0, 0.7}}) {
    const double e1 = residual(q, phi, t, 1e-2), e2 = residual(q, phi, t, 5e-3);
    CHECK(fd::convergence_order(e1, e2) > 1.9);
  }
}

TEST_CASE("band-pass responses from the impulse response") {
  const Polarization pol = pol_mixed();
  const BandpassResponse b1 = bandpass_response(1, kCfg, pol, 0.5, 0.2, 0.1, 0.3);
  CHECK(b1.relative_gap < 1e-13);
  const BandpassResponse b2 = bandpass_response(2, kCfg, pol, 0.5, 0.2, 0.1, 0.3);
  CHECK(b2.relative_gap < 1e-6);
  const BandpassResponse b4 = bandpass_response(4, kCfg, pol, 0.5, 0.2, 0.1, 0.3);
  CHECK(b4.relative_gap < 1e-3);
  for (double q : {0.3, -0.7, 0.99}) {
    for (double t : {-3.0, 0.0, 2.0}) {
      const BandpassResponse r = bandpass_response(4, kCfg, pol, q, 1.0, 0.05, t);
      CHECK(std::isfinite(std::abs(r.direct.j0)));
      CHECK(is_finite(r.direct.j));
    }
  }
}

TEST_CASE("Coulomb field faces and disk sources") {
  const double d32 = std::pow(0.75, 1.5);
  const CVec3 up = coulomb_field({0.5, 0, 1e-13}, {0, 0, 1});
  const CVec3 down = coulomb_field({0.5, 0, -1e-13}, {0, 0, 1});
  const CVec3 want_up = CVec3::from_parts({0, 0, -1}, {-0.5, 0, 0}) / (4 * kPi * d32);
  CHECK(norm(up - want_up) < 1e-10);
  CHECK(norm(down + want_up) < 1e-10);

  const CoulombDiskSources c0 = coulomb_disk_sources(0.0, 1.0);
  CHECK(c0.j0 == -1.0 / (2 * kPi));
  CHECK(c0.j_phi == 0.0);
  CHECK(coulomb_disk_sources(0.3, 2.0).angular_velocity == 0.5);
  CHECK(coulomb_disk_sources(0.3, 2.0).velocity == doctest::Approx(0.15));
  CHECK(throws_code(ErrorCode::RimSingularity, [] { coulomb_disk_sources(1.0, 1.0); }));

  // Field jump across the disk equals the disk charge density.
  for (double rho : {0.0, 0.3, 0.8}) {
    const CVec3 jump = coulomb_field({rho, 0, 1e-13}, {0, 0, 1}) - coulomb_field({rho, 0, -1e-13}, {0, 0, 1});
    const CoulombDiskSources cs = coulomb_disk_sources(rho, 1.0);
    CHECK(jump.z.real() == doctest::Approx(cs.j0).epsilon(1e-9));
    CHECK(std::fabs(jump.z.imag()) < 1e-9);
    // j = -i e_z x jump
    const CVec3 j = -kI * cross(CVec3(Vec3{0, 0, 1}), jump);
    CHECK(j.y.real() == doctest::Approx(cs.j_phi).epsilon(1e-9));
  }
}

TEST_CASE("Coulomb sources on flattening spheroids") {
  std::vector<double> magnetic_prev(20, 1e9), electric_gap_prev(20, 1e9);
  for (int level = 2; level <= 4; ++level) {
    const double alpha = std::ldexp(1.0, -level);
    for (int i = 0; i < 20; ++i) {
      const double q = 0.45 + 0.025 * i;
      const SurfaceSourceSample s = coulomb_surface_sources(kCfg, q, 0.4 * i, alpha);
      const double magnetic = std::hypot(s.magnetic_charge(), norm(s.magnetic_current()));
      CHECK(magnetic < magnetic_prev[i]);
      magnetic_prev[i] = magnetic;
      const double rho = std::sqrt(1 - q * q);
      const double gap = std::fabs(s.electric_charge() - coulomb_disk_sources(rho, 1.0).j0);
      CHECK(gap < electric_gap_prev[i]);
      electric_gap_prev[i] = gap;
    }
  }
}

TEST_CASE("total disk charge diverges at the rim") {
  auto midpoint = [](int cells) {
    double sum = 0.0;
    for (int k = 0; k < cells; ++k) {
      const double rho = (k + 0.5) / cells;
      sum += coulomb_disk_sources(rho, 1.0).j0 * 2 * kPi * rho / cells;
    }
    return sum;
  };
  double prev = 0.0;
  for (int cells : {100, 1000, 10000, 100000}) {
    const double q = midpoint(cells);
    CHECK(q < prev);
    prev = q;
  }
  CHECK(coulomb_disk_charge(0.0, 1.0) == 0.0);
  CHECK(coulomb_disk_charge(0.6, 1.0) == doctest::Approx(-0.25));
  CHECK(throws_code(ErrorCode::RimSingularity, [] { coulomb_disk_charge(1.0, 1.0); }));
}

TEST_CASE("effective aperture") {
  const EffectiveAperture e = effective_aperture(2.0, 1.0);
  CHECK(e.q_min == 0.5);
  CHECK(e.rho_max == doctest::Approx(std::sqrt(0.75)));
  CHECK(effective_aperture(1e8, 1.0).rho_max == doctest::Approx(1.0));
  CHECK(throws_code(ErrorCode::SubRadiating, [] { effective_aperture(1.0, 1.0); }));
  CHECK(effective_aperture(4.0, 1.0, 2.0).q_min == 0.5);
}
