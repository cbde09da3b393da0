#include <cmath>
#include <random>

#include "doctest.h"
#include "emw/error.hpp"
#include "emw/geometry.hpp"
#include "test_support.hpp"

using namespace emw;
using emw::testing::random_point;
using emw::testing::random_unit;

namespace {

const SourceConfig kCfg({0.0, 0.0, 1.0}, 1.5);

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("source config validation") {
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { SourceConfig({0, 0, 0}, 1.0); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { SourceConfig({0, 0, 1}, 1.0); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { SourceConfig({0, 0, 1}, -0.5); }));
  CHECK_NOTHROW(SourceConfig({0, 0, 1}, -1.5));
  const SourceConfig tilted({1.0, 1.0, 0.5}, 2.0);
  CHECK(std::fabs(dot(tilted.e1(), tilted.axis())) < 1e-15);
  CHECK(std::fabs(norm(tilted.e2()) - 1.0) < 1e-15);
  CHECK(norm(cross(tilted.e1(), tilted.e2()) - tilted.axis()) < 1e-15);
}

TEST_CASE("principal complex distance examples") {
  const PrincipalDistance on_axis = complex_distance_principal({0, 0, 2}, kCfg);
  CHECK(on_axis.sigma == cplx(2.0, -1.0));
  CHECK(complex_distance_principal({1, 0, 0}, kCfg).sigma == cplx(0.0, 0.0));

  const PrincipalDistance above = complex_distance_principal({0.5, 0, 1e-9}, kCfg);
  CHECK(std::fabs(above.sigma.imag() + std::sqrt(0.75)) < 1e-8);
  CHECK(std::fabs(above.sigma.real()) < 1e-8);
  CHECK_FALSE(above.on_reference_cut);

  const PrincipalDistance on_disk = complex_distance_principal({0.5, 0, 0}, kCfg);
  CHECK(on_disk.on_reference_cut);
  CHECK(on_disk.sigma.imag() == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-15));

  const PrincipalDistance below = complex_distance_principal({0.5, 0, -1e-9}, kCfg);
  CHECK(below.sigma.imag() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-8));
}

TEST_CASE("sigma squared identity and bounds at random points") {
  std::mt19937_64 rng(11);
  const SourceConfig cfg({0.3, -0.4, 0.8}, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const Vec3 r = random_point(rng, -3.0, 3.0);
    const PrincipalDistance pd = complex_distance_principal(r, cfg);
    const cplx w(dot(r, r) - dot(cfg.a(), cfg.a()), -2.0 * dot(cfg.a(), r));
    worst = std::max(worst, std::abs(pd.sigma * pd.sigma - w) / std::abs(w));
    CHECK(pd.p >= 0.0);
    CHECK(std::fabs(pd.q) <= cfg.a_len() * (1 + 1e-15));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("far zone distance") {
  for (double theta : {0.0, 0.4, 1.3, 2.5, kPi}) {
    for (double R : {10.0, 100.0, 1000.0}) {
      const Vec3 r{R * std::sin(theta), 0.0, R * std::cos(theta)};
      const cplx s = complex_distance_principal(r, kCfg).sigma;
      CHECK(std::abs(s - cplx(R, -std::cos(theta))) <= 1.0 / R);
    }
  }
}

TEST_CASE("oblate coordinates") {
  const OblateCoords oc = to_oblate({0, 0, 2}, kCfg);
  CHECK(oc.p == 2.0);
  CHECK(oc.q == 1.0);
  CHECK(oc.phi == 0.0);
  CHECK(norm(from_oblate({0.0, 1.0, 2.3}, kCfg, Side::Upper)) < 1e-15);
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { from_oblate({1.0, 1.5, 0.0}, kCfg, Side::Upper); }));

  std::mt19937_64 rng(5);
  const SourceConfig cfg({0.2, 0.5, -0.7}, 1.2);
  const double a = cfg.a_len();
  for (int i = 0; i < 2000; ++i) {
    const Vec3 r = random_point(rng, -2.0, 2.0);
    const OblateCoords o = to_oblate(r, cfg);
    const Cylindrical c = to_cylindrical(r, cfg);
    CHECK(std::fabs(a * c.z - o.p * o.q) < 1e-12 * (1 + norm2(r)));
    CHECK(std::fabs(a * a * c.rho * c.rho - (o.p * o.p + a * a) * (a * a - o.q * o.q)) < 1e-12 * (1 + norm2(r)) * (1 + norm2(r)));
    const Vec3 back = from_oblate(o, cfg, c.z >= 0 ? Side::Upper : Side::Lower);
    CHECK(norm(back - r) < 1e-10 * (1 + norm(r)));
    const OblateCoords again = to_oblate(back, cfg);
    CHECK(std::fabs(again.p - o.p) < 1e-10);
    CHECK(std::fabs(std::fabs(again.q) - std::fabs(o.q)) < 1e-10);
  }
}

TEST_CASE("spheroid points") {
  const double alpha = 0.3;
  const Vec3 pole = spheroid_point(alpha, 1.0, 0.0, kCfg);
  CHECK(norm(pole - Vec3{0, 0, alpha}) < 1e-15);
  const Vec3 eq = spheroid_point(alpha, 0.0, 0.0, kCfg);
  CHECK(norm(eq - Vec3{std::sqrt(1 + alpha * alpha), 0, 0}) < 1e-15);
  const Vec3 mid = spheroid_point(alpha, 0.5, 1.0, kCfg);
  const double rho = std::hypot(mid.x, mid.y);
  CHECK(rho == doctest::Approx(std::sqrt(3.0 * (1 + alpha * alpha)) / 2.0).epsilon(1e-14));
  CHECK(rho * rho / (1 + alpha * alpha) + mid.z * mid.z / (alpha * alpha) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(complex_distance_principal(mid, kCfg).p == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { spheroid_point(0.1, 1.01, 0.0, kCfg); }));
}

TEST_CASE("smooth cut function") {
  const double alpha = 0.2, eps = 1e-3;
  CHECK(smooth_cut_function(0.0, alpha, eps) == 0.0);
  CHECK(smooth_cut_function(eps, alpha, eps) == doctest::Approx(alpha / 2).epsilon(1e-15));
  CHECK(smooth_cut_function(100 * eps, alpha, eps) == doctest::Approx(alpha * (1 - 2 / (100 * kPi))).epsilon(1e-6));
  CHECK(smooth_cut_function(-0.3, alpha, eps) == -smooth_cut_function(0.3, alpha, eps));
  // (1/pi) Im ln((eps + i q)/(eps - i q))
  const double q = 0.0137;
  const double direct = std::arg(cplx(eps, q) / cplx(eps, -q)) / kPi;
  CHECK(smooth_cut_function(q, alpha, eps) == doctest::Approx(alpha * direct).epsilon(1e-14));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { smooth_cut_function(0.1, 1.0, 0.0); }));
}

TEST_CASE("cut sign examples") {
  const BranchCut up = BranchCut::upper_spheroid(0.1);
  const BranchCut low = BranchCut::lower_spheroid(0.1);
  CHECK(cut_sign(up, {0, 0, 1000}, kCfg) == 1);
  CHECK(cut_sign(up, {3, -2, -50}, kCfg) == 1);
  CHECK(cut_sign(up, {0, 0, 0.05}, kCfg) == -1);
  CHECK(cut_sign(low, {0, 0, 0.05}, kCfg) == 1);
  CHECK(cut_sign(low, {0, 0, -0.05}, kCfg) == -1);
  CHECK(cut_sign(BranchCut::flat_disk(), {0, 0, 0.05}, kCfg) == 1);
  CHECK(cut_sign(up, {0.5, 0.0, 0.0}, kCfg) == -1);  // disk face belongs to V+ for the upper cut
  CHECK(cut_sign(low, {0.5, 0.0, 0.0}, kCfg) == 1);

  CHECK(complex_distance(BranchCut::flat_disk(), {0, 0, 2}, kCfg) == cplx(2, -1));
  const cplx s0 = complex_distance_principal({0, 0, 0.05}, kCfg).sigma;
  CHECK(complex_distance(up, {0, 0, 0.05}, kCfg) == -s0);
}

TEST_CASE("on-cut detection") {
  const BranchCut up = BranchCut::upper_spheroid(0.1);
  CHECK(throws_code(ErrorCode::OnCut, [&] { cut_sign(up, spheroid_point(0.1, 0.5, 0.3, kCfg), kCfg); }));
  CHECK(throws_code(ErrorCode::OnCut, [&] { cut_sign(up, {1.002, 0.0, 0.0}, kCfg); }));
  CHECK(throws_code(ErrorCode::OnCut, [&] { cut_sign(up, {0.0, 1.0, 0.0}, kCfg); }));
  CHECK_NOTHROW(cut_sign(up, spheroid_point(0.1 + 1e-6, 0.5, 0.3, kCfg), kCfg));
  const BranchCut low = BranchCut::lower_spheroid(0.1);
  CHECK(throws_code(ErrorCode::OnCut, [&] { cut_sign(low, spheroid_point(0.1, -0.5, 0.3, kCfg), kCfg); }));
  CHECK_NOTHROW(cut_sign(low, spheroid_point(0.1, 0.5, 0.3, kCfg), kCfg));
  const BranchCut loose = up.with_tolerance(1e-3);
  CHECK(throws_code(ErrorCode::OnCut, [&] { cut_sign(loose, spheroid_point(0.1 + 1e-4, 0.5, 0.3, kCfg), kCfg); }));
}

TEST_CASE("cut distance against brute force") {
  std::mt19937_64 rng(3);
  const BranchCut up = BranchCut::upper_spheroid(0.25);
  for (int i = 0; i < 200; ++i) {
    const Vec3 r = random_point(rng, -1.5, 1.5);
    double best = 1e300;
    for (int k = 0; k <= 20000; ++k) {
      const double q = k / 20000.0;
      const Vec3 s = spheroid_point(0.25, q, to_cylindrical(r, kCfg).phi, kCfg);
      best = std::min(best, norm(r - s));
    }
    const Cylindrical c = to_cylindrical(r, kCfg);
    const double big_a = std::sqrt(1 + 0.25 * 0.25);
    best = std::min(best, std::hypot(c.rho - std::clamp(c.rho, 1.0, big_a), c.z));
    CHECK(cut_distance(up, r, kCfg) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("straddle pairs flip sign") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(0.05, 0.98), uphi(0.0, 2 * kPi);
  const double alpha = 0.2, delta = 1e-7;
  const BranchCut up = BranchCut::upper_spheroid(alpha);
  for (int i = 0; i < 200; ++i) {
    const double q = uq(rng), phi = uphi(rng);
    const Vec3 s = spheroid_point(alpha, q, phi, kCfg);
    const Vec3 n = frame(s, kCfg).e_p;
    const cplx out = complex_distance(up, s + delta * n, kCfg);
    const cplx in = complex_distance(up, s - delta * n, kCfg);
    CHECK(std::abs(out + in) < 1e-4 * std::abs(out - in));
  }
}

TEST_CASE("path continuity off the cut and flip across it") {
  const BranchCut up = BranchCut::upper_spheroid(0.3);
  // From far away, around the rim, then up through the disk into V+: never touches the cut.
  const Vec3 waypoints[] = {{0, 0, 5}, {2, 0, -0.5}, {0.3, 0, -0.5}, {0.3, 0, 0.1}};
  cplx prev = complex_distance(up, waypoints[0], kCfg);
  const int steps = 2000;
  double worst = 0.0;
  for (int leg = 0; leg < 3; ++leg) {
    for (int k = 1; k <= steps; ++k) {
      const Vec3 r = waypoints[leg] + (static_cast<double>(k) / steps) * (waypoints[leg + 1] - waypoints[leg]);
      const cplx s = complex_distance(up, r, kCfg);
      worst = std::max(worst, std::abs(s - prev));
      prev = s;
    }
  }
  CHECK(worst < 0.01);
  CHECK(cut_sign(up, waypoints[3], kCfg) == -1);
  // Straight down the axis crosses S_alpha+ at z = 0.3.
  const cplx above = complex_distance(up, {0, 0, 0.3 + 1e-6}, kCfg);
  const cplx below = complex_distance(up, {0, 0, 0.3 - 1e-6}, kCfg);
  CHECK(std::abs(above + below) < 1e-5);
}

TEST_CASE("smooth cut approaches the upper spheroid away from the apron") {
  std::mt19937_64 rng(21);
  const double alpha = 0.3;
  const BranchCut up = BranchCut::upper_spheroid(alpha);
  const BranchCut sm = BranchCut::smooth_spheroid(alpha, 1e-7);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    const Vec3 r = random_point(rng, -1.5, 1.5);
    const Cylindrical c = to_cylindrical(r, kCfg);
    if (std::fabs(c.z) < 1e-3 || cut_distance(up, r, kCfg) < 1e-3) continue;
    CHECK(cut_sign(sm, r, kCfg) == cut_sign(up, r, kCfg));
    ++checked;
  }
  CHECK(checked > 2000);
}

TEST_CASE("custom cut: continuation agrees with the region test") {
  std::mt19937_64 rng(9);
  const double a = 1.0;
  auto chi = [](double q, double phi) { return (0.15 + 0.05 * std::cos(phi)) * std::tanh(q / 0.02); };
  const BranchCut cut = BranchCut::custom(chi, a);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec3 r = random_point(rng, -1.5, 1.5);
    if (cut_distance(cut, r, kCfg) < 1e-3) continue;
    const PrincipalDistance pd = complex_distance_principal(r, kCfg);
    const double phi = to_cylindrical(r, kCfg).phi;
    const int expected = pd.p - chi(pd.q, phi) < 0 ? -1 : 1;
    CHECK(cut_sign(cut, r, kCfg) == expected);
    ++checked;
  }
  CHECK(checked > 300);

  // A custom cut shaped like the upper spheroid matches the built-in kind.
  const BranchCut like_up = BranchCut::custom([](double q, double) { return 0.2 * std::tanh(q / 1e-6); }, a);
  const BranchCut up = BranchCut::upper_spheroid(0.2);
  for (int i = 0; i < 200; ++i) {
    const Vec3 r = random_point(rng, -1.5, 1.5);
    if (std::fabs(r.z) < 1e-3 || cut_distance(up, r, kCfg) < 1e-3) continue;
    CHECK(cut_sign(like_up, r, kCfg) == cut_sign(up, r, kCfg));
    CHECK(cut_sign_by_continuation(up, r, kCfg) == cut_sign(up, r, kCfg));
  }
}

TEST_CASE("custom cut validation") {
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { BranchCut::custom([](double q, double) { return q * q; }, 1.0); }));
  CHECK(throws_code(ErrorCode::InvalidArgument,
                    [] { BranchCut::custom([](double q, double phi) { return q * (1 + phi); }, 1.0); }));
  CHECK_NOTHROW(BranchCut::custom([](double q, double phi) { return q * (2 + std::sin(phi)); }, 1.0));
}

TEST_CASE("frame examples and appendix identities") {
  const ComplexDistanceSample f = frame({0, 0, 2}, kCfg);
  CHECK(norm(f.grad_p - Vec3{0, 0, 1}) < 1e-15);
  CHECK(norm(f.grad_q) < 1e-15);
  CHECK(norm(f.e_q) == 0.0);
  CHECK(throws_code(ErrorCode::OnBranchCircle, [] { frame({1, 0, 0}, kCfg); }));

  std::mt19937_64 rng(13);
  const SourceConfig cfg({-0.3, 0.6, 0.2}, 1.0);
  const double a2 = dot(cfg.a(), cfg.a());
  for (int i = 0; i < 5000; ++i) {
    const Vec3 r = random_point(rng, -2.0, 2.0);
    const ComplexDistanceSample s = frame(r, cfg);
    const double gp2 = norm2(s.grad_p), gq2 = norm2(s.grad_q);
    const double scale = gp2 + gq2;
    const double d2 = s.p * s.p + s.q * s.q;
    CHECK(std::abs(dot(s.u, s.u) - 1.0) < 1e-12 * scale);
    CHECK(std::fabs(gp2 - gq2 - 1.0) < 1e-12 * scale);
    CHECK(std::fabs(dot(s.grad_p, s.grad_q)) < 1e-12 * scale);
    CHECK(std::fabs(gp2 - (s.p * s.p + a2) / d2) < 1e-12 * scale);
    CHECK(std::fabs(gq2 - (a2 - s.q * s.q) / d2) < 1e-12 * scale);
    CHECK(norm(s.e_p - s.grad_p / std::sqrt(gp2)) < 1e-12);
    // u = z / sigma
    const CVec3 z = CVec3::from_parts(r, -cfg.a());
    CHECK(norm(s.u - z / s.sigma) < 1e-12 * norm(s.u));
  }
}

TEST_CASE("signed frame flips with the branch") {
  const BranchCut up = BranchCut::upper_spheroid(0.1);
  const ComplexDistanceSample s0 = frame({0.2, 0.0, 0.05}, kCfg);
  const ComplexDistanceSample sb = frame(up, {0.2, 0.0, 0.05}, kCfg);
  CHECK(sb.sigma == -s0.sigma);
  CHECK(norm(sb.u + s0.u) == 0.0);
  CHECK(norm(sb.e_p - s0.e_p) == 0.0);
}
