#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "emw/error.hpp"
#include "emw/fd_ops.hpp"
#include "emw/geometry.hpp"
#include "emw/scalar_wavelet.hpp"
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

ScalarWavelet make(int n, BranchCut cut = BranchCut::flat_disk(), double b = 1.5) {
  return ScalarWavelet(std::move(cut), SourceConfig({0, 0, 1}, b), DrivingSignal::cauchy(n));
}

}  // namespace

TEST_CASE("far-zone on-axis amplitude") {
  const ScalarWavelet w = make(1);
  for (double R : {1e3, 1e5}) {
    const cplx got = psi(w, {0, 0, R}, R);
    CHECK(rel_err(got, cplx(1.0 / (2 * kPi * 0.5 * R), 0.0)) < 2.0 / R);
  }
}

TEST_CASE("advanced branch and sigma derivatives") {
  const DrivingSignal c1 = DrivingSignal::cauchy(1);
  const cplx sigma(1.0, -0.5), tau(2.0, -2.0);
  CHECK(rel_err(psi_from_sigma(c1, -sigma, tau).psi, -c1.value(tau + sigma) / sigma) < 1e-15);

  const double h = 1e-5;
  const cplx fd1 = (psi_from_sigma(c1, sigma + h, tau).psi - psi_from_sigma(c1, sigma - h, tau).psi) / (2 * h);
  const PsiDerivs d = psi_from_sigma(c1, sigma, tau);
  CHECK(rel_err(d.d1, fd1) < 1e-7);
  const cplx fd2 = (psi_from_sigma(c1, sigma + h, tau).d1 - psi_from_sigma(c1, sigma - h, tau).d1) / (2 * h);
  CHECK(rel_err(d.d2, fd2) < 1e-7);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n : {1, 4, 9}) {
    const DrivingSignal c = DrivingSignal::cauchy(n);
    for (int i = 0; i < 500; ++i) {
      const cplx s(u(rng), u(rng) * 0.3);
      const cplx t(u(rng), -1.5);
      if (std::abs(s) < 0.1) continue;
      const PsiDerivs p = psi_from_sigma(c, s, t);
      const cplx gdd = c.eval(t - s).ddg;
      CHECK(std::abs(p.d2 * s - gdd + 2.0 * p.d1) <= 1e-12 * (std::abs(gdd) + std::abs(p.d2 * s)));
    }
  }
  // Leading far-zone falloff of the first derivative.
  const cplx big(1e6, -0.3);
  const cplx tau_big = tau + big;
  CHECK(rel_err(psi_from_sigma(c1, big, tau_big).d1, -c1.eval(tau_big - big).dg / big) < 1e-5);
}

TEST_CASE("interior combination") {
  const DrivingSignal c = DrivingSignal::cauchy(3);
  const cplx sigma(0.6, -0.4), tau(0.3, -1.5);
  const cplx direct = (c.value(tau - sigma) - c.value(tau + sigma)) / sigma;
  CHECK(rel_err(interior_psi_from_sigma(c, sigma, tau), direct) < 1e-14);
  CHECK(rel_err(interior_psi_from_sigma(c, -sigma, tau), direct) < 1e-14);
  CHECK(rel_err(interior_psi_from_sigma(c, sigma, tau), mixed_signals(c, sigma, tau).gm / sigma) < 1e-14);
  // Series: [g(t-s) - g(t+s)]/s = -2 g' - s^2 g'''/3 + ...
  const SignalDerivs d = c.eval(tau);
  CHECK(rel_err(interior_psi_from_sigma(c, 0.0, tau), -2.0 * d.dg) < 1e-15);
  const cplx small(1e-4, 0.0);
  CHECK(rel_err(interior_psi_from_sigma(c, small, tau), -2.0 * d.dg) < 1e-7);
}

TEST_CASE("wavelet is discontinuous across the disk while the interior combination is not") {
  const ScalarWavelet w = make(1);
  for (Vec3 base : {Vec3{0.3, 0.2, 0.0}, Vec3{-0.7, 0.1, 0.0}, Vec3{0.0, 0.0, 0.0}}) {
    const Vec3 up = base + Vec3{0, 0, 1e-10}, down = base - Vec3{0, 0, 1e-10};
    const cplx pu = psi(w, up, 0.4), pd = psi(w, down, 0.4);
    CHECK(std::abs(pu - pd) > 0.1 * std::abs(pu));
    const cplx iu = interior_psi(w, up, 0.4), id = interior_psi(w, down, 0.4);
    CHECK(std::abs(iu - id) <= 1e-8 * std::abs(iu));
  }
  // Across an upper spheroid the same holds.
  const double alpha = 0.4;
  const ScalarWavelet ws = make(1, BranchCut::upper_spheroid(alpha));
  const SourceConfig& cfg = ws.config();
  for (double q : {0.2, 0.5, 0.9}) {
    const Vec3 s = spheroid_point(alpha, q, 1.1, cfg);
    const ComplexDistanceSample fr = frame(s, cfg);
    const Vec3 n = fr.e_p;
    const Vec3 up = s + 1e-7 * n, down = s - 1e-7 * n;
    const cplx pu = psi(ws, up, 0.2), pd = psi(ws, down, 0.2);
    CHECK(std::abs(pu - pd) > 0.1 * std::abs(pu));
    CHECK(std::abs(interior_psi(ws, up, 0.2) - interior_psi(ws, down, 0.2)) <= 1e-5 * std::abs(interior_psi(ws, up, 0.2)));
  }
}

TEST_CASE("guards") {
  const ScalarWavelet w = make(1);
  CHECK(throws_code(ErrorCode::OnBranchCircle, [&] { psi(w, {1.0, 0.0, 0.0}, 0.0); }));
  CHECK(throws_code(ErrorCode::OnBranchCircle, [&] { interior_psi(w, {0.0, 1.0, 0.0}, 0.0); }));
  const ScalarWavelet ws = make(1, BranchCut::upper_spheroid(0.3));
  const Vec3 on = spheroid_point(0.3, 0.5, 0.2, ws.config());
  CHECK(throws_code(ErrorCode::OnCut, [&] { psi(ws, on, 0.0); }));
  CHECK(throws_code(ErrorCode::TooCloseToCut, [&] { wave_residual(w, {0.2, 0.0, 0.003}, 0.0, 1e-3); }));
  CHECK(throws_code(ErrorCode::TooCloseToCut, [&] { interior_wave_residual(w, {1.0, 0.0, 0.003}, 0.0, 1e-3); }));
  const DrivingSignal sampled = DrivingSignal::sampled(
      SampledSignal::from_function([](double t) { return std::exp(-t * t); }, -8.0, 8.0, 161));
  CHECK(throws_code(ErrorCode::OutsideQuadratureWindow,
                    [&] { ScalarWavelet(BranchCut::flat_disk(), SourceConfig({0, 0, 1}, 1.1), sampled); }));
}

TEST_CASE("wave residual converges at second order off the cut") {
  std::mt19937_64 rng(5);
  for (int n : {1, 4}) {
    const ScalarWavelet w = make(n);
    int tested = 0;
    while (tested < 20) {
      const Vec3 r = emw::testing::random_point(rng, -2.0, 2.0);
      if (cut_distance(w.cut(), r, w.config()) < 0.1) continue;
      const double t = std::uniform_real_distribution<double>(-1.0, 2.0)(rng);
      const double e1 = std::abs(wave_residual(w, r, t, 1e-2, 2));
      const double e2 = std::abs(wave_residual(w, r, t, 5e-3, 2));
      const double e3 = std::abs(wave_residual(w, r, t, 2.5e-3, 2));
      CHECK(fd::convergence_order(e1, e2) > 1.9);
      CHECK(fd::convergence_order(e2, e3) > 1.9);
      ++tested;
    }
  }
}

TEST_CASE("fourth-order residual is far below the wavelet scale") {
  const ScalarWavelet w = make(4);
  const Vec3 r{0.4, -0.3, 0.8};
  const double scale = std::abs(psi_sigma_derivs(w, r, 0.5).d2);
  CHECK(std::abs(wave_residual(w, r, 0.5, 1e-3)) < 1e-8 * scale);
}

TEST_CASE("interior wavelet is sourceless near the disk") {
  const ScalarWavelet w = make(1);
  for (Vec3 r : {Vec3{0.3, 0.0, 0.005}, Vec3{0.0, -0.5, -0.004}, Vec3{0.0, 0.0, 0.0}}) {
    const double e1 = std::abs(interior_wave_residual(w, r, 0.2, 1e-2, 2));
    const double e2 = std::abs(interior_wave_residual(w, r, 0.2, 5e-3, 2));
    CHECK(fd::convergence_order(e1, e2) > 1.9);
  }
}

TEST_CASE("far-zone time spectrum has no negative frequencies") {
  const ScalarWavelet w = make(4);
  const Vec3 r{0.5, 0.3, 20.0};
  const double dt = 0.05, T = 2000.0;
  const auto count = static_cast<std::size_t>(2 * T / dt) + 1;
  std::vector<cplx> samples(count);
  for (std::size_t k = 0; k < count; ++k) samples[k] = psi(w, r, -T + 20.0 + dt * static_cast<double>(k));
  double neg = 0.0, total = 0.0;
  for (int j = -160; j <= 160; ++j) {
    const double omega = 0.05 * j;
    cplx acc{};
    for (std::size_t k = 0; k < count; ++k) {
      const double t = -T + dt * static_cast<double>(k);
      acc += std::polar(1.0, omega * t) * samples[k];
    }
    const double e = std::norm(acc * dt);
    total += e;
    if (j < 0) neg += e;
  }
  CHECK(neg < 1e-6 * total);
}
