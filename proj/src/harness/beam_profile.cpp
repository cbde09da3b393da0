#include "emw/harness/beam_profile.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "emw/error.hpp"
#include "emw/harness/fourier.hpp"
#include "emw/harness/sampling.hpp"
#include "emw/signals.hpp"

namespace emw::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel_gap(double meas, double pred) { return std::fabs(meas - pred) / std::fabs(pred); }

// Root of f in [lo, hi] where f changes sign.
double bracket_root(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(48);
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

PulseMeasurement measure_pulse(const std::function<double(double)>& amplitude, int n, double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "empty search window");
  const int samples = 2001;
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k < samples; ++k) {
    const double v = amplitude(lo + (hi - lo) * k / (samples - 1));
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  const double step = (hi - lo) / (samples - 1);
  const double a = lo + step * std::max(0, best - 1), b = lo + step * std::min(samples - 1, best + 1);
  const auto peak = boost::math::tools::brent_find_minima([&](double t) { return -amplitude(t); }, a, b, 52);
  const double t0 = peak.first, m = -peak.second;
  const double level = m * std::pow(2.0, -0.5 * n);
  auto f = [&](double t) { return amplitude(t) - level; };
  // Walk outwards until the amplitude is below the level on each side.
  double right = step;
  while (f(t0 + right) > 0.0) right *= 2.0;
  double left = step;
  while (f(t0 - left) > 0.0) left *= 2.0;
  const double tr = bracket_root(f, t0, t0 + right);
  const double tl = bracket_root(f, t0 - left, t0);
  return {t0, m, 0.5 * (tr - tl)};
}

Vec3 FarZoneProbe::point(double theta) const {
  const double R = radius * cfg.a_len();
  return R * (std::sin(theta) * cfg.e1() + std::cos(theta) * cfg.axis());
}

double FarZoneProbe::amplitude(double theta, double t) const {
  const cplx sigma = complex_distance(BranchCut::flat_disk(), point(theta), cfg);
  return std::abs(cauchy_kernel(n, cplx(t, -cfg.b()) - sigma / cfg.c()).g);
}

PulseMeasurement FarZoneProbe::measure(double theta) const {
  const double R = radius * cfg.a_len();
  const double span = 8.0 * (std::fabs(cfg.b()) + cfg.a_len());
  return measure_pulse([&](double t) { return amplitude(theta, t); }, n, R / cfg.c() - span, R / cfg.c() + span);
}

double measured_diffraction_angle(const FarZoneProbe& probe, double beta) {
  const double m0 = probe.measure(0.0).peak;
  auto f = [&](double theta) { return std::log(probe.measure(theta).peak / m0) + beta; };
  if (f(kPi) > 0.0) return kNaN;
  return bracket_root(f, 0.0, kPi);
}

BeamProfile beam_profile(const SourceConfig& cfg, const BeamSpec& spec, unsigned threads) {
  const double a = cfg.a_len(), b = std::fabs(cfg.b());
  const auto thetas = spec.theta.values();
  const std::size_t norders = spec.orders.size();
  std::vector<std::vector<double>> angle_rows(norders * thetas.size());
  std::vector<std::vector<double>> order_rows(norders);

  parallel_blocks(norders, threads, [&](std::size_t i) {
    const int n = spec.orders[i];
    const FarZoneProbe probe{cfg, n, spec.radius};
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      const double th = thetas[k];
      const PulseMeasurement pm = probe.measure(th);
      const double tp = pulse_duration(th, a, b), mp = peak_strength(th, n, a, b);
      angle_rows[i * thetas.size() + k] = {static_cast<double>(n), th, tp, pm.duration, rel_gap(pm.duration, tp),
                                           mp, pm.peak, rel_gap(pm.peak, mp)};
    }
    double pred = kNaN;
    try {
      pred = diffraction_angle(spec.beta, n, a, b);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolution) throw;
    }
    const double meas = measured_diffraction_angle(probe, spec.beta);
    const SpectralProfile sp = spectral_profile(n, b);
    const DrivingSignal drive = DrivingSignal::cauchy(n);
    const SpectrumMoments mom = amplitude_moments(
        [&](double t) { return drive.value(cplx(t, -b)); }, (n + 10.0 * std::sqrt(n) + 30.0) / b);
    order_rows[i] = {static_cast<double>(n),  pred, meas, rel_gap(meas, pred), sp.center_frequency, mom.center,
                     rel_gap(mom.center, sp.center_frequency), sp.bandwidth, mom.width,
                     rel_gap(mom.width, sp.bandwidth)};
  });

  BeamProfile out;
  for (const auto& r : angle_rows) out.angles.append(r);
  for (const auto& r : order_rows) out.orders.append(r);
  return out;
}

}  // namespace emw::harness
