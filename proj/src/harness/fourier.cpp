#include "emw/harness/fourier.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <algorithm>
#include <array>
#include <cmath>

#include "emw/error.hpp"

namespace emw::harness {

namespace bq = boost::math::quadrature;

namespace {

// Which of (Re even, Im even, Re odd, Im odd) carry weight. Ooura's rules stop on relative change, so an
// identically zero part would run to the maximum level; parts below 1e-14 of the largest on a log-spaced
// probe from 1e-4 to 1e4 are dropped.
std::array<bool, 4> live_parts(const TimeSignal& f) {
  std::array<double, 4> peak{};
  for (int k = 0; k <= 160; ++k) {
    const double t = std::pow(10.0, -4.0 + 0.05 * k);
    const cplx fp = f(t), fm = f(-t);
    const cplx e = fp + fm, o = fp - fm;
    const double v[4] = {std::fabs(e.real()), std::fabs(e.imag()), std::fabs(o.real()), std::fabs(o.imag())};
    for (int i = 0; i < 4; ++i) peak[i] = std::max(peak[i], v[i]);
  }
  const double top = *std::max_element(peak.begin(), peak.end());
  std::array<bool, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = peak[i] > 1e-14 * top;
  return out;
}

cplx transform(const TimeSignal& f, double omega, const std::array<bool, 4>& live) {
  auto even = [&](double t) { return f(t) + f(-t); };
  auto odd = [&](double t) { return f(t) - f(-t); };
  if (omega == 0.0) {
    thread_local bq::exp_sinh<double> half_line;
    const double re = live[0] ? half_line.integrate([&](double t) { return even(t).real(); }, 1e-10) : 0.0;
    const double im = live[1] ? half_line.integrate([&](double t) { return even(t).imag(); }, 1e-10) : 0.0;
    return {re, im};
  }
  thread_local bq::ooura_fourier_cos<double> cos_rule(1e-7);
  thread_local bq::ooura_fourier_sin<double> sin_rule(1e-7);
  const double w = std::fabs(omega);
  const double s = omega > 0.0 ? 1.0 : -1.0;
  const double c_re = live[0] ? cos_rule.integrate([&](double t) { return even(t).real(); }, w).first : 0.0;
  const double c_im = live[1] ? cos_rule.integrate([&](double t) { return even(t).imag(); }, w).first : 0.0;
  const double s_re = live[2] ? s * sin_rule.integrate([&](double t) { return odd(t).real(); }, w).first : 0.0;
  const double s_im = live[3] ? s * sin_rule.integrate([&](double t) { return odd(t).imag(); }, w).first : 0.0;
  const cplx out(c_re - s_im, c_im + s_re);
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
    throw Error(ErrorCode::QuadratureDivergence, "Fourier integral did not converge");
  }
  return out;
}

}  // namespace

cplx fourier_transform(const TimeSignal& f, double omega) { return transform(f, omega, live_parts(f)); }

SpectrumMoments amplitude_moments(const TimeSignal& f, double omega_max) {
  if (!(omega_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega_max must be positive");
  const auto live = live_parts(f);
  double m[3] = {0.0, 0.0, 0.0};
  // One pass over the quadrature nodes feeds all three moments.
  const std::size_t pieces = 8;
  for (std::size_t p = 0; p < pieces; ++p) {
    const double lo = omega_max * p / pieces, hi = omega_max * (p + 1) / pieces;
    const auto& x = bq::gauss<double, 20>::abscissa();
    const auto& wt = bq::gauss<double, 20>::weights();
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        if (i == 0 && s < 0.0 && x[0] == 0.0) continue;
        const double w = mid + s * half * x[i];
        const double amp = std::abs(transform(f, w, live)) * wt[i] * half;
        m[0] += amp;
        m[1] += amp * w;
        m[2] += amp * w * w;
      }
    }
  }
  if (!(m[0] > 0.0)) throw Error(ErrorCode::QuadratureDivergence, "empty positive-frequency spectrum");
  const double center = m[1] / m[0];
  return {center, std::sqrt(std::max(0.0, m[2] / m[0] - center * center))};
}

double negative_frequency_fraction(const TimeSignal& f, double omega_max, int count) {
  if (!(omega_max > 0.0) || count < 1) throw Error(ErrorCode::InvalidArgument, "need omega_max > 0 and count >= 1");
  const auto live = live_parts(f);
  double neg = 0.0, total = 0.0;
  for (int j = -count; j <= count; ++j) {
    if (j == 0) continue;
    const double e = std::norm(transform(f, omega_max * j / count, live));
    total += e;
    if (j < 0) neg += e;
  }
  return total > 0.0 ? neg / total : 0.0;
}

}  // namespace emw::harness
