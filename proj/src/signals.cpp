#include "emw/signals.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

#include "emw/error.hpp"

namespace emw {

namespace {

constexpr int kMaxCauchyOrder = 150;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx ipow(cplx x, int n) {
  cplx result(1.0, 0.0);
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

struct CauchySpec {
  int n;
};

struct SampledSpec {
  SampledSignal samples;
};

struct CombinationSpec {
  std::vector<SignalTerm> terms;
};

SignalDerivs eval_sampled(const SampledSignal& s, cplx tau) {
  const double h = s.dt();
  if (!(std::fabs(tau.imag()) >= 4.0 * h)) {
    throw Error(ErrorCode::OutsideQuadratureWindow,
                "|Im tau| = " + std::to_string(std::fabs(tau.imag())) + " is below 4 x sample spacing");
  }
  const auto& g0 = s.samples();
  const std::size_t n = g0.size();
  cplx s1{}, s2{}, s3{};
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 * g0[k] : g0[k];
    if (w == 0.0) continue;
    const cplx d = 1.0 / (tau - s.time(k));
    const cplx d2 = d * d;
    s1 += w * d;
    s2 += w * d2;
    s3 += w * (d2 * d);
  }
  const cplx scale = h / (2.0 * kPi * kI);
  return {scale * s1, -scale * s2, 2.0 * scale * s3};
}

}  // namespace

struct DrivingSignal::Impl {
  std::variant<CauchySpec, SampledSpec, CombinationSpec> spec;
};

SampledSignal::SampledSignal(double t0, double dt, std::vector<double> samples)
    : t0_(t0), dt_(dt), samples_(std::move(samples)) {
  if (!std::isfinite(t0) || !(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "sample grid needs finite start and positive spacing");
  }
  if (samples_.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite sample value");
  }
}

SampledSignal SampledSignal::from_function(const std::function<double(double)>& g0, double t_lo,
                                           double t_hi, std::size_t count) {
  if (count < 2 || !(t_hi > t_lo)) throw Error(ErrorCode::InvalidArgument, "bad sampling interval");
  const double dt = (t_hi - t_lo) / static_cast<double>(count - 1);
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = g0(t_lo + dt * static_cast<double>(k));
  return SampledSignal(t_lo, dt, std::move(v));
}

SampledSignal SampledSignal::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open signal file " + path.string());
  std::vector<double> ts;
  std::vector<double> vs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string t_text, v_text;
    if (!(fields >> t_text) || t_text[0] == '#') continue;
    if (!(fields >> v_text)) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    }
    char* end_t = nullptr;
    char* end_v = nullptr;
    const double t = std::strtod(t_text.c_str(), &end_t);
    const double v = std::strtod(v_text.c_str(), &end_v);
    if (*end_t != '\0' || *end_v != '\0') {
      if (ts.empty()) continue;  // header
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    ts.push_back(t);
    vs.push_back(v);
  }
  if (ts.size() < 2) throw Error(ErrorCode::InvalidArgument, "signal file needs at least two rows");
  const double dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  for (std::size_t k = 1; k < ts.size(); ++k) {
    if (std::fabs((ts[k] - ts[k - 1]) - dt) > 1e-6 * std::fabs(dt)) {
      throw Error(ErrorCode::InvalidArgument, "signal grid is not uniform near row " + std::to_string(k + 1));
    }
  }
  return SampledSignal(ts.front(), dt, std::move(vs));
}

SignalDerivs cauchy_kernel(int n, cplx tau) {
  if (tau == cplx(0.0, 0.0)) throw Error(ErrorCode::PoleOnPath, "Cauchy kernel evaluated at tau = 0");
  const cplx inv = 1.0 / (kI * tau);
  const cplx pn = ipow(inv, n);
  const double k0 = factorial(n - 1) / (2.0 * kPi);
  const double k1 = k0 * n;
  const double k2 = k1 * (n + 1);
  return {k0 * pn, -kI * (k1 * (pn * inv)), -k2 * (pn * inv * inv)};
}

DrivingSignal DrivingSignal::cauchy(int n) {
  if (n < 1 || n > kMaxCauchyOrder) throw Error(ErrorCode::InvalidArgument, "Cauchy order must be in [1, 150]");
  return DrivingSignal(std::make_shared<const Impl>(Impl{CauchySpec{n}}));
}

DrivingSignal DrivingSignal::sampled(SampledSignal samples) {
  double peak = 0.0;
  for (double v : samples.samples()) peak = std::max(peak, std::fabs(v));
  const double edge = std::max(std::fabs(samples.samples().front()), std::fabs(samples.samples().back()));
  if (edge > 1e-4 * peak) {
    throw Error(ErrorCode::QuadratureDivergence, "sampled signal does not decay at the grid ends");
  }
  return DrivingSignal(std::make_shared<const Impl>(Impl{SampledSpec{std::move(samples)}}));
}

DrivingSignal DrivingSignal::combination(std::vector<SignalTerm> terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "empty signal combination");
  for (const auto& t : terms) {
    if (!t.signal) throw Error(ErrorCode::InvalidArgument, "null signal in combination");
  }
  return DrivingSignal(std::make_shared<const Impl>(Impl{CombinationSpec{std::move(terms)}}));
}

SignalDerivs DrivingSignal::eval(cplx tau) const {
  return std::visit(
      [&](const auto& spec) -> SignalDerivs {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, CauchySpec>) {
          return cauchy_kernel(spec.n, tau);
        } else if constexpr (std::is_same_v<T, SampledSpec>) {
          return eval_sampled(spec.samples, tau);
        } else {
          SignalDerivs sum{};
          for (const auto& term : spec.terms) {
            const SignalDerivs d = term.signal->eval(tau);
            sum.g += term.coefficient * d.g;
            sum.dg += term.coefficient * d.dg;
            sum.ddg += term.coefficient * d.ddg;
          }
          return sum;
        }
      },
      impl_->spec);
}

std::optional<int> DrivingSignal::cauchy_order() const {
  if (const auto* c = std::get_if<CauchySpec>(&impl_->spec)) return c->n;
  return std::nullopt;
}

double DrivingSignal::min_imaginary_time() const {
  return std::visit(
      [](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, CauchySpec>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SampledSpec>) {
          return 4.0 * spec.samples.dt();
        } else {
          double m = 0.0;
          for (const auto& term : spec.terms) m = std::max(m, term.signal->min_imaginary_time());
          return m;
        }
      },
      impl_->spec);
}

std::string DrivingSignal::describe() const {
  return std::visit(
      [](const auto& spec) -> std::string {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, CauchySpec>) {
          return "cauchy(" + std::to_string(spec.n) + ")";
        } else if constexpr (std::is_same_v<T, SampledSpec>) {
          return "sampled(" + std::to_string(spec.samples.samples().size()) + " samples)";
        } else {
          std::string s = "combination(";
          for (std::size_t k = 0; k < spec.terms.size(); ++k) {
            if (k) s += " + ";
            s += spec.terms[k].signal->describe();
          }
          return s + ")";
        }
      },
      impl_->spec);
}

double spectrum_cauchy(int n, double omega, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Cauchy order must be positive");
  const double x = omega * b;
  const double step = x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5);
  if (step == 0.0) return 0.0;
  const double sign_b = b > 0.0 ? 1.0 : (b < 0.0 ? -1.0 : 0.0);
  return sign_b * step * std::pow(omega, n - 1) * std::exp(-x);
}

SpectralProfile spectral_profile(int n, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Cauchy order must be positive");
  if (b == 0.0) throw Error(ErrorCode::InvalidArgument, "b must be nonzero");
  return {n / b, std::sqrt(static_cast<double>(n)) / std::fabs(b)};
}

double pulse_duration(double theta, double a, double b) {
  if (!(std::fabs(b) > a)) throw Error(ErrorCode::InvalidArgument, "|b| must exceed a");
  return std::fabs(b - a * std::cos(theta));
}

double peak_strength(double theta, int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Cauchy order must be positive");
  return factorial(n - 1) / (2.0 * kPi * std::pow(pulse_duration(theta, a, b), n));
}

double diffraction_angle(double beta, int n, double a, double b) {
  if (n < 1 || !(beta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and beta >= 0");
  if (!(a > 0.0) || !(b > a)) throw Error(ErrorCode::InvalidArgument, "need b > a > 0");
  const double x = std::expm1(beta / n) * (b - a) / (2.0 * a);
  if (x > 1.0) throw Error(ErrorCode::NoSolution, "attenuation level is never reached");
  return 2.0 * std::asin(std::sqrt(x));
}

MixedSignals mixed_signals(const DrivingSignal& sig, cplx sigma, cplx tau) {
  const SignalDerivs r = sig.eval(tau - sigma);
  const SignalDerivs a = sig.eval(tau + sigma);
  return {r.g + a.g, r.g - a.g, r.dg + a.dg, r.dg - a.dg, r.ddg + a.ddg, r.ddg - a.ddg};
}

double boundary_value(const DrivingSignal& sig, double t, double b) {
  const cplx v = sig.value(cplx(t, -b)) - sig.value(cplx(t, b));
  return v.real();
}

std::vector<RecoveryStep> boundary_recovery(const DrivingSignal& sig, double t, double g0_at_t,
                                            const std::vector<double>& b_values) {
  std::vector<RecoveryStep> out;
  out.reserve(b_values.size());
  for (double b : b_values) {
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "boundary recovery needs b > 0");
    const double v = boundary_value(sig, t, b);
    out.push_back({b, v, v - g0_at_t});
  }
  return out;
}

}  // namespace emw
